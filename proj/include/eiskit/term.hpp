#pragma once

// First-order terms, atoms and substitutions, plus the operations everything
// else is built on: substitution application, one-way matching, unification
// with occur check, and the grounding maps between variables and their
// dedicated constants.

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eiskit {

class EisError : public std::runtime_error {
 public:
  explicit EisError(const std::string& what) : std::runtime_error(what) {}
};

enum class SymbolKind { Function, Predicate, GroundedVar };

// A named symbol with a fixed arity. Grounded-variable constants (kind
// GroundedVar) are the nullary constants standing in for a variable of the
// same name; keeping them apart by kind rather than by name mangling means a
// user constant can never collide with them.
struct Symbol {
  std::string name;
  int arity = 0;
  SymbolKind kind = SymbolKind::Function;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend std::strong_ordering operator<=>(const Symbol&, const Symbol&) = default;
};

inline Symbol fun_symbol(std::string name, int arity) {
  return Symbol{std::move(name), arity, SymbolKind::Function};
}
inline Symbol pred_symbol(std::string name, int arity) {
  return Symbol{std::move(name), arity, SymbolKind::Predicate};
}
// The constant that replaces variable `var` under grounding.
inline Symbol grounded_symbol(std::string var) {
  return Symbol{std::move(var), 0, SymbolKind::GroundedVar};
}

// A term is either a variable or an application of a function symbol to
// exactly arity-many arguments. Values are immutable once built.
class Term {
 public:
  Term() : is_var_(true), name_("_") {}

  static Term var(std::string name) {
    Term t;
    t.is_var_ = true;
    t.name_ = std::move(name);
    return t;
  }

  static Term app(Symbol sym, std::vector<Term> args = {}) {
    if (sym.kind == SymbolKind::Predicate)
      throw EisError("predicate symbol '" + sym.name + "' used as a term");
    if (static_cast<int>(args.size()) != sym.arity)
      throw EisError("arity mismatch for '" + sym.name + "': expected " +
                     std::to_string(sym.arity) + " arguments, got " +
                     std::to_string(args.size()));
    Term t;
    t.is_var_ = false;
    t.sym_ = std::move(sym);
    t.args_ = std::move(args);
    return t;
  }

  bool is_var() const { return is_var_; }
  bool is_app() const { return !is_var_; }
  bool is_grounded_constant() const {
    return !is_var_ && sym_.kind == SymbolKind::GroundedVar;
  }

  const std::string& var_name() const {
    if (!is_var_) throw EisError("var_name() on an application");
    return name_;
  }
  const Symbol& symbol() const {
    if (is_var_) throw EisError("symbol() on a variable");
    return sym_;
  }
  const std::vector<Term>& args() const { return args_; }

  bool is_ground() const {
    if (is_var_) return false;
    return std::all_of(args_.begin(), args_.end(),
                       [](const Term& a) { return a.is_ground(); });
  }

  // Depth of a constant or variable is 0; an application adds one level.
  int depth() const {
    int d = 0;
    for (const Term& a : args_) d = std::max(d, 1 + a.depth());
    return d;
  }

  // Variables in first-occurrence order, without duplicates.
  void collect_vars(std::vector<std::string>& out) const {
    if (is_var_) {
      if (std::find(out.begin(), out.end(), name_) == out.end()) out.push_back(name_);
      return;
    }
    for (const Term& a : args_) a.collect_vars(out);
  }

  std::set<std::string> vars() const {
    std::vector<std::string> v;
    collect_vars(v);
    return std::set<std::string>(v.begin(), v.end());
  }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.is_var_ != b.is_var_) return false;
    if (a.is_var_) return a.name_ == b.name_;
    return a.sym_ == b.sym_ && a.args_ == b.args_;
  }

  // single-pass three-way comparison (variables sort before applications)
  friend int compare(const Term& a, const Term& b) {
    if (a.is_var_ != b.is_var_) return a.is_var_ ? -1 : 1;
    if (a.is_var_) return a.name_.compare(b.name_);
    if (auto c = a.sym_ <=> b.sym_; c != 0) return c < 0 ? -1 : 1;
    for (std::size_t i = 0; i < a.args_.size() && i < b.args_.size(); ++i)
      if (int c = compare(a.args_[i], b.args_[i]); c != 0) return c;
    if (a.args_.size() != b.args_.size()) return a.args_.size() < b.args_.size() ? -1 : 1;
    return 0;
  }

  friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

 private:
  bool is_var_ = true;
  std::string name_;
  Symbol sym_;
  std::vector<Term> args_;
};

struct Atom {
  Symbol pred;
  std::vector<Term> args;

  Atom() = default;
  Atom(Symbol p, std::vector<Term> a) : pred(std::move(p)), args(std::move(a)) {
    if (pred.kind != SymbolKind::Predicate)
      throw EisError("'" + pred.name + "' is not a predicate symbol");
    if (static_cast<int>(args.size()) != pred.arity)
      throw EisError("arity mismatch for predicate '" + pred.name + "'");
  }

  bool is_ground() const {
    return std::all_of(args.begin(), args.end(),
                       [](const Term& t) { return t.is_ground(); });
  }
  int term_depth() const {
    int d = 0;
    for (const Term& t : args) d = std::max(d, t.depth());
    return d;
  }
  void collect_vars(std::vector<std::string>& out) const {
    for (const Term& t : args) t.collect_vars(out);
  }
  std::set<std::string> vars() const {
    std::vector<std::string> v;
    collect_vars(v);
    return std::set<std::string>(v.begin(), v.end());
  }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.pred == b.pred && a.args == b.args;
  }
  friend bool operator<(const Atom& a, const Atom& b) {
    if (auto c = a.pred <=> b.pred; c != 0) return c < 0;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (int c = compare(a.args[i], b.args[i]); c != 0) return c < 0;
    return false;
  }
};

// Finite map from variable names to terms. Kept ordered so that printing and
// iteration are deterministic.
class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> init)
      : map_(init) {}

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  bool binds(const std::string& v) const { return map_.count(v) != 0; }

  const Term* lookup(const std::string& v) const {
    auto it = map_.find(v);
    return it == map_.end() ? nullptr : &it->second;
  }

  void bind(std::string v, Term t) { map_.insert_or_assign(std::move(v), std::move(t)); }
  void erase(const std::string& v) { map_.erase(v); }

  const std::map<std::string, Term>& bindings() const { return map_; }

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.map_ == b.map_;
  }

 private:
  std::map<std::string, Term> map_;
};

inline Term apply(const Substitution& s, const Term& t) {
  if (t.is_var()) {
    const Term* bound = s.lookup(t.var_name());
    return bound ? *bound : t;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(apply(s, a));
  return Term::app(t.symbol(), std::move(args));
}

inline Atom apply(const Substitution& s, const Atom& a) {
  std::vector<Term> args;
  args.reserve(a.args.size());
  for (const Term& t : a.args) args.push_back(apply(s, t));
  return Atom(a.pred, std::move(args));
}

// compose(outer, inner): apply(compose(outer, inner), t) == apply(outer, apply(inner, t)).
inline Substitution compose(const Substitution& outer, const Substitution& inner) {
  Substitution out;
  for (const auto& [v, t] : inner.bindings()) out.bind(v, apply(outer, t));
  for (const auto& [v, t] : outer.bindings())
    if (!out.binds(v)) out.bind(v, t);
  return out;
}

namespace detail {

inline bool match_into(const Term& pattern, const Term& subject, Substitution& s) {
  if (pattern.is_var()) {
    if (const Term* bound = s.lookup(pattern.var_name())) return *bound == subject;
    s.bind(pattern.var_name(), subject);
    return true;
  }
  if (subject.is_var()) return false;  // subject variables are rigid
  if (!(pattern.symbol() == subject.symbol())) return false;
  for (std::size_t i = 0; i < pattern.args().size(); ++i)
    if (!match_into(pattern.args()[i], subject.args()[i], s)) return false;
  return true;
}

inline bool occurs(const std::string& v, const Term& t) {
  if (t.is_var()) return t.var_name() == v;
  return std::any_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return occurs(v, a); });
}

inline bool unify_into(const Term& a, const Term& b, Substitution& s) {
  Term x = apply(s, a);
  Term y = apply(s, b);
  if (x.is_var() && y.is_var() && x.var_name() == y.var_name()) return true;
  if (x.is_var()) {
    if (occurs(x.var_name(), y)) return false;
    Substitution binding;
    binding.bind(x.var_name(), y);
    s = compose(binding, s);
    return true;
  }
  if (y.is_var()) return unify_into(y, x, s);
  if (!(x.symbol() == y.symbol())) return false;
  for (std::size_t i = 0; i < x.args().size(); ++i)
    if (!unify_into(x.args()[i], y.args()[i], s)) return false;
  return true;
}

}  // namespace detail

// One-way matching: the unique minimal s with apply(s, pattern) == subject,
// if it exists. Variables of the subject are treated as rigid.
inline std::optional<Substitution> match(const Term& pattern, const Term& subject,
                                         Substitution seed = {}) {
  if (detail::match_into(pattern, subject, seed)) return seed;
  return std::nullopt;
}

inline std::optional<Substitution> match(const Atom& pattern, const Atom& subject,
                                         Substitution seed = {}) {
  if (!(pattern.pred == subject.pred)) return std::nullopt;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!detail::match_into(pattern.args[i], subject.args[i], seed)) return std::nullopt;
  return seed;
}

// Most general unifier with occur check. Callers are expected to hand in
// terms with disjoint variable sets when that matters; nothing here renames.
inline std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution s;
  if (detail::unify_into(a, b, s)) return s;
  return std::nullopt;
}

inline std::optional<Substitution> unify(const Atom& a, const Atom& b) {
  if (!(a.pred == b.pred)) return std::nullopt;
  Substitution s;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!detail::unify_into(a.args[i], b.args[i], s)) return std::nullopt;
  return s;
}

// Grounding: every variable v becomes its dedicated constant; the inverse map
// restores the variables. Both are total and deterministic.
inline Term ground_down(const Term& t) {
  if (t.is_var()) return Term::app(grounded_symbol(t.var_name()));
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(ground_down(a));
  return Term::app(t.symbol(), std::move(args));
}

inline Atom ground_down(const Atom& a) {
  std::vector<Term> args;
  args.reserve(a.args.size());
  for (const Term& t : a.args) args.push_back(ground_down(t));
  return Atom(a.pred, std::move(args));
}

inline Substitution ground_down(const Substitution& s) {
  Substitution out;
  for (const auto& [v, t] : s.bindings()) out.bind(v, ground_down(t));
  return out;
}

inline Term ground_up(const Term& t) {
  if (t.is_var()) return t;
  if (t.is_grounded_constant()) return Term::var(t.symbol().name);
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(ground_up(a));
  return Term::app(t.symbol(), std::move(args));
}

inline Atom ground_up(const Atom& a) {
  std::vector<Term> args;
  args.reserve(a.args.size());
  for (const Term& t : a.args) args.push_back(ground_up(t));
  return Atom(a.pred, std::move(args));
}

inline void collect_grounded_constants(const Term& t, std::set<Symbol>& out) {
  if (t.is_var()) return;
  if (t.is_grounded_constant()) out.insert(t.symbol());
  for (const Term& a : t.args()) collect_grounded_constants(a, out);
}

inline void collect_grounded_constants(const Atom& a, std::set<Symbol>& out) {
  for (const Term& t : a.args) collect_grounded_constants(t, out);
}

// Partial grounding: only variables in `which` become constants.
inline Term ground_down_vars(const Term& t, const std::set<std::string>& which) {
  if (t.is_var())
    return which.count(t.var_name()) ? Term::app(grounded_symbol(t.var_name())) : t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(ground_down_vars(a, which));
  return Term::app(t.symbol(), std::move(args));
}

inline Atom ground_down_vars(const Atom& a, const std::set<std::string>& which) {
  std::vector<Term> args;
  args.reserve(a.args.size());
  for (const Term& t : a.args) args.push_back(ground_down_vars(t, which));
  return Atom(a.pred, std::move(args));
}

// Concrete syntax. Infix for the two rewriting predicates, %v for grounded
// constants, everything else prefix.
inline bool is_infix_predicate(const Symbol& p) {
  return p.name == "->" || p.name == "->*";
}

inline std::string to_string(const Term& t) {
  if (t.is_var()) return t.var_name();
  if (t.is_grounded_constant()) return "%" + t.symbol().name;
  std::string out = t.symbol().name;
  if (!t.args().empty()) {
    out += "(";
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ", ";
      out += to_string(t.args()[i]);
    }
    out += ")";
  }
  return out;
}

inline std::string to_string(const Atom& a) {
  if (is_infix_predicate(a.pred) && a.args.size() == 2)
    return to_string(a.args[0]) + " " + a.pred.name + " " + to_string(a.args[1]);
  std::string out = a.pred.name;
  if (!a.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ", ";
      out += to_string(a.args[i]);
    }
    out += ")";
  }
  return out;
}

inline std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += v + " -> " + to_string(t);
  }
  return out + "}";
}

}  // namespace eiskit
