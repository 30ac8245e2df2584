#pragma once

// First-order formulas over the term language: the AST, prenex/NNF
// normalization, positivity classification, partial grounding of universal
// variables, and the quantifier-shifting transformations used for checking
// properties against the grounded canonical model.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eiskit/term.hpp"

namespace eiskit {

class Formula {
 public:
  enum class Tag { Atom, Equal, Not, And, Or, Implies, Forall, Exists };

  static Formula atom(eiskit::Atom a) {
    Formula f(Tag::Atom);
    f.atom_ = std::move(a);
    return f;
  }
  static Formula equal(Term l, Term r) {
    Formula f(Tag::Equal);
    f.terms_ = {std::move(l), std::move(r)};
    return f;
  }
  static Formula negation(Formula g) {
    Formula f(Tag::Not);
    f.kids_.push_back(std::move(g));
    return f;
  }
  // N-ary connectives are kept flat: nested same-tag children are spliced in,
  // and a one-element list collapses to its element.
  static Formula conj(std::vector<Formula> kids) { return nary(Tag::And, std::move(kids)); }
  static Formula disj(std::vector<Formula> kids) { return nary(Tag::Or, std::move(kids)); }
  static Formula implies(Formula a, Formula b) {
    Formula f(Tag::Implies);
    f.kids_.push_back(std::move(a));
    f.kids_.push_back(std::move(b));
    return f;
  }
  static Formula forall(std::string v, Formula body) {
    Formula f(Tag::Forall);
    f.var_ = std::move(v);
    f.kids_.push_back(std::move(body));
    return f;
  }
  static Formula exists(std::string v, Formula body) {
    Formula f(Tag::Exists);
    f.var_ = std::move(v);
    f.kids_.push_back(std::move(body));
    return f;
  }

  Tag tag() const { return tag_; }
  bool is_quantifier() const { return tag_ == Tag::Forall || tag_ == Tag::Exists; }
  const eiskit::Atom& atom() const { return *atom_; }
  const Term& left() const { return terms_[0]; }
  const Term& right() const { return terms_[1]; }
  const std::vector<Formula>& children() const { return kids_; }
  const Formula& child(std::size_t i = 0) const { return kids_[i]; }
  const std::string& bound_var() const { return var_; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.tag_ != b.tag_ || a.var_ != b.var_) return false;
    if (a.tag_ == Tag::Atom) return a.atom_ == b.atom_;
    if (a.tag_ == Tag::Equal) return a.terms_ == b.terms_;
    return a.kids_ == b.kids_;
  }

 private:
  explicit Formula(Tag t) : tag_(t) {}

  static Formula nary(Tag t, std::vector<Formula> kids) {
    if (kids.empty()) throw EisError("empty connective");
    std::vector<Formula> flat;
    for (Formula& k : kids) {
      if (k.tag_ == t)
        for (Formula& g : k.kids_) flat.push_back(std::move(g));
      else
        flat.push_back(std::move(k));
    }
    if (flat.size() == 1) return std::move(flat[0]);
    Formula f(t);
    f.kids_ = std::move(flat);
    return f;
  }

  Tag tag_;
  std::optional<eiskit::Atom> atom_;
  std::vector<Term> terms_;
  std::vector<Formula> kids_;
  std::string var_;
};

namespace detail {

inline void free_vars_into(const Formula& f, std::set<std::string>& bound,
                           std::vector<std::string>& out) {
  switch (f.tag()) {
    case Formula::Tag::Atom: {
      std::vector<std::string> vs;
      f.atom().collect_vars(vs);
      for (const std::string& v : vs)
        if (!bound.count(v) && std::find(out.begin(), out.end(), v) == out.end())
          out.push_back(v);
      return;
    }
    case Formula::Tag::Equal: {
      std::vector<std::string> vs;
      f.left().collect_vars(vs);
      f.right().collect_vars(vs);
      for (const std::string& v : vs)
        if (!bound.count(v) && std::find(out.begin(), out.end(), v) == out.end())
          out.push_back(v);
      return;
    }
    case Formula::Tag::Forall:
    case Formula::Tag::Exists: {
      bool fresh = bound.insert(f.bound_var()).second;
      free_vars_into(f.child(), bound, out);
      if (fresh) bound.erase(f.bound_var());
      return;
    }
    default:
      for (const Formula& k : f.children()) free_vars_into(k, bound, out);
  }
}

}  // namespace detail

inline std::vector<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound;
  std::vector<std::string> out;
  detail::free_vars_into(f, bound, out);
  return out;
}

inline void collect_grounded_constants(const Formula& f, std::set<Symbol>& out) {
  switch (f.tag()) {
    case Formula::Tag::Atom:
      collect_grounded_constants(f.atom(), out);
      return;
    case Formula::Tag::Equal:
      collect_grounded_constants(f.left(), out);
      collect_grounded_constants(f.right(), out);
      return;
    default:
      for (const Formula& k : f.children()) collect_grounded_constants(k, out);
  }
}

inline bool mentions_grounded_constant(const Formula& f) {
  std::set<Symbol> found;
  collect_grounded_constants(f, found);
  return !found.empty();
}

inline bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

// Replaces free occurrences of a variable; shadowing quantifiers stop the
// walk. The replacement must not capture (grounded constants never do).
inline Formula substitute(const Formula& f, const std::string& var, const Term& t) {
  switch (f.tag()) {
    case Formula::Tag::Atom: {
      Substitution s;
      s.bind(var, t);
      return Formula::atom(apply(s, f.atom()));
    }
    case Formula::Tag::Equal: {
      Substitution s;
      s.bind(var, t);
      return Formula::equal(apply(s, f.left()), apply(s, f.right()));
    }
    case Formula::Tag::Not:
      return Formula::negation(substitute(f.child(), var, t));
    case Formula::Tag::And:
    case Formula::Tag::Or: {
      std::vector<Formula> kids;
      for (const Formula& k : f.children()) kids.push_back(substitute(k, var, t));
      return f.tag() == Formula::Tag::And ? Formula::conj(std::move(kids))
                                          : Formula::disj(std::move(kids));
    }
    case Formula::Tag::Implies:
      return Formula::implies(substitute(f.child(0), var, t),
                              substitute(f.child(1), var, t));
    case Formula::Tag::Forall:
    case Formula::Tag::Exists: {
      if (f.bound_var() == var) return f;
      Formula body = substitute(f.child(), var, t);
      return f.tag() == Formula::Tag::Forall
                 ? Formula::forall(f.bound_var(), std::move(body))
                 : Formula::exists(f.bound_var(), std::move(body));
    }
  }
  throw EisError("unreachable");
}

// Negation normal form: implications rewritten, negations pushed to the
// atoms, double negations removed. Quantifiers dualize under negation.
inline Formula nnf(const Formula& f, bool negated = false) {
  switch (f.tag()) {
    case Formula::Tag::Atom:
    case Formula::Tag::Equal:
      return negated ? Formula::negation(f) : f;
    case Formula::Tag::Not:
      return nnf(f.child(), !negated);
    case Formula::Tag::And:
    case Formula::Tag::Or: {
      std::vector<Formula> kids;
      for (const Formula& k : f.children()) kids.push_back(nnf(k, negated));
      bool as_and = (f.tag() == Formula::Tag::And) != negated;
      return as_and ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    case Formula::Tag::Implies: {
      Formula a = nnf(f.child(0), !negated);
      Formula b = nnf(f.child(1), negated);
      std::vector<Formula> kids;
      kids.push_back(std::move(a));
      kids.push_back(std::move(b));
      return negated ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    case Formula::Tag::Forall:
    case Formula::Tag::Exists: {
      Formula body = nnf(f.child(), negated);
      bool as_forall = (f.tag() == Formula::Tag::Forall) != negated;
      return as_forall ? Formula::forall(f.bound_var(), std::move(body))
                       : Formula::exists(f.bound_var(), std::move(body));
    }
  }
  throw EisError("unreachable");
}

inline Formula negate_nnf(const Formula& f) { return nnf(f, true); }

enum class Quantifier { Forall, Exists };

struct PrenexForm {
  std::vector<std::pair<Quantifier, std::string>> prefix;
  Formula matrix;
};

namespace detail {

// Renames bound variables so that every binder uses a globally unique name;
// keeps the user's name whenever it is still free.
inline Formula uniquify_bound(const Formula& f, std::set<std::string>& used,
                              std::map<std::string, std::string>& scope) {
  switch (f.tag()) {
    case Formula::Tag::Atom:
    case Formula::Tag::Equal: {
      Formula out = f;
      for (const auto& [from, to] : scope)
        if (from != to) out = substitute(out, from, Term::var(to));
      return out;
    }
    case Formula::Tag::Not:
      return Formula::negation(uniquify_bound(f.child(), used, scope));
    case Formula::Tag::And:
    case Formula::Tag::Or: {
      std::vector<Formula> kids;
      for (const Formula& k : f.children()) kids.push_back(uniquify_bound(k, used, scope));
      return f.tag() == Formula::Tag::And ? Formula::conj(std::move(kids))
                                          : Formula::disj(std::move(kids));
    }
    case Formula::Tag::Implies:
      return Formula::implies(uniquify_bound(f.child(0), used, scope),
                              uniquify_bound(f.child(1), used, scope));
    case Formula::Tag::Forall:
    case Formula::Tag::Exists: {
      std::string name = f.bound_var();
      if (used.count(name)) {
        int i = 1;
        while (used.count(f.bound_var() + "_" + std::to_string(i))) ++i;
        name = f.bound_var() + "_" + std::to_string(i);
      }
      used.insert(name);
      auto saved = scope.find(f.bound_var());
      std::optional<std::string> old;
      if (saved != scope.end()) old = saved->second;
      scope[f.bound_var()] = name;
      Formula body = uniquify_bound(f.child(), used, scope);
      if (old)
        scope[f.bound_var()] = *old;
      else
        scope.erase(f.bound_var());
      return f.tag() == Formula::Tag::Forall ? Formula::forall(name, std::move(body))
                                             : Formula::exists(name, std::move(body));
    }
  }
  throw EisError("unreachable");
}

inline void pull_prefix(const Formula& f, PrenexForm& out) {
  switch (f.tag()) {
    case Formula::Tag::Forall:
    case Formula::Tag::Exists:
      out.prefix.emplace_back(f.tag() == Formula::Tag::Forall ? Quantifier::Forall
                                                              : Quantifier::Exists,
                              f.bound_var());
      pull_prefix(f.child(), out);
      return;
    case Formula::Tag::And:
    case Formula::Tag::Or: {
      std::vector<Formula> kids;
      for (const Formula& k : f.children()) {
        PrenexForm sub{{}, k};
        sub.prefix.clear();
        pull_prefix(k, sub);
        for (auto& q : sub.prefix) out.prefix.push_back(std::move(q));
        kids.push_back(std::move(sub.matrix));
      }
      out.matrix = f.tag() == Formula::Tag::And ? Formula::conj(std::move(kids))
                                                : Formula::disj(std::move(kids));
      return;
    }
    default:
      out.matrix = f;
      return;
  }
}

}  // namespace detail

// Prenex negation normal form. Bound variables are standardized apart first,
// so hoisting quantifiers over the (NNF) connectives cannot capture.
inline PrenexForm to_prenex_nnf(const Formula& f) {
  Formula n = nnf(f);
  std::set<std::string> used;
  for (const std::string& v : free_vars(n)) used.insert(v);
  std::map<std::string, std::string> scope;
  Formula u = detail::uniquify_bound(n, used, scope);
  PrenexForm out{{}, u};
  out.prefix.clear();
  detail::pull_prefix(u, out);
  return out;
}

inline Formula from_prenex(const PrenexForm& p) {
  Formula f = p.matrix;
  for (auto it = p.prefix.rbegin(); it != p.prefix.rend(); ++it)
    f = it->first == Quantifier::Forall ? Formula::forall(it->second, std::move(f))
                                        : Formula::exists(it->second, std::move(f));
  return f;
}

enum class FormulaClass { Ecbca, AndPositive, Positive, General };

struct Classification {
  FormulaClass cls = FormulaClass::General;
  std::vector<std::pair<Quantifier, std::string>> prefix;
  std::vector<std::string> universal_vars;    // V_U, in prefix order
  std::vector<std::string> existential_vars;  // E, in prefix order
  Formula normalized = Formula::equal(Term::var("_"), Term::var("_"));
};

inline std::string to_string(FormulaClass c) {
  switch (c) {
    case FormulaClass::Ecbca: return "ecbca";
    case FormulaClass::AndPositive: return "and-positive";
    case FormulaClass::Positive: return "positive";
    case FormulaClass::General: return "general";
  }
  return "general";
}

namespace detail {

inline bool is_positive_matrix(const Formula& f) {
  switch (f.tag()) {
    case Formula::Tag::Atom:
      return true;
    case Formula::Tag::And:
    case Formula::Tag::Or:
      return std::all_of(f.children().begin(), f.children().end(), is_positive_matrix);
    default:
      return false;
  }
}

inline bool is_conjunction_of_atoms(const Formula& f) {
  if (f.tag() == Formula::Tag::Atom) return true;
  if (f.tag() != Formula::Tag::And) return false;
  return std::all_of(f.children().begin(), f.children().end(),
                     [](const Formula& k) { return k.tag() == Formula::Tag::Atom; });
}

inline bool uses_only_conjunction(const Formula& f) {
  switch (f.tag()) {
    case Formula::Tag::Atom:
      return true;
    case Formula::Tag::And:
      return std::all_of(f.children().begin(), f.children().end(), uses_only_conjunction);
    default:
      return false;
  }
}

}  // namespace detail

// Classifies a sentence by the shape of its prenex normal form.
inline Classification classify(const Formula& f) {
  if (!is_sentence(f)) throw EisError("classify: formula has free variables");
  Classification out;
  PrenexForm p = to_prenex_nnf(f);
  out.prefix = p.prefix;
  out.normalized = from_prenex(p);
  for (const auto& [q, v] : p.prefix)
    (q == Quantifier::Forall ? out.universal_vars : out.existential_vars).push_back(v);
  if (!detail::is_positive_matrix(p.matrix)) {
    out.cls = FormulaClass::General;
  } else if (out.universal_vars.empty()) {
    out.cls = FormulaClass::Ecbca;
  } else if (detail::uses_only_conjunction(p.matrix)) {
    out.cls = FormulaClass::AndPositive;
  } else {
    out.cls = FormulaClass::Positive;
  }
  return out;
}

// Replaces each universally quantified variable in U by its grounded
// constant and removes its quantifier. Other quantifiers stay in place.
inline Formula partial_ground(const Formula& f, const std::set<std::string>& targets) {
  switch (f.tag()) {
    case Formula::Tag::Forall:
      if (targets.count(f.bound_var())) {
        Formula body = substitute(f.child(), f.bound_var(),
                                  Term::app(grounded_symbol(f.bound_var())));
        return partial_ground(body, targets);
      }
      return Formula::forall(f.bound_var(), partial_ground(f.child(), targets));
    case Formula::Tag::Exists:
      if (targets.count(f.bound_var()))
        throw EisError("partial_ground: variable '" + f.bound_var() +
                       "' is existentially quantified");
      return Formula::exists(f.bound_var(), partial_ground(f.child(), targets));
    case Formula::Tag::Not:
      return Formula::negation(partial_ground(f.child(), targets));
    case Formula::Tag::And:
    case Formula::Tag::Or: {
      std::vector<Formula> kids;
      for (const Formula& k : f.children()) kids.push_back(partial_ground(k, targets));
      return f.tag() == Formula::Tag::And ? Formula::conj(std::move(kids))
                                          : Formula::disj(std::move(kids));
    }
    case Formula::Tag::Implies:
      return Formula::implies(partial_ground(f.child(0), targets),
                              partial_ground(f.child(1), targets));
    default:
      return f;
  }
}

inline Formula partial_ground_checked(const Formula& f, const std::set<std::string>& targets) {
  std::set<std::string> seen;
  struct Walk {
    std::set<std::string>& seen;
    void operator()(const Formula& g) {
      if (g.is_quantifier()) seen.insert(g.bound_var());
      for (const Formula& k : g.children()) (*this)(k);
    }
  } walk{seen};
  walk(f);
  for (const std::string& v : targets)
    if (!seen.count(v))
      throw EisError("partial_ground: variable '" + v + "' does not occur in the formula");
  return partial_ground(f, targets);
}

enum class QeDirection { Iff, ForwardOnly, BackwardOnly };

inline std::string to_string(QeDirection d) {
  switch (d) {
    case QeDirection::Iff: return "iff";
    case QeDirection::ForwardOnly: return "then";
    case QeDirection::BackwardOnly: return "if";
  }
  return "iff";
}

// Result of the grounding transformation: the rewritten sentence, the id of
// the transformation rule that applied (README documents the catalog), and
// whether the rewrite preserves truth in both directions or only one.
struct QeResult {
  Formula transformed;
  std::string display;
  QeDirection direction;
  std::string note;
};

namespace detail {

// Distributes a positive matrix into disjunctive normal form.
inline std::vector<std::vector<Atom>> matrix_to_dnf(const Formula& f) {
  switch (f.tag()) {
    case Formula::Tag::Atom:
      return {{f.atom()}};
    case Formula::Tag::Or: {
      std::vector<std::vector<Atom>> out;
      for (const Formula& k : f.children())
        for (auto& c : matrix_to_dnf(k)) out.push_back(std::move(c));
      return out;
    }
    case Formula::Tag::And: {
      std::vector<std::vector<Atom>> acc = {{}};
      for (const Formula& k : f.children()) {
        std::vector<std::vector<Atom>> next;
        for (const auto& partial : acc)
          for (const auto& c : matrix_to_dnf(k)) {
            std::vector<Atom> merged = partial;
            merged.insert(merged.end(), c.begin(), c.end());
            next.push_back(std::move(merged));
          }
        acc = std::move(next);
      }
      return acc;
    }
    default:
      throw EisError("matrix is not positive");
  }
}

}  // namespace detail

// Rewrites a positive prenex sentence into its grounded-and-existential
// form. Universal variables become grounded constants; the surviving prefix
// is purely existential.
inline QeResult qe_transform(const Formula& f) {
  Classification cls = classify(f);
  if (cls.cls == FormulaClass::General)
    throw EisError("qe_transform: sentence is not positive");

  PrenexForm p = to_prenex_nnf(f);
  std::set<std::string> universals(cls.universal_vars.begin(), cls.universal_vars.end());
  const bool no_universals = universals.empty();
  const bool no_existentials = cls.existential_vars.empty();

  auto add_exists_prefix = [&](Formula matrix) {
    for (auto it = p.prefix.rbegin(); it != p.prefix.rend(); ++it)
      if (it->first == Quantifier::Exists)
        matrix = Formula::exists(it->second, std::move(matrix));
    return matrix;
  };

  if (detail::is_conjunction_of_atoms(p.matrix)) {
    std::vector<Atom> atoms;
    if (p.matrix.tag() == Formula::Tag::Atom)
      atoms.push_back(p.matrix.atom());
    else
      for (const Formula& k : p.matrix.children()) atoms.push_back(k.atom());

    std::vector<Formula> grounded;
    for (const Atom& a : atoms)
      grounded.push_back(Formula::atom(ground_down_vars(a, universals)));
    Formula matrix = Formula::conj(std::move(grounded));

    if (no_existentials)
      return {matrix, "(12)", QeDirection::Iff, ""};

    bool disjoint = true;
    for (const std::string& e : cls.existential_vars) {
      int occurrences = 0;
      for (const Atom& a : atoms)
        if (a.vars().count(e)) ++occurrences;
      if (occurrences > 1) disjoint = false;
    }
    Formula out = add_exists_prefix(std::move(matrix));
    if (disjoint)
      return {std::move(out), "(16)", QeDirection::Iff,
              no_universals ? "no universal variables; transformation is the identity" : ""};
    if (no_universals)
      return {std::move(out), "(14)", QeDirection::Iff,
              "no universal variables; transformation is the identity"};
    return {std::move(out), "(14)", QeDirection::ForwardOnly, ""};
  }

  // Disjunctive shape: distribute into DNF first.
  std::vector<std::vector<Atom>> dnf = detail::matrix_to_dnf(p.matrix);
  std::vector<Formula> disjuncts;
  for (const auto& conjunct : dnf) {
    std::vector<Formula> atoms;
    for (const Atom& a : conjunct)
      atoms.push_back(Formula::atom(ground_down_vars(a, universals)));
    disjuncts.push_back(Formula::conj(std::move(atoms)));
  }
  Formula matrix = Formula::disj(std::move(disjuncts));

  if (no_existentials)
    return {std::move(matrix), "(13)", QeDirection::BackwardOnly, ""};
  Formula out = add_exists_prefix(std::move(matrix));
  if (no_universals)
    return {std::move(out), "(15)", QeDirection::Iff,
            "no universal variables; transformation is the identity"};
  return {std::move(out), "(15)", QeDirection::BackwardOnly, ""};
}

// Printing. Precedence: quantifiers bind weakest, then =>, \/, /\, ~.
namespace detail {

inline int precedence(const Formula& f) {
  switch (f.tag()) {
    case Formula::Tag::Forall:
    case Formula::Tag::Exists: return 0;
    case Formula::Tag::Implies: return 1;
    case Formula::Tag::Or: return 2;
    case Formula::Tag::And: return 3;
    case Formula::Tag::Not: return 4;
    default: return 5;
  }
}

inline std::string print_formula(const Formula& f, int min_prec) {
  int prec = precedence(f);
  std::string out;
  switch (f.tag()) {
    case Formula::Tag::Atom:
      out = to_string(f.atom());
      break;
    case Formula::Tag::Equal:
      out = to_string(f.left()) + " = " + to_string(f.right());
      break;
    case Formula::Tag::Not:
      out = "~" + print_formula(f.child(), 4);
      break;
    case Formula::Tag::And:
    case Formula::Tag::Or: {
      const char* sep = f.tag() == Formula::Tag::And ? " /\\ " : " \\/ ";
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += sep;
        out += print_formula(f.children()[i], prec + 1);
      }
      break;
    }
    case Formula::Tag::Implies:
      out = print_formula(f.child(0), 2) + " => " + print_formula(f.child(1), 1);
      break;
    case Formula::Tag::Forall:
    case Formula::Tag::Exists:
      out = (f.tag() == Formula::Tag::Forall ? "forall " : "exists ") + f.bound_var() +
            ". " + print_formula(f.child(), 0);
      break;
  }
  if (prec < min_prec) return "(" + out + ")";
  return out;
}

}  // namespace detail

inline std::string to_string(const Formula& f) { return detail::print_formula(f, 0); }

}  // namespace eiskit
