#pragma once

// Inference systems and generalized rewrite systems: the rule and clause
// containers, compilation of a rewrite system into its inference system, and
// the Horn theory read off from the rules.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eiskit/diagnostics.hpp"
#include "eiskit/term.hpp"

namespace eiskit {

inline const std::string kRewName = "->";
inline const std::string kRewsName = "->*";

inline Symbol rew_symbol() { return pred_symbol(kRewName, 2); }
inline Symbol rews_symbol() { return pred_symbol(kRewsName, 2); }

// Declared function and predicate symbols, in declaration order.
class Signature {
 public:
  const std::vector<Symbol>& functions() const { return funs_; }
  const std::vector<Symbol>& predicates() const { return preds_; }

  bool add_function(Symbol s) {
    if (find_function(s.name)) return false;
    funs_.push_back(std::move(s));
    return true;
  }
  bool add_predicate(Symbol s) {
    if (find_predicate(s.name)) return false;
    preds_.push_back(std::move(s));
    return true;
  }

  const Symbol* find_function(const std::string& name) const {
    for (const Symbol& s : funs_)
      if (s.name == name) return &s;
    return nullptr;
  }
  const Symbol* find_predicate(const std::string& name) const {
    for (const Symbol& s : preds_)
      if (s.name == name) return &s;
    return nullptr;
  }

  // First declared constant, if any. Used as the symmetry-breaking pin in
  // model search and as the seed of the Herbrand universe.
  const Symbol* first_constant() const {
    for (const Symbol& s : funs_)
      if (s.arity == 0) return &s;
    return nullptr;
  }

  bool has_constant() const { return first_constant() != nullptr; }

 private:
  std::vector<Symbol> funs_;
  std::vector<Symbol> preds_;
};

// Per-symbol sets of active argument positions (1-based). Symbols without an
// entry fall back to the document default: all positions active, or none when
// bottom_default is set.
struct ReplacementMap {
  bool bottom_default = false;
  std::map<std::string, std::set<int>> entries;

  std::set<int> active_positions(const Symbol& f) const {
    auto it = entries.find(f.name);
    if (it != entries.end()) return it->second;
    if (bottom_default) return {};
    std::set<int> all;
    for (int i = 1; i <= f.arity; ++i) all.insert(i);
    return all;
  }
};

struct HornClause {
  Atom head;
  std::vector<Atom> body;
};

struct RewriteRule {
  Term lhs;
  Term rhs;
  std::vector<Atom> conditions;
};

struct Gtrs {
  Signature sig;  // predicates include -> and ->*
  ReplacementMap mu;
  std::vector<HornClause> horn;
  std::vector<RewriteRule> rules;
};

struct InferenceRule {
  std::string label;
  std::vector<Atom> premises;
  Atom conclusion;

  // Rule variables in first-occurrence order, premises first.
  std::vector<std::string> variables() const {
    std::vector<std::string> vars;
    for (const Atom& p : premises) p.collect_vars(vars);
    conclusion.collect_vars(vars);
    return vars;
  }
};

struct Eis {
  Signature sig;
  std::vector<InferenceRule> rules;
};

// Universally closed implication body_1 /\ ... /\ body_n => head.
struct HornSentence {
  std::string label;
  std::vector<std::string> vars;
  std::vector<Atom> body;
  Atom head;
};

namespace detail {

inline void check_atom_signature(const Atom& a, const Signature& sig,
                                 std::vector<Diagnostic>& out) {
  const Symbol* p = sig.find_predicate(a.pred.name);
  if (!p)
    out.push_back({0, 0, "undeclared predicate '" + a.pred.name + "'"});
  else if (p->arity != a.pred.arity)
    out.push_back({0, 0, "arity mismatch for predicate '" + a.pred.name + "'"});
  // walk terms
  struct {
    const Signature& sig;
    std::vector<Diagnostic>& out;
    void walk(const Term& t) {
      if (t.is_var() || t.is_grounded_constant()) return;
      const Symbol* f = sig.find_function(t.symbol().name);
      if (!f)
        out.push_back({0, 0, "undeclared function '" + t.symbol().name + "'"});
      else if (f->arity != t.symbol().arity)
        out.push_back({0, 0, "arity mismatch for function '" + t.symbol().name + "'"});
      for (const Term& a : t.args()) walk(a);
    }
  } w{sig, out};
  for (const Term& t : a.args) w.walk(t);
}

}  // namespace detail

inline std::vector<Diagnostic> validate_gtrs(const Gtrs& g) {
  std::vector<Diagnostic> out;
  for (const auto& [name, positions] : g.mu.entries) {
    const Symbol* f = g.sig.find_function(name);
    if (!f) {
      out.push_back({0, 0, "replacement map entry for undeclared function '" + name + "'"});
      continue;
    }
    for (int i : positions)
      if (i < 1 || i > f->arity)
        out.push_back({0, 0, "replacement map position " + std::to_string(i) +
                                 " out of range for '" + name + "/" +
                                 std::to_string(f->arity) + "'"});
  }
  for (const HornClause& c : g.horn) {
    if (c.head.pred.name == kRewName || c.head.pred.name == kRewsName)
      out.push_back({0, 0, "clause head uses reserved predicate '" + c.head.pred.name + "'"});
    detail::check_atom_signature(c.head, g.sig, out);
    for (const Atom& b : c.body) detail::check_atom_signature(b, g.sig, out);
  }
  for (const RewriteRule& r : g.rules) {
    if (r.lhs.is_var())
      out.push_back({0, 0, "rule left-hand side is a variable"});
    detail::check_atom_signature(Atom(rew_symbol(), {r.lhs, r.rhs}), g.sig, out);
    for (const Atom& c : r.conditions) detail::check_atom_signature(c, g.sig, out);
  }
  return out;
}

inline std::vector<Diagnostic> validate_eis(const Eis& e) {
  std::vector<Diagnostic> out;
  for (const InferenceRule& r : e.rules) {
    detail::check_atom_signature(r.conclusion, e.sig, out);
    for (const Atom& p : r.premises) detail::check_atom_signature(p, e.sig, out);
  }
  return out;
}

// Builds the inference system of a rewrite system: reflexivity and
// compatibility for ->*, one propagation rule per active argument position,
// and one rule per Horn clause and per rewrite rule, in that order.
inline Eis compile_gtrs(const Gtrs& g) {
  Eis e;
  e.sig = g.sig;

  const Term x = Term::var("X");
  const Term y = Term::var("Y");
  const Term z = Term::var("Z");
  const Symbol rew = rew_symbol();
  const Symbol rews = rews_symbol();

  e.rules.push_back({"Rf", {}, Atom(rews, {x, x})});
  e.rules.push_back({"C", {Atom(rew, {x, y}), Atom(rews, {y, z})}, Atom(rews, {x, z})});

  for (const Symbol& f : g.sig.functions()) {
    for (int i : g.mu.active_positions(f)) {
      std::vector<Term> lhs_args, rhs_args;
      for (int k = 1; k <= f.arity; ++k) {
        Term xk = Term::var("X" + std::to_string(k));
        lhs_args.push_back(xk);
        rhs_args.push_back(k == i ? Term::var("Y" + std::to_string(k)) : xk);
      }
      Atom premise(rew, {lhs_args[i - 1], rhs_args[i - 1]});
      Atom conclusion(rew, {Term::app(f, lhs_args), Term::app(f, rhs_args)});
      e.rules.push_back({"Pr(" + f.name + "," + std::to_string(i) + ")",
                         {premise},
                         conclusion});
    }
  }

  int k = 0;
  for (const HornClause& c : g.horn)
    e.rules.push_back({"HC(" + std::to_string(++k) + ")", c.body, c.head});
  for (const RewriteRule& r : g.rules)
    e.rules.push_back({"HC(" + std::to_string(++k) + ")",
                       r.conditions,
                       Atom(rew, {r.lhs, r.rhs})});
  return e;
}

// One sentence per rule: premises become the body, the conclusion the head,
// universally closed over the rule variables.
inline std::vector<HornSentence> theory_of(const Eis& e) {
  std::vector<HornSentence> th;
  th.reserve(e.rules.size());
  for (const InferenceRule& r : e.rules)
    th.push_back({r.label, r.variables(), r.premises, r.conclusion});
  return th;
}

inline std::string to_string(const InferenceRule& r) {
  std::string out = "(" + r.label + ") ";
  for (std::size_t i = 0; i < r.premises.size(); ++i) {
    if (i) out += ", ";
    out += to_string(r.premises[i]);
  }
  out += " |- " + to_string(r.conclusion);
  return out;
}

inline std::string to_string(const HornSentence& s) {
  std::string out;
  for (const std::string& v : s.vars) out += "forall " + v + ". ";
  for (std::size_t i = 0; i < s.body.size(); ++i) {
    if (i) out += " /\\ ";
    out += to_string(s.body[i]);
  }
  if (!s.body.empty()) out += " => ";
  out += to_string(s.head);
  return out;
}

inline std::string to_string(const std::vector<HornSentence>& th) {
  std::string out;
  for (const HornSentence& s : th) out += "(" + s.label + ") " + to_string(s) + "\n";
  return out;
}

}  // namespace eiskit
