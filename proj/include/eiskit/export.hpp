#pragma once

// Interchange output for external first-order tools: TPTP FOF problems and
// Prover9/Mace4 input files, plus a reader for the TPTP subset we emit. The
// name mangling table is fixed: `->` becomes rew, `->*` becomes rews, a
// grounded constant %v becomes c_v; everything else passes through.

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eiskit/formula.hpp"
#include "eiskit/model.hpp"
#include "eiskit/parse.hpp"
#include "eiskit/system.hpp"

namespace eiskit {

inline Formula to_formula(const HornSentence& s) {
  Formula head = Formula::atom(s.head);
  Formula f = head;
  if (!s.body.empty()) {
    std::vector<Formula> body;
    body.reserve(s.body.size());
    for (const Atom& b : s.body) body.push_back(Formula::atom(b));
    f = Formula::implies(Formula::conj(std::move(body)), std::move(head));
  }
  for (auto it = s.vars.rbegin(); it != s.vars.rend(); ++it) f = Formula::forall(*it, std::move(f));
  return f;
}

struct ExportJob {
  std::vector<HornSentence> theory;
  std::optional<Formula> goal;
  enum class Mode { Prove, Countermodel } mode = Mode::Prove;
  std::optional<SuhAxiom> suh;
};

namespace detail {

inline std::string mangle_pred(const std::string& name) {
  if (name == kRewName) return "rew";
  if (name == kRewsName) return "rews";
  return name;
}

inline std::string mangle_label(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else if (!out.empty() && out.back() != '_')
      out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "ax" : out;
}

inline void check_exportable(const std::string& name) {
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      throw EisError("symbol '" + name + "' has no interchange representation");
}

inline std::string tptp_term(const Term& t) {
  if (t.is_var()) return t.var_name();
  if (t.is_grounded_constant()) return "c_" + t.symbol().name;
  check_exportable(t.symbol().name);
  std::string out = t.symbol().name;
  if (!t.args().empty()) {
    out += "(";
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ",";
      out += tptp_term(t.args()[i]);
    }
    out += ")";
  }
  return out;
}

inline std::string tptp_atom(const Atom& a) {
  std::string name = mangle_pred(a.pred.name);
  check_exportable(name);
  std::string out = name;
  if (!a.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ",";
      out += tptp_term(a.args[i]);
    }
    out += ")";
  }
  return out;
}

inline std::string tptp_formula(const Formula& f) {
  switch (f.tag()) {
    case Formula::Tag::Atom:
      return tptp_atom(f.atom());
    case Formula::Tag::Equal:
      return tptp_term(f.left()) + " = " + tptp_term(f.right());
    case Formula::Tag::Not:
      return "~(" + tptp_formula(f.child()) + ")";
    case Formula::Tag::And:
    case Formula::Tag::Or: {
      const char* sep = f.tag() == Formula::Tag::And ? " & " : " | ";
      std::string out = "(";
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += sep;
        out += tptp_formula(f.children()[i]);
      }
      return out + ")";
    }
    case Formula::Tag::Implies:
      return "(" + tptp_formula(f.child(0)) + " => " + tptp_formula(f.child(1)) + ")";
    case Formula::Tag::Forall:
    case Formula::Tag::Exists: {
      // group a run of like quantifiers into one block
      std::vector<std::string> vars;
      Formula::Tag q = f.tag();
      const Formula* g = &f;
      while (g->tag() == q) {
        vars.push_back(g->bound_var());
        g = &g->child();
      }
      std::string out = q == Formula::Tag::Forall ? "![" : "?[";
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i) out += ",";
        out += vars[i];
      }
      out += "]: ";
      // binary connectives and negation print their own parentheses
      return out + tptp_formula(*g);
    }
  }
  throw EisError("unreachable");
}

}  // namespace detail

// One fof() line per axiom, goal as conjecture (prove) or negated_conjecture
// axiom (countermodel). Output is deterministic byte for byte.
inline std::string emit_tptp(const ExportJob& job) {
  if (job.mode == ExportJob::Mode::Prove && !job.goal)
    throw EisError("prove job needs a goal formula");
  std::string out;
  for (const HornSentence& s : job.theory)
    out += "fof(" + detail::mangle_label(s.label) + ", axiom, " +
           detail::tptp_formula(to_formula(s)) + ").\n";
  if (job.suh)
    out += "fof(suh, axiom, " + detail::tptp_formula(job.suh->to_formula()) + ").\n";
  if (job.goal) {
    if (job.mode == ExportJob::Mode::Prove)
      out += "fof(goal, conjecture, " + detail::tptp_formula(*job.goal) + ").\n";
    else
      out += "fof(goal, negated_conjecture, ~(" + detail::tptp_formula(*job.goal) + ")).\n";
  }
  return out;
}

namespace detail {

// Prover9 variables are written lowercase; a variable whose lowercase form
// collides with a symbol in use gets a v_ prefix.
struct P9Names {
  std::set<std::string> taken;

  static void collect_term(const Term& t, std::set<std::string>& names) {
    if (t.is_var()) return;
    if (t.is_grounded_constant()) {
      names.insert("c_" + t.symbol().name);
      return;
    }
    names.insert(t.symbol().name);
    for (const Term& a : t.args()) collect_term(a, names);
  }

  static void collect_formula(const Formula& f, std::set<std::string>& names) {
    switch (f.tag()) {
      case Formula::Tag::Atom:
        names.insert(mangle_pred(f.atom().pred.name));
        for (const Term& t : f.atom().args) collect_term(t, names);
        return;
      case Formula::Tag::Equal:
        collect_term(f.left(), names);
        collect_term(f.right(), names);
        return;
      default:
        for (const Formula& k : f.children()) collect_formula(k, names);
    }
  }

  std::string var(const std::string& name) const {
    std::string lower;
    for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (taken.count(lower)) return "v_" + lower;
    return lower;
  }
};

inline std::string p9_term(const Term& t, const P9Names& names) {
  if (t.is_var()) return names.var(t.var_name());
  if (t.is_grounded_constant()) return "c_" + t.symbol().name;
  check_exportable(t.symbol().name);
  std::string out = t.symbol().name;
  if (!t.args().empty()) {
    out += "(";
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ",";
      out += p9_term(t.args()[i], names);
    }
    out += ")";
  }
  return out;
}

inline std::string p9_formula(const Formula& f, const P9Names& names) {
  switch (f.tag()) {
    case Formula::Tag::Atom: {
      const Atom& a = f.atom();
      std::string name = mangle_pred(a.pred.name);
      check_exportable(name);
      std::string out = name;
      if (!a.args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < a.args.size(); ++i) {
          if (i) out += ",";
          out += p9_term(a.args[i], names);
        }
        out += ")";
      }
      return out;
    }
    case Formula::Tag::Equal:
      return p9_term(f.left(), names) + " = " + p9_term(f.right(), names);
    case Formula::Tag::Not:
      return "-(" + p9_formula(f.child(), names) + ")";
    case Formula::Tag::And:
    case Formula::Tag::Or: {
      const char* sep = f.tag() == Formula::Tag::And ? " & " : " | ";
      std::string out = "(";
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += sep;
        out += p9_formula(f.children()[i], names);
      }
      return out + ")";
    }
    case Formula::Tag::Implies:
      return "(" + p9_formula(f.child(0), names) + " -> " + p9_formula(f.child(1), names) + ")";
    case Formula::Tag::Forall:
    case Formula::Tag::Exists: {
      std::string out;
      const Formula* g = &f;
      while (g->is_quantifier()) {
        out += (g->tag() == Formula::Tag::Forall ? "all " : "exists ");
        out += names.var(g->bound_var()) + " ";
        g = &g->child();
      }
      std::string body = p9_formula(*g, names);
      bool self_wrapped = g->tag() == Formula::Tag::And || g->tag() == Formula::Tag::Or ||
                          g->tag() == Formula::Tag::Implies || g->tag() == Formula::Tag::Not;
      return out + (self_wrapped ? body : "(" + body + ")");
    }
  }
  throw EisError("unreachable");
}

}  // namespace detail

// Prover9/Mace4 input. The theory and the surjectivity axiom go into the
// assumptions block; a prove goal goes into the goals block, while a
// countermodel job places the negated goal among the assumptions.
inline std::string emit_p9(const ExportJob& job) {
  if (job.mode == ExportJob::Mode::Prove && !job.goal)
    throw EisError("prove job needs a goal formula");
  detail::P9Names names;
  for (const HornSentence& s : job.theory)
    detail::P9Names::collect_formula(to_formula(s), names.taken);
  if (job.goal) detail::P9Names::collect_formula(*job.goal, names.taken);
  if (job.suh)
    for (const Term& t : job.suh->terms) detail::P9Names::collect_term(t, names.taken);

  std::string out = "formulas(assumptions).\n";
  for (const HornSentence& s : job.theory)
    out += detail::p9_formula(to_formula(s), names) + ".\n";
  if (job.suh) out += detail::p9_formula(job.suh->to_formula(), names) + ".\n";
  if (job.goal && job.mode == ExportJob::Mode::Countermodel)
    out += "-(" + detail::p9_formula(*job.goal, names) + ").\n";
  out += "end_of_list.\n";
  if (job.goal && job.mode == ExportJob::Mode::Prove) {
    out += "\nformulas(goals).\n";
    out += detail::p9_formula(*job.goal, names) + ".\n";
    out += "end_of_list.\n";
  }
  return out;
}

// --- reader for the emitted TPTP subset -------------------------------------

struct TptpUnit {
  std::string name;
  std::string role;
  Formula formula;
};

namespace detail {

struct TptpParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[pos]))) { ++pos; continue; }
      if (text[pos] == '%') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
  }

  bool accept(const std::string& tok) {
    skip_ws();
    if (text.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  void expect(const std::string& tok) {
    if (!accept(tok)) throw EisError("tptp reader: expected '" + tok + "' at offset " +
                                     std::to_string(pos));
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_'))
      ++pos;
    if (pos == start) throw EisError("tptp reader: expected identifier at offset " +
                                     std::to_string(pos));
    return text.substr(start, pos - start);
  }

  bool peek_is(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  Term term() {
    std::string name = ident();
    if (std::isupper(static_cast<unsigned char>(name[0]))) return Term::var(name);
    std::vector<Term> args;
    if (accept("(")) {
      do args.push_back(term());
      while (accept(","));
      expect(")");
    }
    if (name.rfind("c_", 0) == 0 && args.empty())
      return Term::app(grounded_symbol(name.substr(2)));
    return Term::app(fun_symbol(name, static_cast<int>(args.size())), std::move(args));
  }

  Formula unit() {
    if (accept("~")) {
      // emitted negations always parenthesize
      expect("(");
      Formula f = formula();
      expect(")");
      return Formula::negation(std::move(f));
    }
    if (peek_is('!') || peek_is('?')) return quantifier();
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    // atom or equality
    Term t = term();
    skip_ws();
    if (pos < text.size() && text[pos] == '=' && text.compare(pos, 2, "=>") != 0) {
      ++pos;
      Term r = term();
      return Formula::equal(std::move(t), std::move(r));
    }
    // reinterpret the term as a predicate application
    if (t.is_var()) throw EisError("tptp reader: variable used as formula");
    std::string name = t.symbol().name;
    if (name == "rew") name = kRewName;
    else if (name == "rews") name = kRewsName;
    return Formula::atom(
        Atom(pred_symbol(name, static_cast<int>(t.args().size())), t.args()));
  }

  Formula quantifier() {
    bool universal = accept("!");
    if (!universal) expect("?");
    expect("[");
    std::vector<std::string> vars;
    do vars.push_back(ident());
    while (accept(","));
    expect("]");
    expect(":");
    Formula body = unit();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      body = universal ? Formula::forall(*it, std::move(body))
                       : Formula::exists(*it, std::move(body));
    return body;
  }

  Formula formula() {
    Formula lhs = unit();
    skip_ws();
    if (accept("=>")) return Formula::implies(std::move(lhs), formula());
    if (peek_is('&')) {
      std::vector<Formula> kids;
      kids.push_back(std::move(lhs));
      while (accept("&")) kids.push_back(unit());
      return Formula::conj(std::move(kids));
    }
    if (peek_is('|')) {
      std::vector<Formula> kids;
      kids.push_back(std::move(lhs));
      while (accept("|")) kids.push_back(unit());
      return Formula::disj(std::move(kids));
    }
    return lhs;
  }
};

}  // namespace detail

// Parses files produced by emit_tptp (not arbitrary TPTP).
inline std::vector<TptpUnit> read_tptp(const std::string& text) {
  detail::TptpParser p{text};
  std::vector<TptpUnit> units;
  while (true) {
    p.skip_ws();
    if (p.pos >= text.size()) break;
    p.expect("fof");
    p.expect("(");
    TptpUnit u{.name = p.ident(), .role = "", .formula = Formula::equal(Term::var("_"), Term::var("_"))};
    p.expect(",");
    u.role = p.ident();
    p.expect(",");
    u.formula = p.formula();
    p.expect(")");
    p.expect(".");
    units.push_back(std::move(u));
  }
  return units;
}

}  // namespace eiskit
