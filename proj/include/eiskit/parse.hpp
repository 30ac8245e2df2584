#pragma once

// Text front-end: the `.eis` system format and the formula language, with
// positioned diagnostics, statement-level error recovery, and the canonical
// pretty-printer. The exact grammar is documented in docs/spec-format.md and
// pinned by golden tests.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eiskit/diagnostics.hpp"
#include "eiskit/formula.hpp"
#include "eiskit/system.hpp"
#include "eiskit/term.hpp"

namespace eiskit {

// A system file is either a rewrite-system document (clauses, rules, maybe a
// replacement map) or a raw inference-system document (`infer` statements);
// the forms never mix.
struct SpecDocument {
  std::string name;
  Signature sig;
  ReplacementMap mu;
  std::vector<HornClause> horn;
  std::vector<RewriteRule> rules;
  std::vector<InferenceRule> raw_rules;
  bool is_raw_eis = false;

  Gtrs to_gtrs() const {
    if (is_raw_eis) throw EisError("document is a raw inference system");
    return Gtrs{sig, mu, horn, rules};
  }

  Eis to_eis() const {
    if (is_raw_eis) return Eis{sig, raw_rules};
    return compile_gtrs(to_gtrs());
  }
};

inline bool operator==(const HornClause& a, const HornClause& b) {
  return a.head == b.head && a.body == b.body;
}
inline bool operator==(const RewriteRule& a, const RewriteRule& b) {
  return a.lhs == b.lhs && a.rhs == b.rhs && a.conditions == b.conditions;
}
inline bool operator==(const InferenceRule& a, const InferenceRule& b) {
  return a.label == b.label && a.premises == b.premises && a.conclusion == b.conclusion;
}
inline bool operator==(const ReplacementMap& a, const ReplacementMap& b) {
  return a.bottom_default == b.bottom_default && a.entries == b.entries;
}
inline bool operator==(const Signature& a, const Signature& b) {
  return a.functions() == b.functions() && a.predicates() == b.predicates();
}
inline bool operator==(const SpecDocument& a, const SpecDocument& b) {
  return a.name == b.name && a.sig == b.sig && a.mu == b.mu && a.horn == b.horn &&
         a.rules == b.rules && a.raw_rules == b.raw_rules && a.is_raw_eis == b.is_raw_eis;
}

template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value() && diagnostics.empty(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }

  // Unwraps or throws with the collected diagnostics as the message.
  const T& expect() const {
    if (!ok()) throw EisError(join_diagnostics(diagnostics));
    return *value;
  }
};

namespace detail {

enum class Tok {
  Name, Var, Grounded,
  LParen, RParen, LBrace, RBrace, Comma, Dot, Colon, ColonDash, Turnstile,
  Arrow, ArrowStar, FatArrow, And, Or, Not, Equals, Slash,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

inline bool name_start(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'; }
inline bool var_start(char c) { return c >= 'A' && c <= 'Z'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline std::vector<Token> lex(const std::string& text, std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') { ++line; col = 1; } else { ++col; }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) { advance(1); continue; }
    Token t;
    t.line = line;
    t.col = col;
    auto two = text.substr(i, 2);
    auto three = text.substr(i, 3);
    if (three == "->*") { t.kind = Tok::ArrowStar; t.text = "->*"; advance(3); }
    else if (two == "->") { t.kind = Tok::Arrow; t.text = "->"; advance(2); }
    else if (two == ":-") { t.kind = Tok::ColonDash; t.text = ":-"; advance(2); }
    else if (two == "|-") { t.kind = Tok::Turnstile; t.text = "|-"; advance(2); }
    else if (two == "=>") { t.kind = Tok::FatArrow; t.text = "=>"; advance(2); }
    else if (two == "/\\") { t.kind = Tok::And; t.text = "/\\"; advance(2); }
    else if (two == "\\/") { t.kind = Tok::Or; t.text = "\\/"; advance(2); }
    else if (c == '(') { t.kind = Tok::LParen; advance(1); }
    else if (c == ')') { t.kind = Tok::RParen; advance(1); }
    else if (c == '{') { t.kind = Tok::LBrace; advance(1); }
    else if (c == '}') { t.kind = Tok::RBrace; advance(1); }
    else if (c == ',') { t.kind = Tok::Comma; advance(1); }
    else if (c == '.') { t.kind = Tok::Dot; advance(1); }
    else if (c == ':') { t.kind = Tok::Colon; advance(1); }
    else if (c == '~') { t.kind = Tok::Not; advance(1); }
    else if (c == '=') { t.kind = Tok::Equals; advance(1); }
    else if (c == '/') { t.kind = Tok::Slash; advance(1); }
    else if (c == '%') {
      advance(1);
      std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) advance(1);
      if (i == start) {
        diags.push_back({t.line, t.col, "expected identifier after '%'"});
        continue;
      }
      t.kind = Tok::Grounded;
      t.text = text.substr(start, i - start);
    } else if (var_start(c)) {
      std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) advance(1);
      t.kind = Tok::Var;
      t.text = text.substr(start, i - start);
    } else if (name_start(c)) {
      std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) advance(1);
      t.kind = Tok::Name;
      t.text = text.substr(start, i - start);
    } else {
      diags.push_back({line, col, std::string("unexpected character '") + c + "'"});
      advance(1);
      continue;
    }
    out.push_back(std::move(t));
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

// Resolves symbol uses against a signature. In loose mode undeclared symbols
// are adopted at their first-seen arity, which lets the formula tool run
// without a system file.
class SymbolResolver {
 public:
  explicit SymbolResolver(const Signature* sig) : strict_(sig) {
    if (!sig) {
      loose_.add_predicate(rew_symbol());
      loose_.add_predicate(rews_symbol());
    }
  }

  const Signature& signature() const { return strict_ ? *strict_ : loose_; }

  std::optional<Symbol> function(const std::string& name, int arity, std::string& err) {
    if (strict_) {
      const Symbol* s = strict_->find_function(name);
      if (!s) { err = "undeclared function '" + name + "'"; return std::nullopt; }
      if (s->arity != arity) {
        err = "arity mismatch for function '" + name + "': declared /" +
              std::to_string(s->arity) + ", used with " + std::to_string(arity);
        return std::nullopt;
      }
      return *s;
    }
    if (const Symbol* s = loose_.find_function(name)) {
      if (s->arity != arity) {
        err = "function '" + name + "' used with inconsistent arity";
        return std::nullopt;
      }
      return *s;
    }
    Symbol s = fun_symbol(name, arity);
    loose_.add_function(s);
    return s;
  }

  std::optional<Symbol> predicate(const std::string& name, int arity, std::string& err) {
    if (strict_) {
      const Symbol* s = strict_->find_predicate(name);
      if (!s) { err = "undeclared predicate '" + name + "'"; return std::nullopt; }
      if (s->arity != arity) {
        err = "arity mismatch for predicate '" + name + "': declared /" +
              std::to_string(s->arity) + ", used with " + std::to_string(arity);
        return std::nullopt;
      }
      return *s;
    }
    if (const Symbol* s = loose_.find_predicate(name)) {
      if (s->arity != arity) {
        err = "predicate '" + name + "' used with inconsistent arity";
        return std::nullopt;
      }
      return *s;
    }
    Symbol s = pred_symbol(name, arity);
    loose_.add_predicate(s);
    return s;
  }

 private:
  const Signature* strict_ = nullptr;
  Signature loose_;
};

// Unresolved syntax tree for a term-or-atom; symbol kinds are decided by the
// position the tree ends up in.
struct RawTree {
  enum class Kind { Var, Grounded, Call };
  Kind kind = Kind::Var;
  std::string name;
  std::vector<RawTree> kids;
  int line = 0, col = 0;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags, SymbolResolver& syms)
      : toks_(std::move(toks)), diags_(&diags), syms_(&syms) {}

  const Token& peek(int ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }

  void error(const Token& t, std::string msg) { diags_->push_back({t.line, t.col, std::move(msg)}); }
  void error_here(std::string msg) { error(peek(), std::move(msg)); }

  bool expect(Tok k, const std::string& what) {
    if (accept(k)) return true;
    error_here("expected " + what);
    return false;
  }

  void skip_to_dot() {
    while (!at(Tok::End) && !accept(Tok::Dot)) next();
  }

  bool at_end() const { return at(Tok::End); }

  // --- terms and atoms ---------------------------------------------------

  std::optional<RawTree> parse_raw_tree() {
    const Token& t = peek();
    if (t.kind == Tok::Var) {
      next();
      return RawTree{RawTree::Kind::Var, t.text, {}, t.line, t.col};
    }
    if (t.kind == Tok::Grounded) {
      next();
      return RawTree{RawTree::Kind::Grounded, t.text, {}, t.line, t.col};
    }
    if (t.kind == Tok::Name) {
      next();
      RawTree node{RawTree::Kind::Call, t.text, {}, t.line, t.col};
      if (accept(Tok::LParen)) {
        do {
          auto kid = parse_raw_tree();
          if (!kid) return std::nullopt;
          node.kids.push_back(std::move(*kid));
        } while (accept(Tok::Comma));
        if (!expect(Tok::RParen, "')'")) return std::nullopt;
      }
      return node;
    }
    error_here("expected a term");
    return std::nullopt;
  }

  std::optional<Term> to_term(const RawTree& r) {
    switch (r.kind) {
      case RawTree::Kind::Var:
        return Term::var(r.name);
      case RawTree::Kind::Grounded:
        return Term::app(grounded_symbol(r.name));
      case RawTree::Kind::Call: {
        std::string err;
        auto sym = syms_->function(r.name, static_cast<int>(r.kids.size()), err);
        if (!sym) {
          diags_->push_back({r.line, r.col, err});
          return std::nullopt;
        }
        std::vector<Term> args;
        for (const RawTree& k : r.kids) {
          auto a = to_term(k);
          if (!a) return std::nullopt;
          args.push_back(std::move(*a));
        }
        return Term::app(*sym, std::move(args));
      }
    }
    return std::nullopt;
  }

  std::optional<Atom> to_atom(const RawTree& r) {
    if (r.kind != RawTree::Kind::Call) {
      diags_->push_back({r.line, r.col, "expected an atom"});
      return std::nullopt;
    }
    std::string err;
    auto sym = syms_->predicate(r.name, static_cast<int>(r.kids.size()), err);
    if (!sym) {
      diags_->push_back({r.line, r.col, err});
      return std::nullopt;
    }
    std::vector<Term> args;
    for (const RawTree& k : r.kids) {
      auto a = to_term(k);
      if (!a) return std::nullopt;
      args.push_back(std::move(*a));
    }
    return Atom(*sym, std::move(args));
  }

  std::optional<Atom> infix_atom(const RawTree& lhs, bool star) {
    auto rhs = parse_raw_tree();
    if (!rhs) return std::nullopt;
    auto l = to_term(lhs);
    auto r = to_term(*rhs);
    if (!l || !r) return std::nullopt;
    return Atom(star ? rews_symbol() : rew_symbol(), {std::move(*l), std::move(*r)});
  }

  // An atom: either p(t1,..,tn) or an infix `t -> t` / `t ->* t`.
  std::optional<Atom> parse_atom() {
    auto raw = parse_raw_tree();
    if (!raw) return std::nullopt;
    if (accept(Tok::Arrow)) return infix_atom(*raw, false);
    if (accept(Tok::ArrowStar)) return infix_atom(*raw, true);
    return to_atom(*raw);
  }

  std::optional<std::vector<Atom>> parse_atom_list() {
    std::vector<Atom> atoms;
    do {
      auto a = parse_atom();
      if (!a) return std::nullopt;
      atoms.push_back(std::move(*a));
    } while (accept(Tok::Comma));
    return atoms;
  }

  // --- formulas -----------------------------------------------------------

  std::optional<Formula> parse_formula() { return parse_quantified(); }

  std::optional<Formula> parse_quantified() {
    if (at(Tok::Name) && (peek().text == "forall" || peek().text == "exists") &&
        peek(1).kind == Tok::Var) {
      bool universal = peek().text == "forall";
      next();
      std::string var = next().text;
      if (!expect(Tok::Dot, "'.' after quantified variable")) return std::nullopt;
      auto body = parse_quantified();
      if (!body) return std::nullopt;
      return universal ? Formula::forall(var, std::move(*body))
                       : Formula::exists(var, std::move(*body));
    }
    return parse_implies();
  }

  std::optional<Formula> parse_implies() {
    auto lhs = parse_disj();
    if (!lhs) return std::nullopt;
    if (accept(Tok::FatArrow)) {
      auto rhs = parse_implies();
      if (!rhs) return std::nullopt;
      return Formula::implies(std::move(*lhs), std::move(*rhs));
    }
    return lhs;
  }

  std::optional<Formula> parse_disj() {
    auto lhs = parse_conj();
    if (!lhs) return std::nullopt;
    std::vector<Formula> kids;
    kids.push_back(std::move(*lhs));
    while (accept(Tok::Or)) {
      auto k = parse_conj();
      if (!k) return std::nullopt;
      kids.push_back(std::move(*k));
    }
    if (kids.size() == 1) return std::move(kids[0]);
    return Formula::disj(std::move(kids));
  }

  std::optional<Formula> parse_conj() {
    auto lhs = parse_neg();
    if (!lhs) return std::nullopt;
    std::vector<Formula> kids;
    kids.push_back(std::move(*lhs));
    while (accept(Tok::And)) {
      auto k = parse_neg();
      if (!k) return std::nullopt;
      kids.push_back(std::move(*k));
    }
    if (kids.size() == 1) return std::move(kids[0]);
    return Formula::conj(std::move(kids));
  }

  std::optional<Formula> parse_neg() {
    if (accept(Tok::Not)) {
      auto f = parse_neg();
      if (!f) return std::nullopt;
      return Formula::negation(std::move(*f));
    }
    return parse_primary();
  }

  std::optional<Formula> parse_primary() {
    if (accept(Tok::LParen)) {
      auto f = parse_formula();
      if (!f) return std::nullopt;
      if (!expect(Tok::RParen, "')'")) return std::nullopt;
      return f;
    }
    auto raw = parse_raw_tree();
    if (!raw) return std::nullopt;
    if (accept(Tok::Arrow)) {
      auto a = infix_atom(*raw, false);
      if (!a) return std::nullopt;
      return Formula::atom(std::move(*a));
    }
    if (accept(Tok::ArrowStar)) {
      auto a = infix_atom(*raw, true);
      if (!a) return std::nullopt;
      return Formula::atom(std::move(*a));
    }
    if (accept(Tok::Equals)) {
      auto rhs = parse_raw_tree();
      if (!rhs) return std::nullopt;
      auto l = to_term(*raw);
      auto r = to_term(*rhs);
      if (!l || !r) return std::nullopt;
      return Formula::equal(std::move(*l), std::move(*r));
    }
    auto a = to_atom(*raw);
    if (!a) return std::nullopt;
    return Formula::atom(std::move(*a));
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic>* diags_;
  SymbolResolver* syms_;
};

inline std::optional<int> parse_arity(const Token& t) {
  if (t.kind != Tok::Name || t.text.empty()) return std::nullopt;
  for (char c : t.text)
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  return std::stoi(t.text);
}

}  // namespace detail

// Parses a system document. All problems are reported as positioned
// diagnostics, one per error, recovering at statement boundaries.
inline ParseResult<SpecDocument> parse_spec(const std::string& text) {
  using namespace detail;
  ParseResult<SpecDocument> res;
  std::vector<Token> toks = lex(text, res.diagnostics);

  SpecDocument doc;
  doc.sig.add_predicate(rew_symbol());
  doc.sig.add_predicate(rews_symbol());

  SymbolResolver syms(&doc.sig);
  Parser p(std::move(toks), res.diagnostics, syms);

  bool saw_statement = false;
  bool saw_gtrs = false, saw_raw = false, reported_mix = false;
  int infer_count = 0;

  auto note_form = [&](bool raw, const Token& at) {
    (raw ? saw_raw : saw_gtrs) = true;
    if (saw_raw && saw_gtrs && !reported_mix) {
      reported_mix = true;
      res.diagnostics.push_back(
          {at.line, at.col, "document mixes rewrite-system statements and raw inference rules"});
    }
  };

  while (!p.at_end()) {
    const Token head = p.peek();
    if (head.kind != Tok::Name) {
      p.error(head, "expected a statement keyword");
      p.skip_to_dot();
      continue;
    }
    saw_statement = true;
    const std::string& kw = head.text;

    if (kw == "system") {
      p.next();
      if (p.at(Tok::Name) || p.at(Tok::Var))
        doc.name = p.next().text;
      else
        p.error_here("expected a system name");
      p.expect(Tok::Dot, "'.'");
    } else if (kw == "fun" || kw == "pred") {
      p.next();
      if (!(p.at(Tok::Name) || p.at(Tok::Var))) {
        p.error_here("expected a symbol name");
        p.skip_to_dot();
        continue;
      }
      const Token name_tok = p.next();
      if (kw == "pred" && name_tok.kind == Tok::Var) {
        p.error(name_tok, "predicate names must start lowercase");
        p.skip_to_dot();
        continue;
      }
      if (name_tok.kind == Tok::Var) {
        p.error(name_tok, "function names must start lowercase");
        p.skip_to_dot();
        continue;
      }
      if (!p.expect(Tok::Slash, "'/' and an arity")) { p.skip_to_dot(); continue; }
      auto arity = parse_arity(p.peek());
      if (!arity) {
        p.error_here("expected a numeric arity");
        p.skip_to_dot();
        continue;
      }
      p.next();
      bool added = kw == "fun" ? doc.sig.add_function(fun_symbol(name_tok.text, *arity))
                               : doc.sig.add_predicate(pred_symbol(name_tok.text, *arity));
      if (!added)
        p.error(name_tok, "duplicate declaration of '" + name_tok.text + "'");
      p.expect(Tok::Dot, "'.'");
    } else if (kw == "mu_bottom") {
      p.next();
      note_form(false, head);
      doc.mu.bottom_default = true;
      p.expect(Tok::Dot, "'.'");
    } else if (kw == "mu") {
      p.next();
      note_form(false, head);
      if (!p.at(Tok::Name)) {
        p.error_here("expected a function name");
        p.skip_to_dot();
        continue;
      }
      const Token fname = p.next();
      const Symbol* f = doc.sig.find_function(fname.text);
      if (!f) p.error(fname, "undeclared function '" + fname.text + "'");
      if (!p.expect(Tok::Colon, "':'")) { p.skip_to_dot(); continue; }
      if (!p.expect(Tok::LBrace, "'{'")) { p.skip_to_dot(); continue; }
      std::set<int> positions;
      bool bad = false;
      if (!p.at(Tok::RBrace)) {
        do {
          auto pos_val = parse_arity(p.peek());
          if (!pos_val) {
            p.error_here("expected an argument position");
            bad = true;
            break;
          }
          const Token pos_tok = p.next();
          if (f && (*pos_val < 1 || *pos_val > f->arity))
            p.error(pos_tok, "replacement map position " + pos_tok.text +
                                 " out of range for '" + fname.text + "/" +
                                 std::to_string(f->arity) + "'");
          positions.insert(*pos_val);
        } while (p.accept(Tok::Comma));
      }
      if (bad) { p.skip_to_dot(); continue; }
      if (!p.expect(Tok::RBrace, "'}'")) { p.skip_to_dot(); continue; }
      if (f) doc.mu.entries[fname.text] = positions;
      p.expect(Tok::Dot, "'.'");
    } else if (kw == "clause") {
      p.next();
      note_form(false, head);
      const Token at = p.peek();
      auto headAtom = p.parse_atom();
      if (!headAtom) { p.skip_to_dot(); continue; }
      if (headAtom->pred.name == kRewName || headAtom->pred.name == kRewsName)
        p.error(at, "clause head uses reserved predicate '" + headAtom->pred.name + "'");
      std::vector<Atom> body;
      if (p.accept(Tok::ColonDash)) {
        auto atoms = p.parse_atom_list();
        if (!atoms) { p.skip_to_dot(); continue; }
        body = std::move(*atoms);
      }
      doc.horn.push_back({std::move(*headAtom), std::move(body)});
      p.expect(Tok::Dot, "'.'");
    } else if (kw == "rule") {
      p.next();
      note_form(false, head);
      const Token at = p.peek();
      auto lhs_raw = p.parse_raw_tree();
      if (!lhs_raw) { p.skip_to_dot(); continue; }
      if (!p.expect(Tok::Arrow, "'->'")) { p.skip_to_dot(); continue; }
      auto rhs_raw = p.parse_raw_tree();
      if (!rhs_raw) { p.skip_to_dot(); continue; }
      auto lhs = p.to_term(*lhs_raw);
      auto rhs = p.to_term(*rhs_raw);
      if (!lhs || !rhs) { p.skip_to_dot(); continue; }
      if (lhs->is_var()) p.error(at, "rule left-hand side is a variable");
      std::vector<Atom> conds;
      if (p.accept(Tok::ColonDash)) {
        auto atoms = p.parse_atom_list();
        if (!atoms) { p.skip_to_dot(); continue; }
        conds = std::move(*atoms);
      }
      doc.rules.push_back({std::move(*lhs), std::move(*rhs), std::move(conds)});
      p.expect(Tok::Dot, "'.'");
    } else if (kw == "infer") {
      p.next();
      note_form(true, head);
      std::string label;
      if (p.at(Tok::Name) || p.at(Tok::Var))
        label = p.next().text;
      else
        label = "r" + std::to_string(infer_count + 1);
      ++infer_count;
      if (!p.expect(Tok::Colon, "':'")) { p.skip_to_dot(); continue; }
      std::vector<Atom> premises;
      if (!p.at(Tok::Turnstile)) {
        auto atoms = p.parse_atom_list();
        if (!atoms) { p.skip_to_dot(); continue; }
        premises = std::move(*atoms);
      }
      if (!p.expect(Tok::Turnstile, "'|-'")) { p.skip_to_dot(); continue; }
      auto conclusion = p.parse_atom();
      if (!conclusion) { p.skip_to_dot(); continue; }
      doc.raw_rules.push_back({std::move(label), std::move(premises), std::move(*conclusion)});
      p.expect(Tok::Dot, "'.'");
    } else {
      p.error(head, "unknown statement '" + kw + "'");
      p.skip_to_dot();
    }
  }

  if (!saw_statement)
    res.diagnostics.push_back({1, 1, "empty document"});

  doc.is_raw_eis = saw_raw && !saw_gtrs;
  std::stable_sort(res.diagnostics.begin(), res.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::pair(a.line, a.column) < std::pair(b.line, b.column);
                   });
  if (res.diagnostics.empty()) res.value = std::move(doc);
  return res;
}

struct FormulaParse {
  Formula formula;
  std::vector<std::string> free_variables;
};

// Parses one formula. With a signature, symbol uses are checked against it;
// without one, symbols are inferred from use (the `qe` tool runs this way).
inline ParseResult<FormulaParse> parse_formula(const std::string& text,
                                               const Signature* sig = nullptr) {
  using namespace detail;
  ParseResult<FormulaParse> res;
  std::vector<Token> toks = lex(text, res.diagnostics);
  SymbolResolver syms(sig);
  Parser p(std::move(toks), res.diagnostics, syms);
  auto f = p.parse_formula();
  if (f && !p.at_end()) p.error_here("unexpected trailing input");
  if (f && res.diagnostics.empty()) {
    std::vector<std::string> fv = free_vars(*f);
    res.value = FormulaParse{std::move(*f), std::move(fv)};
  }
  return res;
}

// Formula files: one formula per line, '#' comments, blank lines ignored.
inline ParseResult<std::vector<FormulaParse>> parse_formula_file(const std::string& text,
                                                                 const Signature* sig = nullptr) {
  ParseResult<std::vector<FormulaParse>> res;
  res.value.emplace();
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string line = text.substr(start, end == std::string::npos ? std::string::npos
                                                                   : end - start);
    ++line_no;
    std::string stripped = line.substr(0, line.find('#'));
    bool blank = std::all_of(stripped.begin(), stripped.end(), [](char c) {
      return std::isspace(static_cast<unsigned char>(c));
    });
    if (!blank) {
      auto sub = parse_formula(stripped, sig);
      for (Diagnostic d : sub.diagnostics) {
        d.line = line_no;
        res.diagnostics.push_back(d);
      }
      if (sub.value) res.value->push_back(std::move(*sub.value));
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (!res.diagnostics.empty()) res.value.reset();
  return res;
}

inline ParseResult<Atom> parse_atom(const std::string& text, const Signature& sig) {
  using namespace detail;
  ParseResult<Atom> res;
  std::vector<Token> toks = lex(text, res.diagnostics);
  SymbolResolver syms(&sig);
  Parser p(std::move(toks), res.diagnostics, syms);
  auto a = p.parse_atom();
  if (a && !p.at_end()) p.error_here("unexpected trailing input");
  if (a && res.diagnostics.empty()) res.value = std::move(*a);
  return res;
}

// Comma-separated ground terms, as taken by --suh.
inline ParseResult<std::vector<Term>> parse_term_list(const std::string& text,
                                                      const Signature& sig) {
  using namespace detail;
  ParseResult<std::vector<Term>> res;
  std::vector<Token> toks = lex(text, res.diagnostics);
  SymbolResolver syms(&sig);
  Parser p(std::move(toks), res.diagnostics, syms);
  std::vector<Term> terms;
  do {
    auto raw = p.parse_raw_tree();
    if (!raw) break;
    auto t = p.to_term(*raw);
    if (!t) break;
    terms.push_back(std::move(*t));
  } while (p.accept(detail::Tok::Comma));
  if (!p.at_end()) p.error_here("unexpected trailing input");
  if (res.diagnostics.empty()) res.value = std::move(terms);
  return res;
}

inline std::string print_formula(const Formula& f) { return to_string(f); }

// Canonical document form; parse_spec(print_spec(doc)) reproduces doc.
inline std::string print_spec(const SpecDocument& doc) {
  std::string out;
  if (!doc.name.empty()) out += "system " + doc.name + ".\n\n";
  for (const Symbol& f : doc.sig.functions())
    out += "fun " + f.name + "/" + std::to_string(f.arity) + ".\n";
  for (const Symbol& p : doc.sig.predicates()) {
    if (p.name == kRewName || p.name == kRewsName) continue;  // implicit
    out += "pred " + p.name + "/" + std::to_string(p.arity) + ".\n";
  }
  if (doc.mu.bottom_default) out += "mu_bottom.\n";
  for (const auto& [name, positions] : doc.mu.entries) {
    out += "mu " + name + ": {";
    bool first = true;
    for (int i : positions) {
      if (!first) out += ", ";
      first = false;
      out += std::to_string(i);
    }
    out += "}.\n";
  }
  auto atom_list = [](const std::vector<Atom>& atoms) {
    std::string s;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i) s += ", ";
      s += to_string(atoms[i]);
    }
    return s;
  };
  for (const HornClause& c : doc.horn) {
    out += "clause " + to_string(c.head);
    if (!c.body.empty()) out += " :- " + atom_list(c.body);
    out += ".\n";
  }
  for (const RewriteRule& r : doc.rules) {
    out += "rule " + to_string(r.lhs) + " -> " + to_string(r.rhs);
    if (!r.conditions.empty()) out += " :- " + atom_list(r.conditions);
    out += ".\n";
  }
  for (const InferenceRule& r : doc.raw_rules) {
    out += "infer " + r.label + ": " + atom_list(r.premises) + " |- " +
           to_string(r.conclusion) + ".\n";
  }
  return out;
}

}  // namespace eiskit
