#pragma once

// JSON views of the main value types, used by the CLI's --json output and by
// tooling. Terms and atoms carry both a structured form and the concrete
// `text` rendering.

#include <json.hpp>

#include "eiskit/formula.hpp"
#include "eiskit/model.hpp"
#include "eiskit/proof.hpp"
#include "eiskit/system.hpp"
#include "eiskit/term.hpp"

namespace eiskit {

using Json = nlohmann::ordered_json;

inline Json to_json(const Term& t) {
  if (t.is_var()) return Json{{"var", t.var_name()}};
  Json args = Json::array();
  for (const Term& a : t.args()) args.push_back(to_json(a));
  Json out{{"fun", t.symbol().name}};
  if (t.is_grounded_constant()) out["grounded"] = true;
  if (!t.args().empty()) out["args"] = std::move(args);
  return out;
}

inline Json to_json(const Atom& a) {
  Json args = Json::array();
  for (const Term& t : a.args) args.push_back(to_json(t));
  return Json{{"pred", a.pred.name}, {"args", std::move(args)}, {"text", to_string(a)}};
}

inline Json to_json(const Substitution& s) {
  Json out = Json::object();
  for (const auto& [v, t] : s.bindings()) out[v] = to_string(t);
  return out;
}

inline Json to_json(const ProofTree& t) {
  Json out{{"goal", to_string(t.goal)}};
  if (t.open) {
    out["open"] = true;
    return out;
  }
  out["rule"] = t.rule_label;
  out["subst"] = to_json(t.subst);
  Json kids = Json::array();
  for (const ProofTree& c : t.children) kids.push_back(to_json(c));
  out["children"] = std::move(kids);
  return out;
}

inline Json to_json(const Formula& f) {
  switch (f.tag()) {
    case Formula::Tag::Atom:
      return Json{{"atom", to_string(f.atom())}};
    case Formula::Tag::Equal:
      return Json{{"equal", Json::array({to_string(f.left()), to_string(f.right())})}};
    case Formula::Tag::Not:
      return Json{{"not", to_json(f.child())}};
    case Formula::Tag::And:
    case Formula::Tag::Or: {
      Json kids = Json::array();
      for (const Formula& k : f.children()) kids.push_back(to_json(k));
      return Json{{f.tag() == Formula::Tag::And ? "and" : "or", std::move(kids)}};
    }
    case Formula::Tag::Implies:
      return Json{{"implies", Json::array({to_json(f.child(0)), to_json(f.child(1))})}};
    case Formula::Tag::Forall:
    case Formula::Tag::Exists:
      return Json{{f.tag() == Formula::Tag::Forall ? "forall" : "exists", f.bound_var()},
                  {"body", to_json(f.child())}};
  }
  throw EisError("unreachable");
}

inline Json to_json(const FiniteStructure& A) {
  Json funs = Json::object();
  for (const auto& [sym, table] : A.functions) {
    std::string name = sym.kind == SymbolKind::GroundedVar ? "%" + sym.name : sym.name;
    funs[name] = table;
  }
  Json preds = Json::object();
  for (const auto& [sym, tuples] : A.predicates) {
    Json rows = Json::array();
    for (const std::vector<int>& t : tuples) rows.push_back(t);
    preds[sym.name] = std::move(rows);
  }
  return Json{{"domain_size", A.domain_size},
              {"functions", std::move(funs)},
              {"predicates", std::move(preds)}};
}

inline Json to_json(const HornSentence& s) {
  Json body = Json::array();
  for (const Atom& b : s.body) body.push_back(to_string(b));
  return Json{{"label", s.label},
              {"vars", s.vars},
              {"body", std::move(body)},
              {"head", to_string(s.head)}};
}

inline Json to_json(const Budget& b) {
  Json out{{"max_depth", b.max_depth}, {"max_nodes", b.max_nodes}};
  if (b.wall_clock) out["wall_clock_ms"] = b.wall_clock->count();
  return out;
}

}  // namespace eiskit
