#pragma once

// Proof-tree search. Goals are solved SLD-style: rules are tried in
// declaration order, premises left to right, with iterative deepening on
// tree depth under a node budget. A negative verdict is only reported when
// an iteration finished without cutting any branch, so the search space is
// known to be exhausted. Also: bounded bottom-up enumeration of the ground
// consequences, cycle detection over a binary predicate, and a bounded loop
// search over well-formed tree construction.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eiskit/system.hpp"
#include "eiskit/term.hpp"

namespace eiskit {

struct Budget {
  int max_depth = 32;
  long max_nodes = 100000;
  std::optional<std::chrono::milliseconds> wall_clock;

  void validate() const {
    if (max_depth <= 0 || max_nodes <= 0 || (wall_clock && wall_clock->count() <= 0))
      throw EisError("budget limits must be positive");
  }
};

struct ProofTree {
  Atom goal;
  bool open = true;
  std::string rule_label;  // derivation nodes only
  Substitution subst;      // rule variables -> instances
  std::vector<ProofTree> children;

  bool closed() const {
    if (open) return false;
    for (const ProofTree& c : children)
      if (!c.closed()) return false;
    return true;
  }

  int depth() const {
    int d = 1;
    for (const ProofTree& c : children) d = std::max(d, 1 + c.depth());
    return d;
  }

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const ProofTree& c : children) n += c.node_count();
    return n;
  }
};

struct Verdict {
  enum class Kind { Proved, Disproved, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<ProofTree> proof;  // Proved
  long nodes_explored = 0;
  int exhausted_depth = 0;  // Disproved: depth at which the space was fully explored
  std::string reason;       // Unknown

  bool proved() const { return kind == Kind::Proved; }
  bool disproved() const { return kind == Kind::Disproved; }
};

inline std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Proved: return "proved";
    case Verdict::Kind::Disproved: return "disproved";
    case Verdict::Kind::Unknown: return "unknown";
  }
  return "unknown";
}

namespace detail {

inline void require_over_signature(const Atom& a, const Signature& sig) {
  std::vector<Diagnostic> diags;
  check_atom_signature(a, sig, diags);
  if (!diags.empty()) throw EisError(join_diagnostics(diags));
}

struct SldSearch {
  const Eis& eis;
  Budget budget;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
  long nodes = 0;
  bool pruned = false;         // some branch was cut in the current iteration
  bool out_of_budget = false;  // nodes or wall clock exhausted; terminal
  long fresh = 0;

  struct Step {
    const InferenceRule* rule;
    Substitution rename;
  };
  std::vector<Step> trace;

  using GoalItem = std::pair<Atom, int>;  // goal, remaining depth
  using Emit = std::function<bool(const Substitution&)>;

  bool over_budget() {
    if (out_of_budget) return true;
    if (nodes >= budget.max_nodes) out_of_budget = true;
    if (budget.wall_clock && nodes % 256 == 0 &&
        std::chrono::steady_clock::now() - started > *budget.wall_clock)
      out_of_budget = true;
    return out_of_budget;
  }

  Substitution fresh_rename(const InferenceRule& r) {
    Substitution s;
    for (const std::string& v : r.variables())
      s.bind(v, Term::var("_" + std::to_string(++fresh)));
    return s;
  }

  // Depth-first over the agenda from index i; returns true to stop.
  bool run(const std::vector<GoalItem>& agenda, std::size_t i, const Substitution& theta,
           const Emit& emit) {
    if (i == agenda.size()) return emit(theta);
    const auto& [raw_goal, depth] = agenda[i];
    Atom goal = apply(theta, raw_goal);
    for (const InferenceRule& r : eis.rules) {
      if (over_budget()) {
        pruned = true;
        return true;
      }
      Substitution rename = fresh_rename(r);
      auto mgu = unify(apply(rename, r.conclusion), goal);
      if (!mgu) continue;
      if (depth <= 0) {  // a rule applies but the depth budget forbids it
        pruned = true;
        return false;
      }
      ++nodes;
      Substitution theta2 = compose(*mgu, theta);
      trace.push_back({&r, rename});
      std::vector<GoalItem> next;
      next.reserve(r.premises.size() + agenda.size() - i - 1);
      for (const Atom& p : r.premises) next.emplace_back(apply(rename, p), depth - 1);
      for (std::size_t k = i + 1; k < agenda.size(); ++k) next.push_back(agenda[k]);
      if (run(next, 0, theta2, emit)) return true;
      trace.pop_back();
    }
    return false;
  }

  // Rebuilds the derivation recorded in `trace` (pre-order) as proof trees.
  ProofTree build(const Atom& goal, std::size_t& k, const Substitution& theta) const {
    const Step& st = trace[k++];
    ProofTree node;
    node.goal = apply(theta, goal);
    node.open = false;
    node.rule_label = st.rule->label;
    for (const std::string& v : st.rule->variables())
      node.subst.bind(v, apply(theta, *st.rename.lookup(v)));
    for (const Atom& p : st.rule->premises)
      node.children.push_back(build(apply(st.rename, p), k, theta));
    return node;
  }
};

}  // namespace detail

// Searches for a closed proof tree for `goal`. Variables in the goal are
// grounded first; the verdicts of the two calls always agree.
inline Verdict prove(const Eis& e, const Atom& goal, const Budget& b = {}) {
  b.validate();
  detail::require_over_signature(goal, e.sig);
  Atom g = ground_down(goal);
  detail::SldSearch search{.eis = e, .budget = b};
  for (int d = 1; d <= b.max_depth; ++d) {
    search.pruned = false;
    search.trace.clear();
    std::optional<ProofTree> found;
    std::vector<detail::SldSearch::GoalItem> agenda{{g, d}};
    search.run(agenda, 0, Substitution{}, [&](const Substitution& theta) {
      std::size_t k = 0;
      found = search.build(g, k, theta);
      return true;
    });
    if (found)
      return {Verdict::Kind::Proved, std::move(found), search.nodes, d, ""};
    if (search.out_of_budget)
      return {Verdict::Kind::Unknown, std::nullopt, search.nodes, 0,
              "node or wall-clock budget exhausted"};
    if (!search.pruned)
      return {Verdict::Kind::Disproved, std::nullopt, search.nodes, d, ""};
  }
  return {Verdict::Kind::Unknown, std::nullopt, search.nodes, 0, "depth budget exhausted"};
}

struct Answer {
  Substitution binding;  // query variables only, free remainders canonicalized
  ProofTree tree;        // first derivation found for this answer (conjunctions
                         // yield one tree per query atom, stitched under a root)
};

struct SolveResult {
  std::vector<Answer> answers;
  bool exhausted = false;  // the whole search space was enumerated
  long nodes = 0;
};

namespace detail {

inline Substitution canonicalize_free(const Substitution& s) {
  std::vector<std::string> order;
  for (const auto& [v, t] : s.bindings()) t.collect_vars(order);
  Substitution rename;
  int n = 0;
  for (const std::string& v : order) rename.bind(v, Term::var("_" + std::to_string(++n)));
  Substitution out;
  for (const auto& [v, t] : s.bindings()) out.bind(v, apply(rename, t));
  return out;
}

}  // namespace detail

// Enumerates substitutions for the query variables that make all query atoms
// provable, in deterministic order. Non-query variables are grounded first.
inline SolveResult solve(const Eis& e, const std::vector<Atom>& query,
                         const std::set<std::string>& query_vars, const Budget& b = {},
                         std::size_t max_answers = static_cast<std::size_t>(-1)) {
  b.validate();
  std::set<std::string> other;
  for (const Atom& a : query) {
    detail::require_over_signature(a, e.sig);
    for (const std::string& v : a.vars())
      if (!query_vars.count(v)) other.insert(v);
  }
  std::vector<Atom> grounded;
  grounded.reserve(query.size());
  for (const Atom& a : query) grounded.push_back(ground_down_vars(a, other));

  SolveResult result;
  detail::SldSearch search{.eis = e, .budget = b};
  std::set<std::string> seen;
  for (int d = 1; d <= b.max_depth; ++d) {
    search.pruned = false;
    search.trace.clear();
    bool stopped_early = false;
    std::vector<detail::SldSearch::GoalItem> agenda;
    for (const Atom& a : grounded) agenda.emplace_back(a, d);
    search.run(agenda, 0, Substitution{}, [&](const Substitution& theta) {
      Substitution binding;
      for (const std::string& v : query_vars) binding.bind(v, apply(theta, Term::var(v)));
      binding = detail::canonicalize_free(binding);
      std::string key = to_string(binding);
      if (!seen.count(key)) {
        seen.insert(key);
        std::size_t k = 0;
        ProofTree root;
        if (grounded.size() == 1) {
          root = search.build(grounded[0], k, theta);
        } else {
          root.open = false;
          root.rule_label = "(query)";
          root.goal = apply(theta, grounded[0]);
          for (const Atom& a : grounded)
            root.children.push_back(search.build(a, k, theta));
        }
        result.answers.push_back({std::move(binding), std::move(root)});
      }
      if (result.answers.size() >= max_answers) {
        stopped_early = true;
        return true;
      }
      return false;
    });
    result.nodes = search.nodes;
    if (stopped_early || search.out_of_budget) return result;
    if (!search.pruned) {
      result.exhausted = true;
      return result;
    }
  }
  result.nodes = search.nodes;
  return result;
}

inline SolveResult solve(const Eis& e, const Atom& query, const std::set<std::string>& query_vars,
                         const Budget& b = {},
                         std::size_t max_answers = static_cast<std::size_t>(-1)) {
  return solve(e, std::vector<Atom>{query}, query_vars, b, max_answers);
}

// --- bounded canonical-model enumeration ----------------------------------

struct HerbrandResult {
  std::set<Atom> facts;
  bool saturated = false;  // one more step adds nothing at this bound
  int term_depth_bound = 0;
  long iterations = 0;
};

// All ground terms over the signature's functions with depth <= bound.
inline std::vector<Term> ground_universe(const Signature& sig, int depth_bound) {
  if (!sig.has_constant()) throw EisError("signature has no constant");
  std::vector<std::vector<Term>> by_depth(depth_bound + 1);
  std::vector<Term> all;
  for (int d = 0; d <= depth_bound; ++d) {
    for (const Symbol& f : sig.functions()) {
      if (f.arity == 0) {
        if (d == 0) by_depth[0].push_back(Term::app(f));
        continue;
      }
      if (d == 0) continue;
      // argument tuples whose maximal depth is exactly d-1
      std::vector<Term> pool;
      for (int k = 0; k < d; ++k)
        pool.insert(pool.end(), by_depth[k].begin(), by_depth[k].end());
      std::vector<int> idx(f.arity, 0);
      const std::size_t pool_size = pool.size();
      if (pool_size == 0) continue;
      while (true) {
        std::vector<Term> args;
        int maxd = -1;
        for (int a = 0; a < f.arity; ++a) {
          args.push_back(pool[idx[a]]);
          maxd = std::max(maxd, pool[idx[a]].depth());
        }
        if (maxd == d - 1) by_depth[d].push_back(Term::app(f, std::move(args)));
        int a = f.arity - 1;
        while (a >= 0 && ++idx[a] == static_cast<int>(pool_size)) idx[a--] = 0;
        if (a < 0) break;
      }
    }
    all.insert(all.end(), by_depth[d].begin(), by_depth[d].end());
  }
  return all;
}

// Least fixpoint of the one-step consequence operator, restricted to ground
// atoms whose terms stay within the depth bound. Sound for the canonical
// model; complete only relative to the bound.
inline HerbrandResult herbrand_enumerate(const Eis& e, int depth_bound, const Budget& b = {}) {
  b.validate();
  HerbrandResult out;
  out.term_depth_bound = depth_bound;
  std::vector<Term> universe = ground_universe(e.sig, depth_bound);
  std::map<std::string, std::vector<Atom>> by_pred;
  auto started = std::chrono::steady_clock::now();

  bool changed = true;
  bool capped = false;
  while (changed && !capped) {
    changed = false;
    ++out.iterations;
    for (const InferenceRule& r : e.rules) {
      // join premises left to right against the current fact set
      std::vector<Substitution> partial{Substitution{}};
      for (const Atom& prem : r.premises) {
        std::vector<Substitution> next;
        for (const Substitution& s : partial) {
          auto it = by_pred.find(prem.pred.name);
          if (it == by_pred.end()) continue;
          for (const Atom& fact : it->second)
            if (auto m = match(prem, fact, s)) next.push_back(std::move(*m));
        }
        partial = std::move(next);
        if (partial.empty()) break;
      }
      if (partial.empty()) continue;
      // enumerate any conclusion variables not fixed by the premises
      std::vector<std::string> hvars;
      r.conclusion.collect_vars(hvars);
      for (const Substitution& s : partial) {
        std::vector<std::string> free;
        for (const std::string& v : hvars)
          if (!s.binds(v)) free.push_back(v);
        std::vector<std::size_t> idx(free.size(), 0);
        while (true) {
          Substitution full = s;
          for (std::size_t k = 0; k < free.size(); ++k) full.bind(free[k], universe[idx[k]]);
          Atom fact = apply(full, r.conclusion);
          if (fact.is_ground() && fact.term_depth() <= depth_bound &&
              out.facts.insert(fact).second) {
            by_pred[fact.pred.name].push_back(fact);
            changed = true;
            if (static_cast<long>(out.facts.size()) >= b.max_nodes) capped = true;
          }
          if (capped) break;
          if (free.empty()) break;
          std::size_t a = free.size() - 1;
          while (++idx[a] == universe.size()) {
            idx[a] = 0;
            if (a == 0) goto done_tuples;
            --a;
          }
          continue;
        done_tuples:
          break;
        }
        if (capped) break;
      }
      if (capped) break;
      if (b.wall_clock && std::chrono::steady_clock::now() - started > *b.wall_clock) {
        capped = true;
        break;
      }
    }
  }
  out.saturated = !capped;
  return out;
}

// --- cycle search over a binary predicate ----------------------------------

struct CycleResult {
  bool cycle_found = false;
  std::vector<Term> path;  // t0, t1, ..., tk with tk == t0 when found
  bool saturated = false;
  int term_depth_bound = 0;
};

inline CycleResult check_cycle_free(const Eis& e, const Symbol& pred, int depth_bound,
                                    const Budget& b = {}) {
  if (pred.arity != 2) throw EisError("cycle check needs a binary predicate");
  HerbrandResult facts = herbrand_enumerate(e, depth_bound, b);
  CycleResult out;
  out.saturated = facts.saturated;
  out.term_depth_bound = depth_bound;

  std::map<Term, std::vector<Term>> edges;
  for (const Atom& a : facts.facts)
    if (a.pred.name == pred.name) edges[a.args[0]].push_back(a.args[1]);

  std::map<Term, int> color;  // 0 white, 1 on stack, 2 done
  std::vector<Term> stack;
  std::function<bool(const Term&)> dfs = [&](const Term& t) -> bool {
    color[t] = 1;
    stack.push_back(t);
    auto it = edges.find(t);
    if (it != edges.end()) {
      for (const Term& u : it->second) {
        int c = color.count(u) ? color[u] : 0;
        if (c == 1) {
          auto pos = std::find(stack.begin(), stack.end(), u);
          out.path.assign(pos, stack.end());
          out.path.push_back(u);
          return true;
        }
        if (c == 0 && dfs(u)) return true;
      }
    }
    stack.pop_back();
    color[t] = 2;
    return false;
  };
  for (const auto& [t, _] : edges) {
    if ((color.count(t) ? color[t] : 0) == 0 && dfs(t)) {
      out.cycle_found = true;
      return out;
    }
  }
  return out;
}

// --- loop search for operational termination -------------------------------

struct TerminationResult {
  enum class Kind { LoopFound, NoLoopFound };
  Kind kind = Kind::NoLoopFound;
  std::vector<Atom> trace;  // matched ancestor down to the recurring goal
  bool heuristic = false;   // found by the subsumption check, not by equality
  std::string start_goal;
  long nodes = 0;
};

namespace detail {

inline bool is_variant(const Atom& a, const Atom& b) {
  return match(a, b).has_value() && match(b, a).has_value();
}

struct LoopSearch {
  const Eis& eis;
  Budget budget;
  bool subsumption;
  long nodes = 0;
  bool out_of_budget = false;
  long fresh = 0;
  std::optional<std::vector<Atom>> witness;
  bool witness_heuristic = false;

  struct Item {
    Atom goal;
    int depth;
    std::vector<Atom> ancestors;  // tree-path goals, root first (pre-instantiation)
  };

  Substitution fresh_rename(const InferenceRule& r) {
    Substitution s;
    for (const std::string& v : r.variables())
      s.bind(v, Term::var("_" + std::to_string(++fresh)));
    return s;
  }

  bool explore(const std::vector<Item>& agenda, std::size_t i, const Substitution& theta) {
    if (witness || out_of_budget) return true;
    if (i == agenda.size()) return false;  // construction closed on this path
    const Item& item = agenda[i];
    Atom goal = apply(theta, item.goal);

    std::vector<Atom> chain;
    for (std::size_t k = 0; k < item.ancestors.size(); ++k) {
      Atom anc = apply(theta, item.ancestors[k]);
      if (detail::is_variant(anc, goal)) {
        chain.clear();
        for (std::size_t j = k; j < item.ancestors.size(); ++j)
          chain.push_back(apply(theta, item.ancestors[j]));
        chain.push_back(goal);
        witness = std::move(chain);
        witness_heuristic = false;
        return true;
      }
      if (subsumption && match(goal, anc).has_value()) {
        chain.clear();
        for (std::size_t j = k; j < item.ancestors.size(); ++j)
          chain.push_back(apply(theta, item.ancestors[j]));
        chain.push_back(goal);
        witness = std::move(chain);
        witness_heuristic = true;
        return true;
      }
    }

    if (item.depth <= 0) return false;
    for (const InferenceRule& r : eis.rules) {
      if (nodes >= budget.max_nodes) {
        out_of_budget = true;
        return true;
      }
      Substitution rename = fresh_rename(r);
      auto mgu = unify(apply(rename, r.conclusion), goal);
      if (!mgu) continue;
      ++nodes;
      Substitution theta2 = compose(*mgu, theta);
      std::vector<Item> next;
      std::vector<Atom> deeper = item.ancestors;
      deeper.push_back(item.goal);
      for (const Atom& p : r.premises)
        next.push_back({apply(rename, p), item.depth - 1, deeper});
      for (std::size_t k = i + 1; k < agenda.size(); ++k) next.push_back(agenda[k]);
      if (explore(next, 0, theta2)) return true;
    }
    return false;
  }
};

}  // namespace detail

// Looks for a goal that recurs on its own derivation ancestry while building
// well-formed trees from the most general goal of each predicate. A variant
// recurrence witnesses an infinite well-formed tree; the optional subsumption
// check (the instantiated ancestor is an instance of the current goal) is a
// heuristic and is flagged as such. Finding no loop within the budget proves
// nothing and is labeled accordingly.
inline TerminationResult check_operational_termination(const Eis& e, const Budget& b = {},
                                                       bool subsumption = false) {
  b.validate();
  TerminationResult out;
  long nodes = 0;
  for (const Symbol& p : e.sig.predicates()) {
    std::vector<Term> args;
    for (int i = 1; i <= p.arity; ++i) args.push_back(Term::var("V" + std::to_string(i)));
    Atom start(p, std::move(args));
    detail::LoopSearch search{.eis = e, .budget = b, .subsumption = subsumption};
    std::vector<detail::LoopSearch::Item> agenda{{start, b.max_depth, {}}};
    search.explore(agenda, 0, Substitution{});
    nodes += search.nodes;
    if (search.witness) {
      out.kind = TerminationResult::Kind::LoopFound;
      out.trace = std::move(*search.witness);
      out.heuristic = search.witness_heuristic;
      out.start_goal = to_string(start);
      out.nodes = nodes;
      return out;
    }
  }
  out.nodes = nodes;
  return out;
}

// Property-test hook: provability is preserved under substitution.
inline bool check_substitution_stability(const Eis& e, const Atom& atom, const Substitution& s,
                                         const Budget& b = {}) {
  return prove(e, apply(s, atom), b).proved();
}

// --- replay and rendering ---------------------------------------------------

inline const InferenceRule* find_rule(const Eis& e, const std::string& label) {
  for (const InferenceRule& r : e.rules)
    if (r.label == label) return &r;
  return nullptr;
}

// Checks the structural invariants of a closed derivation: every node's goal
// is the recorded instance of its rule's conclusion and the children line up
// with the rule's premises.
inline bool replay_proof(const Eis& e, const ProofTree& t, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (t.open) return fail("open goal at " + to_string(t.goal));
  const InferenceRule* r = find_rule(e, t.rule_label);
  if (!r) return fail("unknown rule label " + t.rule_label);
  if (!(apply(t.subst, r->conclusion) == t.goal))
    return fail("conclusion instance mismatch at " + to_string(t.goal));
  if (t.children.size() != r->premises.size())
    return fail("premise count mismatch at " + to_string(t.goal));
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (!(apply(t.subst, r->premises[i]) == t.children[i].goal))
      return fail("premise instance mismatch under " + to_string(t.goal));
    if (!replay_proof(e, t.children[i], why)) return false;
  }
  return true;
}

inline std::string to_text(const ProofTree& t, int indent = 0) {
  std::string out(indent * 2, ' ');
  out += to_string(t.goal);
  if (t.open)
    out += "   (open)";
  else
    out += "   [" + t.rule_label + "]";
  out += "\n";
  for (const ProofTree& c : t.children) out += to_text(c, indent + 1);
  return out;
}

}  // namespace eiskit
