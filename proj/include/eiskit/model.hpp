#pragma once

// Explicit finite structures and everything needed to refute positive
// sentences in a canonical model: Tarskian evaluation, the least predicate
// tables over fixed function tables, surjectivity axioms, and the
// countermodel search itself. The search enumerates function tables only and
// completes them with least predicate tables; for a Horn theory and a
// positive goal this loses no countermodels, because predicates can only
// grow and growth never falsifies a positive sentence.

#include <atomic>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "eiskit/formula.hpp"
#include "eiskit/system.hpp"
#include "eiskit/term.hpp"

namespace eiskit {

// Finite first-order structure with domain {0, ..., n-1}. Function tables
// are row-major; equality is always interpreted as identity.
struct FiniteStructure {
  int domain_size = 1;
  std::map<Symbol, std::vector<int>> functions;
  std::map<Symbol, std::set<std::vector<int>>> predicates;

  static std::size_t table_size(int domain, int arity) {
    std::size_t s = 1;
    for (int i = 0; i < arity; ++i) s *= static_cast<std::size_t>(domain);
    return s;
  }

  int eval_term(const Term& t, const std::map<std::string, int>& env) const {
    if (t.is_var()) {
      auto it = env.find(t.var_name());
      if (it == env.end()) throw EisError("unbound variable '" + t.var_name() + "'");
      return it->second;
    }
    auto it = functions.find(t.symbol());
    if (it == functions.end())
      throw EisError("structure does not interpret '" + to_string(t) + "'");
    std::size_t index = 0;
    for (const Term& a : t.args())
      index = index * static_cast<std::size_t>(domain_size) +
              static_cast<std::size_t>(eval_term(a, env));
    return it->second[index];
  }

  bool holds(const Atom& a, const std::map<std::string, int>& env) const {
    auto it = predicates.find(a.pred);
    if (it == predicates.end())
      throw EisError("structure does not interpret predicate '" + a.pred.name + "'");
    std::vector<int> tuple;
    tuple.reserve(a.args.size());
    for (const Term& t : a.args) tuple.push_back(eval_term(t, env));
    return it->second.count(tuple) != 0;
  }
};

// Standard recursive truth evaluation; quantifiers range over the domain.
inline bool eval(const FiniteStructure& A, const Formula& f, std::map<std::string, int>& env) {
  switch (f.tag()) {
    case Formula::Tag::Atom:
      return A.holds(f.atom(), env);
    case Formula::Tag::Equal:
      return A.eval_term(f.left(), env) == A.eval_term(f.right(), env);
    case Formula::Tag::Not:
      return !eval(A, f.child(), env);
    case Formula::Tag::And:
      for (const Formula& k : f.children())
        if (!eval(A, k, env)) return false;
      return true;
    case Formula::Tag::Or:
      for (const Formula& k : f.children())
        if (eval(A, k, env)) return true;
      return false;
    case Formula::Tag::Implies:
      return !eval(A, f.child(0), env) || eval(A, f.child(1), env);
    case Formula::Tag::Forall:
    case Formula::Tag::Exists: {
      bool universal = f.tag() == Formula::Tag::Forall;
      auto saved = env.find(f.bound_var());
      std::optional<int> old;
      if (saved != env.end()) old = saved->second;
      bool result = universal;
      for (int d = 0; d < A.domain_size; ++d) {
        env[f.bound_var()] = d;
        bool v = eval(A, f.child(), env);
        if (universal && !v) { result = false; break; }
        if (!universal && v) { result = true; break; }
      }
      if (old)
        env[f.bound_var()] = *old;
      else
        env.erase(f.bound_var());
      return result;
    }
  }
  throw EisError("unreachable");
}

inline bool eval(const FiniteStructure& A, const Formula& f) {
  std::map<std::string, int> env;
  return eval(A, f, env);
}

// (forall x) x = t1 \/ ... \/ x = tk for a finite set of ground terms;
// satisfying it forces every domain element to be the value of some ti.
struct SuhAxiom {
  std::vector<Term> terms;

  Formula to_formula() const {
    if (terms.empty()) throw EisError("surjectivity axiom needs at least one term");
    std::vector<Formula> eqs;
    eqs.reserve(terms.size());
    for (const Term& t : terms) eqs.push_back(Formula::equal(Term::var("X"), t));
    return Formula::forall("X", Formula::disj(std::move(eqs)));
  }
};

inline bool check_surjectivity(const FiniteStructure& A, const SuhAxiom& suh) {
  std::map<std::string, int> env;
  std::set<int> covered;
  for (const Term& t : suh.terms) covered.insert(A.eval_term(t, env));
  return static_cast<int>(covered.size()) == A.domain_size;
}

// Smallest predicate tables closed under every clause instance over the
// domain, given fixed function tables. When a signature is supplied, every
// declared predicate gets a (possibly empty) table.
inline FiniteStructure with_least_predicates(FiniteStructure A,
                                             const std::vector<HornSentence>& theory,
                                             const Signature* sig = nullptr) {
  A.predicates.clear();
  if (sig)
    for (const Symbol& p : sig->predicates())
      A.predicates.emplace(p, std::set<std::vector<int>>{});
  for (const HornSentence& s : theory) {
    A.predicates.emplace(s.head.pred, std::set<std::vector<int>>{});
    for (const Atom& b : s.body) A.predicates.emplace(b.pred, std::set<std::vector<int>>{});
  }
  const int n = A.domain_size;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const HornSentence& s : theory) {
      const std::size_t k = s.vars.size();
      std::vector<int> assign(k, 0);
      while (true) {
        std::map<std::string, int> env;
        for (std::size_t i = 0; i < k; ++i) env[s.vars[i]] = assign[i];
        bool body_holds = true;
        for (const Atom& b : s.body)
          if (!A.holds(b, env)) { body_holds = false; break; }
        if (body_holds) {
          std::vector<int> tuple;
          tuple.reserve(s.head.args.size());
          for (const Term& t : s.head.args) tuple.push_back(A.eval_term(t, env));
          if (A.predicates[s.head.pred].insert(tuple).second) changed = true;
        }
        std::size_t i = 0;
        while (i < k && ++assign[i] == n) assign[i++] = 0;
        if (i == k) break;
        if (k == 0) break;
      }
    }
  }
  return A;
}

inline bool verify_model(const FiniteStructure& A, const std::vector<HornSentence>& theory) {
  const int n = A.domain_size;
  for (const HornSentence& s : theory) {
    const std::size_t k = s.vars.size();
    std::vector<int> assign(k, 0);
    while (true) {
      std::map<std::string, int> env;
      for (std::size_t i = 0; i < k; ++i) env[s.vars[i]] = assign[i];
      bool body_holds = true;
      for (const Atom& b : s.body)
        if (!A.holds(b, env)) { body_holds = false; break; }
      if (body_holds && !A.holds(s.head, env)) return false;
      std::size_t i = 0;
      while (i < k && ++assign[i] == n) assign[i++] = 0;
      if (i == k) break;
      if (k == 0) break;
    }
  }
  return true;
}

enum class ModelTarget { Ground, Grounded };

inline std::string to_string(ModelTarget t) {
  return t == ModelTarget::Ground ? "ground" : "grounded";
}

struct CountermodelRequest {
  std::vector<HornSentence> theory;
  Formula property = Formula::equal(Term::var("_"), Term::var("_"));  // positive sentence to refute
  std::optional<SuhAxiom> suh;
  std::vector<Symbol> extra_constants;  // grounded constants K, grounded target
  int max_domain = 4;
  ModelTarget target = ModelTarget::Grounded;
  int threads = 1;
};

struct CountermodelResult {
  std::optional<FiniteStructure> model;
  std::string route;  // justification tag, e.g. "grounded.iii"
  std::string route_description;
  Formula refuted = Formula::equal(Term::var("_"), Term::var("_"));  // the f' whose negation holds
  long candidates_tried = 0;
  int domain_size = 0;
};

namespace detail {

struct TableLayout {
  std::vector<Symbol> symbols;  // enumeration order
  std::vector<int> arities;
  std::optional<Symbol> pinned;  // first declared constant, fixed to element 0

  static TableLayout make(const Signature& sig, const std::vector<Symbol>& extra) {
    TableLayout layout;
    layout.symbols = sig.functions();
    for (const Symbol& c : extra) layout.symbols.push_back(c);
    std::sort(layout.symbols.begin(), layout.symbols.end());
    layout.symbols.erase(std::unique(layout.symbols.begin(), layout.symbols.end()),
                         layout.symbols.end());
    if (const Symbol* first = sig.first_constant()) layout.pinned = *first;
    for (const Symbol& s : layout.symbols) layout.arities.push_back(s.arity);
    return layout;
  }

  // Number of freely enumerated cells for domain size n.
  std::size_t cell_count(int n) const {
    std::size_t cells = 0;
    for (const Symbol& s : symbols) {
      if (pinned && s == *pinned) continue;
      cells += FiniteStructure::table_size(n, s.arity);
    }
    return cells;
  }

  // Total candidate count n^cells; throws when the space cannot be walked.
  unsigned long long candidate_count(int n) const {
    unsigned long long total = 1;
    std::size_t cells = cell_count(n);
    for (std::size_t i = 0; i < cells; ++i) {
      if (total > (1ull << 62) / static_cast<unsigned long long>(n))
        throw EisError("countermodel search space too large to enumerate");
      total *= static_cast<unsigned long long>(n);
    }
    return total;
  }

  FiniteStructure build(int n, unsigned long long index) const {
    FiniteStructure A;
    A.domain_size = n;
    // digits are assigned most-significant-first in symbol order, so
    // candidate 0 maps every cell to element 0
    std::size_t cells = cell_count(n);
    std::vector<int> digits(cells, 0);
    for (std::size_t i = cells; i-- > 0;) {
      digits[i] = static_cast<int>(index % static_cast<unsigned long long>(n));
      index /= static_cast<unsigned long long>(n);
    }
    std::size_t next = 0;
    for (const Symbol& s : symbols) {
      std::size_t size = FiniteStructure::table_size(n, s.arity);
      std::vector<int> table(size, 0);
      if (pinned && s == *pinned) {
        A.functions[s] = std::move(table);
        continue;
      }
      for (std::size_t c = 0; c < size; ++c) table[c] = digits[next++];
      A.functions[s] = std::move(table);
    }
    return A;
  }
};

}  // namespace detail

// Searches for a finite model of the theory (plus the surjectivity axiom,
// when given) that satisfies the negation of the appropriate form of the
// property. Function tables are enumerated in canonical order over growing
// domain sizes; candidates may be sharded across threads, and the reported
// model is always the canonically smallest hit, so the result does not
// depend on scheduling.
inline CountermodelResult find_countermodel(const Signature& sig, const CountermodelRequest& req) {
  Classification cls = classify(req.property);
  if (cls.cls == FormulaClass::General)
    throw EisError("countermodel search needs a positive sentence");
  if (req.max_domain < 1) throw EisError("max_domain must be positive");

  CountermodelResult result;
  if (cls.cls == FormulaClass::Ecbca) {
    result.route = req.target == ModelTarget::Ground ? "ground.i" : "grounded.i";
    result.route_description =
        "existentially closed boolean combination of atoms; any model of the "
        "theory satisfying the negation refutes the property in the canonical model";
    result.refuted = req.property;
  } else if (req.target == ModelTarget::Grounded && cls.cls == FormulaClass::AndPositive) {
    result.route = "grounded.ii";
    result.route_description =
        "conjunction-only positive sentence; universal variables are replaced by "
        "grounded constants before negating";
    std::set<std::string> universals(cls.universal_vars.begin(), cls.universal_vars.end());
    result.refuted = partial_ground(cls.normalized, universals);
  } else if (req.suh) {
    result.route = req.target == ModelTarget::Ground ? "ground.ii" : "grounded.iii";
    result.route_description =
        "surjectivity axiom forces the interpretation homomorphism onto the "
        "domain, so the negation transfers to the canonical model";
    result.refuted = req.property;
  } else {
    throw EisError(
        "this sentence shape needs a surjectivity axiom (--suh) to justify a countermodel");
  }

  Formula negated = negate_nnf(result.refuted);
  std::optional<Formula> suh_formula;
  if (req.suh) suh_formula = req.suh->to_formula();

  // every grounded constant that can appear during evaluation needs a table
  std::set<Symbol> extras(req.extra_constants.begin(), req.extra_constants.end());
  collect_grounded_constants(result.refuted, extras);
  if (req.suh)
    for (const Term& t : req.suh->terms) collect_grounded_constants(t, extras);

  detail::TableLayout layout =
      detail::TableLayout::make(sig, std::vector<Symbol>(extras.begin(), extras.end()));
  const int threads = std::max(1, req.threads);

  for (int n = 1; n <= req.max_domain; ++n) {
    unsigned long long total = layout.candidate_count(n);
    std::atomic<unsigned long long> best{total};
    std::atomic<long> tried{0};

    auto worker = [&](int worker_id) {
      long local_tried = 0;
      for (unsigned long long index = static_cast<unsigned long long>(worker_id); index < total;
           index += static_cast<unsigned long long>(threads)) {
        if (index >= best.load(std::memory_order_relaxed)) break;
        ++local_tried;
        FiniteStructure A = layout.build(n, index);
        std::map<std::string, int> env;
        if (suh_formula && !eval(A, *suh_formula, env)) continue;
        FiniteStructure M = with_least_predicates(std::move(A), req.theory, &sig);
        if (!eval(M, negated)) continue;
        unsigned long long prev = best.load(std::memory_order_relaxed);
        while (index < prev &&
               !best.compare_exchange_weak(prev, index, std::memory_order_relaxed)) {
        }
        break;
      }
      tried.fetch_add(local_tried, std::memory_order_relaxed);
    };

    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(threads));
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
      for (std::thread& t : pool) t.join();
    }

    result.candidates_tried += tried.load();
    unsigned long long hit = best.load();
    if (hit < total) {
      FiniteStructure M = with_least_predicates(layout.build(n, hit), req.theory, &sig);
      // certify before returning
      std::map<std::string, int> env;
      if (!verify_model(M, req.theory) || (suh_formula && !eval(M, *suh_formula, env)) ||
          !eval(M, negated))
        throw EisError("internal error: countermodel failed certification");
      result.model = std::move(M);
      result.domain_size = n;
      return result;
    }
  }
  return result;
}

// Human-readable table dump, one block per symbol.
inline std::string to_text(const FiniteStructure& A) {
  std::string out = "structure (domain size " + std::to_string(A.domain_size) + ")\n";
  for (const auto& [sym, table] : A.functions) {
    std::string name = sym.kind == SymbolKind::GroundedVar ? "%" + sym.name : sym.name;
    if (sym.arity == 0) {
      out += "  fun " + name + " = " + std::to_string(table[0]) + "\n";
      continue;
    }
    out += "  fun " + name + ": [";
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(table[i]);
    }
    out += "]\n";
  }
  for (const auto& [sym, tuples] : A.predicates) {
    out += "  pred " + sym.name + " = {";
    bool first = true;
    for (const std::vector<int>& t : tuples) {
      if (!first) out += ", ";
      first = false;
      if (t.size() == 1) {
        out += std::to_string(t[0]);
      } else {
        out += "(";
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (i) out += ",";
          out += std::to_string(t[i]);
        }
        out += ")";
      }
    }
    out += "}\n";
  }
  return out;
}

}  // namespace eiskit
