// eiskit command line: prove atoms, check first-order properties against the
// canonical models, enumerate bounded ground consequences, run the bounded
// termination and cycle analyses, and export prover input files.
//
// Exit codes: 0 established, 1 refuted (disproved / countermodel found),
// 2 inconclusive (unknown / no countermodel up to the bound), 64 usage
// errors, 65 malformed input files or expressions.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "eiskit/eiskit.hpp"

namespace {

using namespace eiskit;
using Clock = std::chrono::steady_clock;

constexpr int kExitEstablished = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitBadInput = 65;

struct CliError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitUsage, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SpecDocument load_spec(const std::string& path) {
  auto res = parse_spec(read_file(path));
  if (!res.ok())
    throw CliError{kExitBadInput, path + ":\n" + join_diagnostics(res.diagnostics)};
  return *res;
}

Formula load_single_formula(const std::string& path, const Signature& sig) {
  auto res = parse_formula_file(read_file(path), &sig);
  if (!res.value)
    throw CliError{kExitBadInput, path + ":\n" + join_diagnostics(res.diagnostics)};
  if (res.value->size() != 1)
    throw CliError{kExitBadInput, path + ": expected exactly one formula, found " +
                                      std::to_string(res.value->size())};
  FormulaParse& fp = (*res.value)[0];
  if (!fp.free_variables.empty())
    throw CliError{kExitBadInput,
                   path + ": formula has free variables (" + fp.free_variables[0] + ", ...)"};
  return fp.formula;
}

int default_threads() {
  if (const char* env = std::getenv("EISKIT_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

// Common report assembly; --json output is stable apart from timing_ms.
struct Report {
  std::string command;
  Json arguments = Json::object();
  std::string verdict;
  Json justification;  // stays null for unknown verdicts
  Json artifacts = Json::object();
  Json budget = Json::object();
  std::string human;
  int exit_code = kExitEstablished;

  int finish(bool json, Clock::time_point started) const {
    if (json) {
      Json out{{"command", command},
               {"arguments", arguments},
               {"verdict", verdict.empty() ? Json() : Json(verdict)},
               {"justification", justification},
               {"artifacts", artifacts},
               {"budget", budget},
               {"timing_ms",
                std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started)
                    .count()}};
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << human;
    }
    return exit_code;
  }
};

std::set<std::string> atom_vars(const std::vector<Atom>& atoms) {
  std::set<std::string> vars;
  for (const Atom& a : atoms)
    for (const std::string& v : a.vars()) vars.insert(v);
  return vars;
}

struct WitnessOutcome {
  bool found = false;
  Substitution binding;
  ProofTree tree;
  bool ground_over_base = false;  // witness atoms ground and free of grounded constants
  bool exhausted = true;          // every disjunct search ran to completion
};

// Searches the purely existential sentence `f` for a provable instantiation,
// disjunct by disjunct in deterministic order.
WitnessOutcome search_witness(const Eis& e, const Formula& f, const Budget& budget) {
  PrenexForm p = to_prenex_nnf(f);
  WitnessOutcome out;
  for (const std::vector<Atom>& conjunct : detail::matrix_to_dnf(p.matrix)) {
    SolveResult sr = solve(e, conjunct, atom_vars(conjunct), budget, 1);
    if (!sr.exhausted) out.exhausted = false;
    if (sr.answers.empty()) continue;
    out.found = true;
    out.binding = sr.answers[0].binding;
    out.tree = sr.answers[0].tree;
    bool clean = true;
    for (const Atom& a : conjunct) {
      Atom instance = apply(out.binding, a);
      if (!instance.is_ground()) clean = false;
      std::set<Symbol> grounded;
      collect_grounded_constants(instance, grounded);
      if (!grounded.empty()) clean = false;
    }
    out.ground_over_base = clean;
    return out;
  }
  return out;
}

struct CheckOptions {
  std::string spec_path;
  std::string formula_path;
  std::string target = "grounded";
  std::string suh_text;
  int max_domain = 4;
  Budget budget;
  int threads = 1;
  bool json = false;
};

Report run_check(const CheckOptions& opt) {
  Report rep;
  rep.command = "check";
  SpecDocument doc = load_spec(opt.spec_path);
  Eis e = doc.to_eis();
  std::vector<HornSentence> theory = theory_of(e);
  Formula f = load_single_formula(opt.formula_path, doc.sig);
  ModelTarget target = opt.target == "ground" ? ModelTarget::Ground : ModelTarget::Grounded;

  rep.arguments = {{"spec", opt.spec_path},
                   {"formula", to_string(f)},
                   {"target", opt.target},
                   {"suh", opt.suh_text},
                   {"max_domain", opt.max_domain}};
  rep.budget = to_json(opt.budget);
  rep.budget["max_domain"] = opt.max_domain;

  if (target == ModelTarget::Ground && mentions_grounded_constant(f))
    throw CliError{kExitUsage,
                   "grounded constants in the formula require --target grounded"};

  std::optional<SuhAxiom> suh;
  std::set<Symbol> extra;
  collect_grounded_constants(f, extra);
  if (!opt.suh_text.empty()) {
    auto terms = parse_term_list(opt.suh_text, doc.sig);
    if (!terms.ok()) throw CliError{kExitBadInput, "--suh: " + join_diagnostics(terms.diagnostics)};
    for (const Term& t : *terms) {
      if (!t.is_ground()) throw CliError{kExitUsage, "--suh terms must be ground"};
      collect_grounded_constants(t, extra);
    }
    suh = SuhAxiom{*terms};
  }

  Classification cls = classify(f);
  rep.arguments["classification"] = to_string(cls.cls);
  if (cls.cls == FormulaClass::General)
    throw CliError{kExitUsage, "general sentences are not supported; export the theory instead"};

  auto run_countermodel = [&](const char* after) {
    CountermodelRequest req;
    req.theory = theory;
    req.property = f;
    req.suh = suh;
    req.extra_constants.assign(extra.begin(), extra.end());
    req.max_domain = opt.max_domain;
    req.target = target;
    req.threads = opt.threads;
    CountermodelResult cm = find_countermodel(doc.sig, req);
    if (cm.model) {
      rep.verdict = "countermodel-found";
      rep.exit_code = kExitRefuted;
      rep.justification = {{"route", cm.route},
                           {"detail", cm.route_description},
                           {"refuted_form", to_string(cm.refuted)},
                           {"after", after}};
      rep.artifacts["structure"] = to_json(*cm.model);
      rep.artifacts["structure_text"] = to_text(*cm.model);
      rep.artifacts["certified"] = true;
      rep.human = "verdict: countermodel-found (" + cm.route + ")\n" + to_text(*cm.model);
    } else {
      rep.verdict = "no-countermodel-up-to-bound";
      rep.exit_code = kExitInconclusive;
      rep.justification = {{"route", cm.route},
                           {"detail", "no model up to domain size " +
                                          std::to_string(opt.max_domain) + " falsifies the property"},
                           {"candidates_tried", cm.candidates_tried},
                           {"after", after}};
      rep.human = "verdict: no-countermodel-up-to-bound (" + cm.route + ", " +
                  std::to_string(cm.candidates_tried) + " candidates)\n";
    }
  };

  if (cls.cls == FormulaClass::Ecbca) {
    WitnessOutcome w = search_witness(e, f, opt.budget);
    if (w.found) {
      rep.verdict = "proved";
      rep.exit_code = kExitEstablished;
      std::string model_note =
          target == ModelTarget::Ground
              ? "holds in the ground canonical model"
              : (w.ground_over_base
                     ? "ground witness; transfers from the ground to the grounded canonical model"
                     : "holds in the grounded canonical model");
      rep.justification = {{"route", "ecbca-witness"}, {"detail", model_note}};
      rep.artifacts["witness"] = to_json(w.binding);
      rep.artifacts["proof"] = to_json(w.tree);
      rep.artifacts["proof_text"] = to_text(w.tree);
      rep.human = "verdict: proved (witness " + to_string(w.binding) + ")\n" + to_text(w.tree);
      return rep;
    }
    run_countermodel(w.exhausted ? "witness search exhausted without a proof"
                                 : "witness search inconclusive within budget");
    return rep;
  }

  if (target == ModelTarget::Grounded) {
    QeResult qe = qe_transform(f);
    rep.arguments["qe_display"] = qe.display;
    rep.arguments["qe_direction"] = to_string(qe.direction);
    if (qe.direction == QeDirection::Iff || qe.direction == QeDirection::BackwardOnly) {
      std::set<Symbol> qe_consts;
      collect_grounded_constants(qe.transformed, qe_consts);
      extra.insert(qe_consts.begin(), qe_consts.end());
      WitnessOutcome w = search_witness(e, qe.transformed, opt.budget);
      if (w.found) {
        rep.verdict = "proved";
        rep.exit_code = kExitEstablished;
        rep.justification = {{"route", "qe-witness"},
                             {"qe_display", qe.display},
                             {"qe_direction", to_string(qe.direction)},
                             {"detail", "grounded form " + to_string(qe.transformed) +
                                            " established by proof search"}};
        rep.artifacts["witness"] = to_json(w.binding);
        rep.artifacts["proof"] = to_json(w.tree);
        rep.artifacts["proof_text"] = to_text(w.tree);
        rep.human = "verdict: proved via qe display " + qe.display + " (witness " +
                    to_string(w.binding) + ")\n" + to_text(w.tree);
        return rep;
      }
    }
    run_countermodel("grounded witness route did not establish the property");
    return rep;
  }

  // ground target, universally quantified shape: only the countermodel route
  run_countermodel("universal sentence; witness search not applicable");
  return rep;
}

void require_positive(int v, const char* what) {
  if (v <= 0) throw CliError{kExitUsage, std::string(what) + " must be positive"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elementary inference systems toolkit"};
  app.require_subcommand(1);

  bool json = false;
  int threads = default_threads();
  app.add_flag("--json", json, "machine-readable report on stdout");
  app.add_option("--threads", threads, "worker cap for model search");

  Budget budget;
  auto add_budget = [&budget](CLI::App* cmd) {
    cmd->add_option("--depth", budget.max_depth, "proof tree depth limit");
    cmd->add_option("--nodes", budget.max_nodes, "proof search node limit");
  };

  // prove
  std::string spec_path, atom_text;
  CLI::App* prove_cmd = app.add_subcommand("prove", "prove a single atom");
  prove_cmd->add_option("spec", spec_path, "system file")->required();
  prove_cmd->add_option("atom", atom_text, "atom to prove")->required();
  add_budget(prove_cmd);

  // check
  CheckOptions check;
  CLI::App* check_cmd = app.add_subcommand("check", "check a first-order property");
  check_cmd->add_option("spec", check.spec_path, "system file")->required();
  check_cmd->add_option("formula", check.formula_path, "formula file")->required();
  check_cmd->add_option("--target", check.target, "canonical model: ground|grounded")
      ->check(CLI::IsMember({"ground", "grounded"}));
  check_cmd->add_option("--suh", check.suh_text, "comma-separated ground terms for the surjectivity axiom");
  check_cmd->add_option("--max-domain", check.max_domain, "largest domain size to search");
  add_budget(check_cmd);

  // enumerate
  int term_depth = 4;
  CLI::App* enum_cmd = app.add_subcommand("enumerate", "bounded ground consequences");
  enum_cmd->add_option("spec", spec_path, "system file")->required();
  enum_cmd->add_option("--term-depth", term_depth, "term depth bound");
  add_budget(enum_cmd);

  // export
  std::string format = "tptp", mode = "prove", formula_path, out_path, suh_text;
  CLI::App* export_cmd = app.add_subcommand("export", "emit prover input");
  export_cmd->add_option("spec", spec_path, "system file")->required();
  export_cmd->add_option("--format", format, "tptp|p9")->check(CLI::IsMember({"tptp", "p9"}));
  export_cmd->add_option("--mode", mode, "prove|countermodel")
      ->check(CLI::IsMember({"prove", "countermodel"}));
  export_cmd->add_option("--formula", formula_path, "goal formula file");
  export_cmd->add_option("--suh", suh_text, "surjectivity axiom terms");
  export_cmd->add_option("-o,--output", out_path, "output path (default stdout)");

  // qe
  std::string formula_text, qe_spec_path;
  CLI::App* qe_cmd = app.add_subcommand("qe", "grounding transformation for a positive sentence");
  qe_cmd->add_option("formula", formula_text, "formula text")->required();
  qe_cmd->add_option("--spec", qe_spec_path, "system file for the signature");

  // termination
  bool subsumption = false;
  CLI::App* term_cmd = app.add_subcommand("termination", "bounded loop search");
  term_cmd->add_option("spec", spec_path, "system file")->required();
  add_budget(term_cmd);
  term_cmd->add_flag("--subsumption", subsumption, "also report subsumption loops (heuristic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_name() == "CallForHelp" || err.get_name() == "CallForAllHelp" ||
        err.get_name() == "CallForVersion")
      return app.exit(err);
    std::cerr << err.what() << "\n";
    return kExitUsage;
  }

  auto started = Clock::now();
  try {
    budget.validate();
    require_positive(threads, "--threads");
    check.budget = budget;
    check.threads = threads;
    check.json = json;

    if (prove_cmd->parsed()) {
      SpecDocument doc = load_spec(spec_path);
      Eis e = doc.to_eis();
      auto atom = parse_atom(atom_text, doc.sig);
      if (!atom.ok()) throw CliError{kExitBadInput, "atom: " + join_diagnostics(atom.diagnostics)};
      Verdict v = prove(e, *atom, budget);
      Report rep;
      rep.command = "prove";
      rep.arguments = {{"spec", spec_path}, {"atom", to_string(*atom)}};
      rep.budget = to_json(budget);
      rep.verdict = to_string(v.kind);
      switch (v.kind) {
        case Verdict::Kind::Proved:
          rep.exit_code = kExitEstablished;
          rep.justification = {{"route", "closed-proof-tree"},
                               {"detail", "closed proof tree found at depth " +
                                              std::to_string(v.proof->depth())}};
          rep.artifacts["proof"] = to_json(*v.proof);
          rep.artifacts["proof_text"] = to_text(*v.proof);
          rep.human = "verdict: proved\n" + to_text(*v.proof);
          break;
        case Verdict::Kind::Disproved:
          rep.exit_code = kExitRefuted;
          rep.justification = {{"route", "exhaustive-search"},
                               {"detail", "search space fully explored to depth " +
                                              std::to_string(v.exhausted_depth) + " (" +
                                              std::to_string(v.nodes_explored) +
                                              " nodes), no closed tree exists"}};
          rep.human = "verdict: disproved (exhaustive to depth " +
                      std::to_string(v.exhausted_depth) + ")\n";
          break;
        case Verdict::Kind::Unknown:
          rep.exit_code = kExitInconclusive;
          rep.human = "verdict: unknown (" + v.reason + ")\n";
          break;
      }
      if (v.kind == Verdict::Kind::Unknown) rep.justification = Json();
      return rep.finish(json, started);
    }

    if (check_cmd->parsed()) {
      Report rep = run_check(check);
      return rep.finish(json, started);
    }

    if (enum_cmd->parsed()) {
      SpecDocument doc = load_spec(spec_path);
      Eis e = doc.to_eis();
      HerbrandResult h = herbrand_enumerate(e, term_depth, budget);
      Report rep;
      rep.command = "enumerate";
      rep.arguments = {{"spec", spec_path}, {"term_depth", term_depth}};
      rep.budget = to_json(budget);
      rep.verdict = h.saturated ? "saturated" : "truncated";
      rep.exit_code = kExitEstablished;
      rep.justification = {{"route", "bounded-least-fixpoint"},
                           {"detail", std::to_string(h.facts.size()) + " facts in " +
                                          std::to_string(h.iterations) + " iterations"}};
      Json facts = Json::array();
      std::string text;
      for (const Atom& a : h.facts) {
        facts.push_back(to_string(a));
        text += to_string(a) + "\n";
      }
      rep.artifacts["facts"] = std::move(facts);
      rep.artifacts["saturated"] = h.saturated;
      rep.human = text + (h.saturated ? "(saturated)\n" : "(truncated by budget)\n");
      return rep.finish(json, started);
    }

    if (export_cmd->parsed()) {
      SpecDocument doc = load_spec(spec_path);
      Eis e = doc.to_eis();
      ExportJob job;
      job.theory = theory_of(e);
      job.mode = mode == "prove" ? ExportJob::Mode::Prove : ExportJob::Mode::Countermodel;
      if (!formula_path.empty()) job.goal = load_single_formula(formula_path, doc.sig);
      if (job.mode == ExportJob::Mode::Prove && !job.goal)
        throw CliError{kExitUsage, "--mode prove needs --formula"};
      if (!suh_text.empty()) {
        auto terms = parse_term_list(suh_text, doc.sig);
        if (!terms.ok())
          throw CliError{kExitBadInput, "--suh: " + join_diagnostics(terms.diagnostics)};
        job.suh = SuhAxiom{*terms};
      }
      std::string emitted = format == "tptp" ? emit_tptp(job) : emit_p9(job);
      if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw CliError{kExitUsage, "cannot write '" + out_path + "'"};
        out << emitted;
      }
      Report rep;
      rep.command = "export";
      rep.arguments = {{"spec", spec_path},
                       {"format", format},
                       {"mode", mode},
                       {"formula", formula_path},
                       {"suh", suh_text}};
      rep.verdict = "exported";
      rep.exit_code = kExitEstablished;
      rep.justification = {{"route", "emission"}, {"detail", format + " " + mode + " job"}};
      if (!out_path.empty())
        rep.artifacts["output_path"] = out_path;
      else
        rep.artifacts["content"] = emitted;
      rep.human = out_path.empty() ? emitted : "wrote " + out_path + "\n";
      return rep.finish(json, started);
    }

    if (qe_cmd->parsed()) {
      std::optional<SpecDocument> doc;
      const Signature* sig = nullptr;
      if (!qe_spec_path.empty()) {
        doc = load_spec(qe_spec_path);
        sig = &doc->sig;
      }
      auto parsed = parse_formula(formula_text, sig);
      if (!parsed.ok())
        throw CliError{kExitBadInput, "formula: " + join_diagnostics(parsed.diagnostics)};
      if (!parsed.value->free_variables.empty())
        throw CliError{kExitBadInput, "formula has free variables"};
      QeResult qe = qe_transform(parsed.value->formula);
      Report rep;
      rep.command = "qe";
      rep.arguments = {{"formula", to_string(parsed.value->formula)}};
      rep.verdict = "transformed";
      rep.exit_code = kExitEstablished;
      rep.justification = {{"route", "qe"},
                           {"qe_display", qe.display},
                           {"qe_direction", to_string(qe.direction)},
                           {"note", qe.note}};
      rep.artifacts["transformed"] = to_string(qe.transformed);
      rep.artifacts["transformed_ast"] = to_json(qe.transformed);
      rep.human = to_string(qe.transformed) + "\ndisplay " + qe.display + ", " +
                  to_string(qe.direction) + "\n";
      return rep.finish(json, started);
    }

    if (term_cmd->parsed()) {
      SpecDocument doc = load_spec(spec_path);
      Eis e = doc.to_eis();
      TerminationResult t = check_operational_termination(e, budget, subsumption);
      Report rep;
      rep.command = "termination";
      rep.arguments = {{"spec", spec_path}, {"subsumption", subsumption}};
      rep.budget = to_json(budget);
      Json trace = Json::array();
      for (const Atom& a : t.trace) trace.push_back(to_string(a));
      if (t.kind == TerminationResult::Kind::LoopFound && !t.heuristic) {
        rep.verdict = "disproved";
        rep.exit_code = kExitRefuted;
        rep.justification = {{"route", "ancestor-repetition"},
                             {"detail", "a goal recurs (up to renaming) on its own ancestry; "
                                        "an infinite well-formed tree exists"},
                             {"start_goal", t.start_goal}};
        rep.artifacts["loop_trace"] = std::move(trace);
        rep.human = "verdict: disproved (loop from " + t.start_goal + ")\n";
        for (const Atom& a : t.trace) rep.human += "  " + to_string(a) + "\n";
      } else if (t.kind == TerminationResult::Kind::LoopFound) {
        rep.verdict = "unknown";
        rep.exit_code = kExitInconclusive;
        rep.justification = {{"route", "heuristic-subsumption"},
                             {"detail", "an ancestor goal is an instance of the current goal; "
                                        "this suggests but does not certify nontermination"},
                             {"start_goal", t.start_goal}};
        rep.artifacts["loop_trace"] = std::move(trace);
        rep.artifacts["heuristic"] = true;
        rep.human = "verdict: unknown (heuristic subsumption loop from " + t.start_goal + ")\n";
        for (const Atom& a : t.trace) rep.human += "  " + to_string(a) + "\n";
      } else {
        rep.verdict = "unknown";
        rep.exit_code = kExitInconclusive;
        rep.justification = {{"route", "bounded-exploration"},
                             {"detail", "no loop found within budget (" +
                                            std::to_string(t.nodes) +
                                            " nodes); this is not a termination proof"}};
        rep.human = "verdict: unknown (no loop up to budget, " + std::to_string(t.nodes) +
                    " nodes)\n";
      }
      return rep.finish(json, started);
    }
  } catch (const CliError& err) {
    std::cerr << "eiskit: " << err.message << "\n";
    return err.code;
  } catch (const EisError& err) {
    std::cerr << "eiskit: " << err.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
