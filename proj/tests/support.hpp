#pragma once

// Shared test helpers: fixture loading, seeded random generators for terms,
// atoms, substitutions, formulas and small documents, and a tiny subprocess
// runner for the CLI.

#include <array>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eiskit/eiskit.hpp"

namespace testing {

using namespace eiskit;

inline std::string fixture_dir() {
#ifdef EISKIT_FIXTURE_DIR
  return EISKIT_FIXTURE_DIR;
#else
  return "tests/fixtures";
#endif
}

inline std::string golden_dir() {
#ifdef EISKIT_GOLDEN_DIR
  return EISKIT_GOLDEN_DIR;
#else
  return "tests/golden";
#endif
}

inline std::string cli_path() {
#ifdef EISKIT_BIN_PATH
  return EISKIT_BIN_PATH;
#else
  return "./eiskit";
#endif
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SpecDocument load_example1() {
  return parse_spec(slurp(fixture_dir() + "/example1.eis")).expect();
}

inline Formula load_formula(const std::string& name, const Signature& sig) {
  auto parsed = parse_formula_file(slurp(fixture_dir() + "/" + name), &sig);
  return parsed.expect().at(0).formula;
}

inline Term num(int n) {
  Term t = Term::app(fun_symbol("0", 0));
  for (int i = 0; i < n; ++i) t = Term::app(fun_symbol("s", 1), {t});
  return t;
}

inline Atom atom1(const std::string& pred, Term t) {
  return Atom(pred_symbol(pred, 1), {std::move(t)});
}

// --- random generation -------------------------------------------------------

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  int below(int n) { return static_cast<int>(engine() % static_cast<std::uint64_t>(n)); }
  bool chance(double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine) < p;
  }
};

struct TermGen {
  std::vector<Symbol> funs = {fun_symbol("0", 0), fun_symbol("s", 1), fun_symbol("f", 2)};
  std::vector<std::string> vars = {"X", "Y", "Z"};

  Term term(Rng& rng, int depth = 3, bool allow_vars = true) {
    if (depth == 0 || rng.chance(0.3)) {
      if (allow_vars && rng.chance(0.4)) return Term::var(vars[rng.below((int)vars.size())]);
      return Term::app(funs[0]);
    }
    const Symbol& f = funs[rng.below((int)funs.size())];
    std::vector<Term> args;
    for (int i = 0; i < f.arity; ++i) args.push_back(term(rng, depth - 1, allow_vars));
    return Term::app(f, std::move(args));
  }

  Substitution subst(Rng& rng, int depth = 2, bool allow_vars = false) {
    Substitution s;
    for (const std::string& v : vars)
      if (rng.chance(0.7)) s.bind(v, term(rng, depth, allow_vars));
    return s;
  }
};

// --- subprocess runner -------------------------------------------------------

struct RunOutput {
  int exit_code = -1;
  std::string stdout_text;
};

inline RunOutput run_cli(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  RunOutput out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.stdout_text.append(buf.data(), n);
  int status = pclose(pipe);
  out.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

// Masks volatile report fields so runs can be compared byte for byte.
inline std::string mask_timing(const std::string& json_text) {
  Json j = Json::parse(json_text);
  j["timing_ms"] = 0;
  return j.dump(2);
}

}  // namespace testing
