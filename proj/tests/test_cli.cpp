#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace eiskit;
using testing::fixture_dir;
using testing::run_cli;

namespace {

std::string example1() { return fixture_dir() + "/example1.eis"; }

// the report contract: required keys and the verdict vocabulary
void check_report_shape(const Json& j) {
  REQUIRE(j.contains("command"));
  REQUIRE(j.contains("verdict"));
  REQUIRE(j.contains("justification"));
  REQUIRE(j.contains("artifacts"));
  REQUIRE(j.contains("budget"));
  REQUIRE(j.contains("timing_ms"));
  static const std::set<std::string> verdicts = {
      "proved",      "disproved", "countermodel-found", "no-countermodel-up-to-bound",
      "unknown",     "saturated", "truncated",          "exported",
      "transformed",
  };
  CHECK(verdicts.count(j["verdict"].get<std::string>()) == 1);
  if (j["verdict"] != "unknown") CHECK_FALSE(j["justification"].is_null());
}

}  // namespace

TEST_CASE("prove exit codes follow the contract") {
  auto proved = run_cli("prove " + example1() + " \"odd(s(s(s(0))))\"");
  CHECK(proved.exit_code == 0);
  CHECK(proved.stdout_text.find("verdict: proved") != std::string::npos);

  auto disproved = run_cli("prove " + example1() + " \"zero(s(s(0)))\"");
  CHECK(disproved.exit_code == 1);

  auto unknown = run_cli("--json prove " + example1() + " \"odd(s(s(s(0))))\" --depth 2");
  CHECK(unknown.exit_code == 2);

  auto malformed = run_cli("prove " + example1() + " \"odd((\"");
  CHECK(malformed.exit_code == 65);

  auto missing = run_cli("prove /nonexistent.eis \"zero(0)\"");
  CHECK(missing.exit_code == 64);

  auto usage = run_cli("prove");
  CHECK(usage.exit_code == 64);
}

TEST_CASE("json reports validate against the shipped contract") {
  auto proved = run_cli("--json prove " + example1() + " \"odd(s(s(s(0))))\"");
  REQUIRE(proved.exit_code == 0);
  Json j = Json::parse(proved.stdout_text);
  check_report_shape(j);
  CHECK(j["command"] == "prove");
  CHECK(j["verdict"] == "proved");
  CHECK(j["artifacts"].contains("proof"));
  CHECK(j["budget"]["max_depth"] == 32);
  CHECK(j["budget"]["max_nodes"] == 100000);

  auto check = run_cli("--json check " + example1() + " " + fixture_dir() +
                       "/trichotomy.fof --target grounded --suh \"0,%x\" --max-domain 2");
  REQUIRE(check.exit_code == 1);
  Json cj = Json::parse(check.stdout_text);
  check_report_shape(cj);
  CHECK(cj["verdict"] == "countermodel-found");
  CHECK(cj["justification"]["route"] == "grounded.iii");
  CHECK(cj["artifacts"]["structure"]["domain_size"].get<int>() <= 2);
  CHECK(cj["artifacts"]["certified"] == true);
}

TEST_CASE("check verdicts across the fixtures") {
  SECTION("reducibility is proved through the grounding transformation") {
    auto r = run_cli("--json check " + example1() + " " + fixture_dir() +
                     "/reducibility.fof --target grounded");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.stdout_text);
    CHECK(j["verdict"] == "proved");
    CHECK(j["justification"]["qe_display"] == "(16)");
    CHECK(j["artifacts"]["witness"]["Z"] == "s(%X)");
  }
  SECTION("cycle sentence ends inconclusive on the running example") {
    auto r = run_cli("--json check " + example1() + " " + fixture_dir() +
                     "/cycle.fof --target ground --max-domain 3 --nodes 20000");
    REQUIRE(r.exit_code == 2);
    Json j = Json::parse(r.stdout_text);
    CHECK(j["verdict"] == "no-countermodel-up-to-bound");
    CHECK(j["arguments"]["classification"] == "ecbca");
  }
  SECTION("cycle sentence is proved for the looping system") {
    auto r = run_cli("--json check " + fixture_dir() + "/tinyloop.eis " + fixture_dir() +
                     "/cycle.fof --target ground");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.stdout_text);
    CHECK(j["verdict"] == "proved");
    CHECK(j["justification"]["route"] == "ecbca-witness");
  }
  SECTION("missing surjectivity axiom is a usage error") {
    auto r = run_cli("check " + example1() + " " + fixture_dir() +
                     "/trichotomy.fof --target ground");
    CHECK(r.exit_code == 64);
  }
}

TEST_CASE("enumerate lists the bounded facts") {
  auto r = run_cli("--json enumerate " + example1() + " --term-depth 4");
  REQUIRE(r.exit_code == 0);
  Json j = Json::parse(r.stdout_text);
  CHECK(j["verdict"] == "saturated");
  const auto& facts = j["artifacts"]["facts"];
  auto has = [&](const std::string& s) {
    return std::find(facts.begin(), facts.end(), Json(s)) != facts.end();
  };
  CHECK(has("zero(0)"));
  CHECK(has("odd(s(0))"));
  CHECK(has("peven(s(s(0)))"));
}

TEST_CASE("qe subcommand") {
  auto r = run_cli("qe \"forall X. exists Z. s(s(s(X))) -> Z\"");
  REQUIRE(r.exit_code == 0);
  CHECK(r.stdout_text.find("exists Z. s(s(s(%X))) -> Z") != std::string::npos);
  CHECK(r.stdout_text.find("display (16), iff") != std::string::npos);
}

TEST_CASE("termination subcommand") {
  auto loop = run_cli("--json termination " + fixture_dir() + "/selfloop.eis --depth 8");
  CHECK(loop.exit_code == 1);
  Json lj = Json::parse(loop.stdout_text);
  CHECK(lj["verdict"] == "disproved");
  CHECK(lj["justification"]["route"] == "ancestor-repetition");

  auto ok = run_cli("--json termination " + example1() + " --depth 6 --nodes 4000");
  CHECK(ok.exit_code == 2);
  Json oj = Json::parse(ok.stdout_text);
  CHECK(oj["verdict"] == "unknown");

  auto heur = run_cli("--json termination " + fixture_dir() +
                      "/growing.eis --depth 6 --nodes 4000 --subsumption");
  CHECK(heur.exit_code == 2);
  Json hj = Json::parse(heur.stdout_text);
  CHECK(hj["justification"]["route"] == "heuristic-subsumption");
  CHECK(hj["artifacts"]["heuristic"] == true);
}

TEST_CASE("export subcommand writes deterministic files") {
  auto a = run_cli("--json export " + example1() + " --format p9 --mode countermodel --formula " +
                   fixture_dir() + "/trichotomy.fof --suh \"0,%x\"");
  REQUIRE(a.exit_code == 0);
  Json j = Json::parse(a.stdout_text);
  std::string content = j["artifacts"]["content"].get<std::string>();
  CHECK(content.find("all x (x = 0 | x = c_x).") != std::string::npos);
  CHECK(content.find("-(all x (odd(x) | peven(x) | zero(x))).") != std::string::npos);

  auto b = run_cli("--json export " + example1() + " --format p9 --mode countermodel --formula " +
                   fixture_dir() + "/trichotomy.fof --suh \"0,%x\"");
  CHECK(testing::mask_timing(a.stdout_text) == testing::mask_timing(b.stdout_text));
}

TEST_CASE("thread count does not change reports") {
  std::vector<std::string> invocations = {
      "--json check " + example1() + " " + fixture_dir() +
          "/trichotomy.fof --target grounded --suh \"0,%x\" --max-domain 2",
      "--json prove " + example1() + " \"peven(s(s(s(s(0)))))\"",
  };
  for (const std::string& inv : invocations) {
    auto one = run_cli("--threads 1 " + inv);
    auto eight = run_cli("--threads 8 " + inv);
    CHECK(one.exit_code == eight.exit_code);
    CHECK(testing::mask_timing(one.stdout_text) == testing::mask_timing(eight.stdout_text));
  }
}
