#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace eiskit;
using testing::load_example1;
using testing::num;

TEST_CASE("running example parses") {
  SpecDocument doc = load_example1();
  CHECK(doc.name == "example1");
  CHECK(doc.horn.size() == 5);
  CHECK(doc.rules.size() == 1);
  CHECK(doc.mu.bottom_default);
  CHECK(doc.mu.entries.empty());
  CHECK_FALSE(doc.is_raw_eis);
  CHECK(doc.sig.find_function("s")->arity == 1);
  CHECK(doc.sig.find_predicate("->") != nullptr);
  CHECK(validate_gtrs(doc.to_gtrs()).empty());
}

TEST_CASE("rule with a variable left-hand side is rejected") {
  auto res = parse_spec("fun 0/0.\nrule X -> 0.");
  REQUIRE_FALSE(res.ok());
  CHECK(join_diagnostics(res.diagnostics).find("left-hand side is a variable") !=
        std::string::npos);
}

TEST_CASE("empty input is an error") {
  auto res = parse_spec("   # only a comment\n");
  REQUIRE_FALSE(res.ok());
  CHECK(res.diagnostics[0].message == "empty document");
}

TEST_CASE("reserved head predicates are rejected in clauses") {
  auto res = parse_spec("fun 0/0.\npred q/1.\nclause X ->* 0 :- q(X).");
  REQUIRE_FALSE(res.ok());
  CHECK(join_diagnostics(res.diagnostics).find("reserved predicate") != std::string::npos);
}

TEST_CASE("undeclared symbols and arity mismatches are reported with positions") {
  auto res = parse_spec("fun 0/0.\npred odd/1.\nclause odd(zz).\nclause odd(0, 0).");
  REQUIRE_FALSE(res.ok());
  REQUIRE(res.diagnostics.size() == 2);
  CHECK(res.diagnostics[0].line == 3);
  CHECK(res.diagnostics[0].message.find("undeclared function 'zz'") != std::string::npos);
  CHECK(res.diagnostics[1].line == 4);
  CHECK(res.diagnostics[1].message.find("arity mismatch") != std::string::npos);
  // ordered by source position
  CHECK(res.diagnostics[0].line <= res.diagnostics[1].line);
}

TEST_CASE("replacement map positions are range checked") {
  auto res = parse_spec("fun s/1.\nmu s: {2}.");
  REQUIRE_FALSE(res.ok());
  CHECK(join_diagnostics(res.diagnostics).find("out of range") != std::string::npos);
}

TEST_CASE("mixed document forms are rejected") {
  auto res = parse_spec("fun 0/0.\npred p/1.\nclause p(0).\ninfer r: |- p(0).");
  REQUIRE_FALSE(res.ok());
  CHECK(join_diagnostics(res.diagnostics).find("mixes") != std::string::npos);
}

TEST_CASE("raw inference documents parse") {
  auto res = parse_spec(testing::slurp(testing::fixture_dir() + "/selfloop.eis"));
  REQUIRE(res.ok());
  CHECK(res->is_raw_eis);
  REQUIRE(res->raw_rules.size() == 1);
  CHECK(res->raw_rules[0].label == "self");
  CHECK(res->raw_rules[0].premises.size() == 1);
  Eis e = res->to_eis();
  CHECK(e.rules.size() == 1);
}

TEST_CASE("formula parsing") {
  SpecDocument doc = load_example1();

  SECTION("universally closed disjunction") {
    auto f = parse_formula("forall X. odd(X) \\/ peven(X) \\/ zero(X)", &doc.sig).expect();
    CHECK(f.free_variables.empty());
    REQUIRE(f.formula.tag() == Formula::Tag::Forall);
    CHECK(f.formula.child().tag() == Formula::Tag::Or);
    CHECK(f.formula.child().children().size() == 3);
  }
  SECTION("existential conjunction with infix atoms") {
    auto f = parse_formula("exists X. exists Y. X -> Y /\\ Y ->* X", &doc.sig).expect();
    const Formula& body = f.formula.child().child();
    REQUIRE(body.tag() == Formula::Tag::And);
    CHECK(body.children()[0].atom().pred.name == "->");
    CHECK(body.children()[1].atom().pred.name == "->*");
  }
  SECTION("mixed quantifiers") {
    auto f = parse_formula("forall X. exists Z. s(s(s(X))) -> Z", &doc.sig).expect();
    CHECK(f.formula.tag() == Formula::Tag::Forall);
    CHECK(f.formula.child().tag() == Formula::Tag::Exists);
  }
  SECTION("grounded constants and equality") {
    auto f = parse_formula("forall X. X = 0 \\/ X = %x", &doc.sig).expect();
    const Formula& eq2 = f.formula.child().children()[1];
    CHECK(eq2.right().is_grounded_constant());
    CHECK(eq2.right().symbol().name == "x");
  }
  SECTION("free variables are reported") {
    auto f = parse_formula("odd(X)", &doc.sig).expect();
    CHECK(f.free_variables == std::vector<std::string>{"X"});
  }
  SECTION("undeclared predicate") {
    auto res = parse_formula("forall X. prime(X)", &doc.sig);
    CHECK_FALSE(res.ok());
  }
}

TEST_CASE("formula files take one formula per line") {
  SpecDocument doc = load_example1();
  auto res = parse_formula_file("# comment\nforall X. geq(X, 0)\n\nzero(0)\n", &doc.sig);
  REQUIRE(res.value);
  CHECK(res.value->size() == 2);
}

TEST_CASE("document round trip") {
  SECTION("running example") {
    SpecDocument doc = load_example1();
    auto again = parse_spec(print_spec(doc));
    REQUIRE(again.ok());
    CHECK(*again == doc);
  }
  SECTION("raw form and replacement maps") {
    SpecDocument doc =
        parse_spec("system t.\nfun g/2.\nfun 0/0.\npred p/1.\nmu g: {1, 2}.\n"
                   "clause p(g(X, 0)) :- p(X).")
            .expect();
    auto again = parse_spec(print_spec(doc));
    REQUIRE(again.ok());
    CHECK(*again == doc);

    SpecDocument raw = parse_spec(testing::slurp(testing::fixture_dir() + "/selfloop.eis")).expect();
    auto raw_again = parse_spec(print_spec(raw));
    REQUIRE(raw_again.ok());
    CHECK(*raw_again == raw);
  }
}

namespace {

// random positive-shape formulas built with the public constructors
Formula random_formula(testing::Rng& rng, testing::TermGen& gen, int depth) {
  auto atom = [&] {
    if (rng.chance(0.5))
      return Formula::atom(Atom(pred_symbol("geq", 2), {gen.term(rng, 2), gen.term(rng, 2)}));
    return Formula::atom(Atom(rew_symbol(), {gen.term(rng, 2), gen.term(rng, 2)}));
  };
  if (depth == 0) return atom();
  switch (rng.below(6)) {
    case 0: {
      std::vector<Formula> kids;
      int n = 2 + rng.below(2);
      for (int i = 0; i < n; ++i) kids.push_back(random_formula(rng, gen, depth - 1));
      return Formula::conj(std::move(kids));
    }
    case 1: {
      std::vector<Formula> kids;
      int n = 2 + rng.below(2);
      for (int i = 0; i < n; ++i) kids.push_back(random_formula(rng, gen, depth - 1));
      return Formula::disj(std::move(kids));
    }
    case 2:
      return Formula::negation(random_formula(rng, gen, depth - 1));
    case 3:
      return Formula::implies(random_formula(rng, gen, depth - 1),
                              random_formula(rng, gen, depth - 1));
    case 4:
      return Formula::forall(gen.vars[rng.below((int)gen.vars.size())],
                             random_formula(rng, gen, depth - 1));
    default:
      return Formula::exists(gen.vars[rng.below((int)gen.vars.size())],
                             random_formula(rng, gen, depth - 1));
  }
}

}  // namespace

TEST_CASE("formula print/parse round trip", "[property]") {
  SpecDocument doc = load_example1();
  doc.sig.add_function(fun_symbol("f", 2));
  testing::Rng rng(4242);
  testing::TermGen gen;
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, gen, 3);
    auto parsed = parse_formula(to_string(f), &doc.sig);
    REQUIRE(parsed.ok());
    CHECK(parsed.value->formula == f);
  }
}
