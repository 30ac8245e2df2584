#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace eiskit;
using testing::num;
using testing::Rng;
using testing::TermGen;

namespace {

Term s(Term t) { return Term::app(fun_symbol("s", 1), {std::move(t)}); }
Term var(const std::string& v) { return Term::var(v); }
Term gc(const std::string& v) { return Term::app(grounded_symbol(v)); }

}  // namespace

TEST_CASE("substitution application") {
  Substitution sub;
  sub.bind("x", s(num(0)));

  SECTION("textual replacement") {
    CHECK(apply(sub, s(s(var("x")))) == s(s(s(num(0)))));
  }
  SECTION("identity") {
    Term t = s(s(var("y")));
    CHECK(apply(Substitution{}, t) == t);
  }
  SECTION("per-argument replacement in atoms") {
    Atom a(pred_symbol("geq", 2), {var("x"), num(0)});
    CHECK(apply(sub, a) == Atom(pred_symbol("geq", 2), {s(num(0)), num(0)}));
  }
}

TEST_CASE("matching") {
  SECTION("structural match") {
    auto m = match(s(s(var("x"))), s(s(s(num(0)))));
    REQUIRE(m);
    CHECK(*m->lookup("x") == s(num(0)));
  }
  SECTION("head clash") {
    CHECK_FALSE(match(s(var("x")), num(0)));
  }
  SECTION("grounded subject stays matchable") {
    auto m = match(s(s(var("x"))), s(s(gc("x"))));
    REQUIRE(m);
    CHECK(*m->lookup("x") == gc("x"));
    CHECK(apply(*m, s(s(var("x")))) == s(s(gc("x"))));  // oracle: structural equality
  }
  SECTION("subject variables are rigid") {
    CHECK_FALSE(match(num(0), var("x")));
    auto m = match(var("p"), var("x"));  // pattern var binds to the subject var
    REQUIRE(m);
    CHECK(*m->lookup("p") == var("x"));
  }
  SECTION("inconsistent repeated variable") {
    Atom pat(pred_symbol("p", 2), {var("x"), var("x")});
    Atom sub(pred_symbol("p", 2), {num(0), num(1)});
    CHECK_FALSE(match(pat, sub));
  }
}

TEST_CASE("unification") {
  SECTION("rewrite-rule head against a grounded goal") {
    Atom a(rew_symbol(), {s(s(var("x"))), var("x")});
    Atom b(rew_symbol(), {s(s(s(gc("x")))), var("z")});
    auto mgu = unify(a, b);
    REQUIRE(mgu);
    CHECK(*mgu->lookup("x") == s(gc("x")));
    CHECK(*mgu->lookup("z") == s(gc("x")));
    CHECK(apply(*mgu, a) == apply(*mgu, b));
  }
  SECTION("occur check") {
    Atom a(pred_symbol("p", 1), {var("x")});
    Atom b(pred_symbol("p", 1), {Term::app(fun_symbol("f", 2), {var("x"), num(0)})});
    CHECK_FALSE(unify(a, b));
  }
  SECTION("variable aliasing") {
    Atom a(pred_symbol("p", 2), {var("x"), var("y")});
    Atom b(pred_symbol("p", 2), {var("y"), var("x")});
    auto mgu = unify(a, b);
    REQUIRE(mgu);
    CHECK(apply(*mgu, a) == apply(*mgu, b));
    CHECK(mgu->size() == 1);
  }
}

TEST_CASE("grounding maps") {
  SECTION("variables become dedicated constants") {
    CHECK(ground_down(s(s(var("x")))) == s(s(gc("x"))));
  }
  SECTION("ground terms unchanged") {
    CHECK(ground_down(num(3)) == num(3));
  }
  SECTION("substitutions ground pointwise") {
    Substitution sub;
    sub.bind("x", s(var("y")));
    CHECK(*ground_down(sub).lookup("x") == s(gc("y")));
  }
  SECTION("ungrounding restores variables") {
    CHECK(ground_up(s(s(gc("x")))) == s(s(var("x"))));
    CHECK(ground_up(num(0)) == num(0));
  }
  SECTION("grounded constants are not user constants") {
    Term user_x = Term::app(fun_symbol("x", 0));
    CHECK_FALSE(user_x == gc("x"));
    CHECK(ground_up(user_x) == user_x);
  }
}

TEST_CASE("round trips", "[property]") {
  TermGen gen;
  Rng rng(20240811);
  for (int i = 0; i < 300; ++i) {
    Term t = gen.term(rng);
    CHECK(ground_up(ground_down(t)) == t);
    Term grounded = ground_down(t);
    CHECK(ground_down(ground_up(grounded)) == grounded);
  }
}

TEST_CASE("matching commutes with grounding the subject", "[property]") {
  TermGen gen;
  Rng rng(7);
  int positives = 0;
  for (int i = 0; i < 300; ++i) {
    Term p = gen.term(rng);
    Term t = rng.chance(0.6) ? apply(gen.subst(rng, 2, true), p) : gen.term(rng);
    auto direct = match(p, t);
    auto grounded = match(p, ground_down(t));
    CHECK(direct.has_value() == grounded.has_value());
    if (direct) {
      ++positives;
      CHECK(ground_down(*direct) == *grounded);
    }
  }
  CHECK(positives > 50);  // the suite exercises the positive side
}

TEST_CASE("unify soundness and generality", "[property]") {
  TermGen gen;
  gen.vars = {"X", "Y"};
  Rng rng(99);
  // small pool for the brute-force generality oracle
  std::vector<Term> pool;
  pool.push_back(num(0));
  pool.push_back(num(1));
  pool.push_back(s(num(1)));
  pool.push_back(var("X"));
  pool.push_back(var("Y"));

  int unified = 0;
  for (int i = 0; i < 300; ++i) {
    Term a = gen.term(rng, 2);
    Term b = gen.term(rng, 2);
    auto mgu = unify(a, b);
    if (!mgu) continue;
    ++unified;
    CHECK(apply(*mgu, a) == apply(*mgu, b));
    // every common instance over the pool must be an instance of the mgu image
    for (const Term& tx : pool) {
      for (const Term& ty : pool) {
        Substitution theta;
        theta.bind("X", tx);
        theta.bind("Y", ty);
        if (!(apply(theta, a) == apply(theta, b))) continue;
        CHECK(match(apply(*mgu, a), apply(theta, a)).has_value());
      }
    }
  }
  CHECK(unified > 50);
}

TEST_CASE("composition law", "[property]") {
  TermGen gen;
  Rng rng(1234);
  for (int i = 0; i < 300; ++i) {
    Term t = gen.term(rng);
    Substitution s1 = gen.subst(rng, 2, true);
    Substitution s2 = gen.subst(rng, 2, true);
    CHECK(apply(s2, apply(s1, t)) == apply(compose(s2, s1), t));
  }
}

TEST_CASE("arity is enforced") {
  CHECK_THROWS_AS(Term::app(fun_symbol("s", 1), {}), EisError);
  CHECK_THROWS_AS(Atom(pred_symbol("geq", 2), {num(0)}), EisError);
  CHECK_THROWS_AS(Term::app(pred_symbol("odd", 1), {num(0)}), EisError);
}

TEST_CASE("term printing") {
  CHECK(to_string(s(s(gc("x")))) == "s(s(%x))");
  CHECK(to_string(Atom(rews_symbol(), {var("X"), num(0)})) == "X ->* 0");
  CHECK(to_string(Atom(pred_symbol("geq", 2), {var("X"), num(0)})) == "geq(X, 0)");
}
