#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <vector>

#include "projdyn/polynomial.hpp"
#include "test_support.hpp"

using namespace projdyn;
using test_support::P1;
using test_support::P2;
using test_support::random_poly;

TEST_CASE("addition merges terms and cancels") {
  auto zero = P2("x^2") + (-P2("x^2"));
  CHECK(zero.is_zero());
  CHECK(zero.degree() == 2);

  CHECK(P2("x*y") + P2("x*y") == P2("2*x*y"));
  CHECK(P2("x^2 + y*z") + P2("y*z") == P2("x^2 + 2*y*z"));
}

TEST_CASE("addition rejects mismatched degrees") {
  CHECK_THROWS_AS(P2("x^2") + P2("x"), std::invalid_argument);
  // The zero polynomial is degree-compatible with everything.
  CHECK(HomPoly::zero(3, 5) + P2("x^2") == P2("x^2"));
}

TEST_CASE("multiplication") {
  CHECK(P2("x") * P2("y") == P2("x*y"));
  CHECK(P2("x + y") * P2("x - y") == P2("x^2 - y^2"));
  CHECK((P2("x + y + z") * P2("x + y + z")).term_count() == 6);
  CHECK((P2("x + y + z") * P2("x + y + z")).degree() == 2);
}

TEST_CASE("content and primitive part") {
  CHECK(P2("6*x^2 + 4*y^2").content() == 2);
  CHECK(P2("x*y").content() == 1);
  auto p = P2("0 - 3*x^2 - 9*y*z");
  CHECK(p.content() == 3);
  // Sign convention: the primitive part has a positive leading coefficient.
  CHECK(p.primitive_part() == P2("x^2 + 3*y*z"));
  CHECK_THROWS_AS(HomPoly::zero(3, 2).content(), std::invalid_argument);
}

TEST_CASE("evaluation at complex points") {
  using C = std::complex<double>;
  std::vector<C> ones = {C(1), C(1), C(1)};
  CHECK(P2("x*y*z").eval(ones) == C(1));

  std::vector<C> v110 = {C(1), C(1), C(0)};
  CHECK(P2("x^2 - y^2").eval(v110) == C(0));

  std::vector<C> v123 = {C(1), C(2), C(3)};
  auto sq = P2("x + y + z") * P2("x + y + z");
  CHECK(sq.eval(v123).real() == Catch::Approx(36.0));
}

TEST_CASE("partial derivatives") {
  CHECK(P2("x^2").partial_derivative(0) == P2("2*x"));
  CHECK(P2("y*z").partial_derivative(0).is_zero());
  CHECK(P2("x^2*y").partial_derivative(1) == P2("x^2"));
}

TEST_CASE("ring axioms on random inputs") {
  for (uint64_t s = 0; s < 24; ++s) {
    auto p = random_poly(3, 3, 5, 100 + s);
    auto q = random_poly(3, 3, 5, 200 + s);
    auto r = random_poly(3, 2, 4, 300 + s);
    CHECK(p + q == q + p);
    CHECK(p * q == q * p);
    CHECK(p * (q + q) == p * q + p * q);
    CHECK((p + q) * r == p * r + q * r);
  }
}

TEST_CASE("evaluation is multiplicative to 1e-10") {
  using C = std::complex<double>;
  CounterRng rng{77};
  for (uint64_t s = 0; s < 12; ++s) {
    auto p = random_poly(3, 4, 6, 400 + s);
    auto q = random_poly(3, 3, 6, 500 + s);
    std::vector<C> v(3);
    for (int i = 0; i < 3; ++i) v[i] = {rng.normal(s, 2 * i), rng.normal(s, 2 * i + 1)};
    const C lhs = (p * q).eval(v);
    const C rhs = p.eval(v) * q.eval(v);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("Euler identity for homogeneous polynomials") {
  using C = std::complex<double>;
  CounterRng rng{99};
  for (uint64_t s = 0; s < 12; ++s) {
    const int d = 2 + int(s % 4);
    auto p = random_poly(3, d, 6, 600 + s);
    std::vector<C> v(3);
    for (int i = 0; i < 3; ++i) v[i] = {rng.normal(s, 2 * i), rng.normal(s, 2 * i + 1)};
    C sum = 0;
    for (int i = 0; i < 3; ++i) sum += v[i] * p.partial_derivative(i).eval(v);
    const C expect = double(d) * p.eval(v);
    CHECK(std::abs(sum - expect) <= 1e-10 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("exact division") {
  auto p = P2("x^2 - y^2");
  auto d = divide_exact(p, P2("x + y"));
  REQUIRE(d.has_value());
  CHECK(*d == P2("x - y"));
  CHECK_FALSE(divide_exact(p, P2("x + 2*y")).has_value());
  CHECK_FALSE(divide_exact(P2("2*x^2"), P2("x + y")).has_value());
  // Scalar divisibility matters too.
  CHECK_FALSE(divide_exact(P2("3*x^2"), P2("2*x")).has_value());
  CHECK(*divide_exact(P2("4*x^2"), P2("2*x")) == P2("2*x"));
}

TEST_CASE("substitution composes polynomials") {
  // f(u, v) = u^2 - v^2 at (x+y, x-y) gives 4xy.
  auto f = P1("x^2 - y^2");
  std::vector<HomPoly> args = {P2("x + y"), P2("x - y")};
  CHECK(substitute(f, args) == P2("4*x*y"));

  // Substituting into a monomial respects powers.
  auto g = P1("x*y");
  std::vector<HomPoly> args2 = {P2("x^2"), P2("y^2")};
  CHECK(substitute(g, args2) == P2("x^2*y^2"));
}

TEST_CASE("substitution respects term budget") {
  std::vector<HomPoly> args = {P2("x + y"), P2("y + z"), P2("z + x")};
  auto f = random_poly(3, 8, 30, 7);
  CHECK_THROWS_AS(substitute(f, args, 3), BudgetError);
}
