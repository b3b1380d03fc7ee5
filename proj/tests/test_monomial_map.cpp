#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "projdyn/monomial_map.hpp"
#include "test_support.hpp"

using namespace projdyn;
using test_support::P2;

namespace {
const double kGolden2 = (3.0 + std::sqrt(5.0)) / 2.0;  // spectral radius of [[2,1],[1,1]]
}

TEST_CASE("homogenization") {
  auto m = MonomialMap::from_matrix({{2, 1}, {1, 1}});
  auto f = m.homogenize();
  CHECK(f == RationalMap::from_components({P2("x^2*y"), P2("x*y*z"), P2("z^3")}));

  auto id = MonomialMap::from_matrix({{1, 0}, {0, 1}});
  CHECK(id.homogenize().is_identity());

  auto d2 = MonomialMap::from_matrix({{2, 0}, {0, 2}});
  CHECK(d2.homogenize() == RationalMap::from_components({P2("x^2"), P2("y^2"), P2("z^2")}));

  // Negative exponents are cleared by the minimal monomial multiplier:
  // u -> (u v, u / v) becomes (x y z : x z^2 : y z^2) reduced... degree check only.
  auto neg = MonomialMap::from_matrix({{1, 1}, {1, -1}});
  auto g = neg.homogenize();
  CHECK(g.degree() == 2);
  for (const auto& c : g.components()) CHECK(c.is_monomial());
}

TEST_CASE("exact dynamical degrees") {
  auto m = MonomialMap::from_matrix({{2, 1}, {1, 1}});
  auto lam = m.exact_dynamical_degrees();
  CHECK(lam[0] == Catch::Approx(kGolden2).epsilon(1e-9));
  CHECK(lam[1] == Catch::Approx(1.0).epsilon(1e-12));

  auto d2 = MonomialMap::from_matrix({{2, 0}, {0, 2}});
  auto lam2 = d2.exact_dynamical_degrees();
  CHECK(lam2[0] == Catch::Approx(2.0));
  CHECK(lam2[1] == Catch::Approx(4.0));

  auto id = MonomialMap::from_matrix({{1, 0}, {0, 1}});
  auto lam3 = id.exact_dynamical_degrees();
  CHECK(lam3[0] == Catch::Approx(1.0));
  CHECK(lam3[1] == Catch::Approx(1.0));

  CHECK_THROWS_AS(MonomialMap::from_matrix({{1, 1}, {1, 1}}), std::invalid_argument);
}

TEST_CASE("exact entropy") {
  CHECK(MonomialMap::from_matrix({{2, 1}, {1, 1}}).exact_entropy() ==
        Catch::Approx(std::log(kGolden2)).epsilon(1e-9));
  CHECK(MonomialMap::from_matrix({{2, 0}, {0, 2}}).exact_entropy() == Catch::Approx(std::log(4.0)));
  CHECK(MonomialMap::from_matrix({{1, 0}, {0, 1}}).exact_entropy() == 0.0);
}

TEST_CASE("entropy equals the top dynamical degree") {
  const std::vector<std::vector<std::vector<long>>> mats = {
      {{2, 1}, {1, 1}}, {{2, 0}, {0, 2}}, {{3, -1}, {1, 1}}, {{1, 2}, {2, 1}},
      {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}, {{2, 0, 0}, {0, 1, 1}, {0, 1, -1}}};
  for (const auto& m : mats) {
    auto mm = MonomialMap::from_matrix(m);
    const auto lam = mm.exact_dynamical_degrees();
    double mx = 0;
    for (double l : lam) mx = std::max(mx, std::log(l));
    CHECK(mx == Catch::Approx(mm.exact_entropy()).margin(1e-9));
  }
}

TEST_CASE("powers scale dynamical degrees exactly") {
  auto m = MonomialMap::from_matrix({{2, 1}, {1, 1}});
  auto m3 = m * m * m;
  const auto l1 = m.exact_dynamical_degrees();
  const auto l3 = m3.exact_dynamical_degrees();
  CHECK(l3[0] == Catch::Approx(std::pow(l1[0], 3)).epsilon(1e-9));
  CHECK(l3[1] == Catch::Approx(std::pow(l1[1], 3)).epsilon(1e-9));
}

TEST_CASE("homogenization is functorial") {
  const std::vector<std::vector<std::vector<long>>> pairs = {
      {{2, 1}, {1, 1}}, {{1, 1}, {0, 1}}, {{2, 0}, {0, 2}}, {{1, 1}, {1, -1}}};
  for (size_t i = 0; i < pairs.size(); ++i)
    for (size_t j = 0; j < pairs.size(); ++j) {
      auto A = MonomialMap::from_matrix(pairs[i]);
      auto B = MonomialMap::from_matrix(pairs[j]);
      CHECK((A * B).homogenize() == compose(A.homogenize(), B.homogenize()));
    }
}

TEST_CASE("degree growth of the homogenized map tracks lambda_1") {
  auto m = MonomialMap::from_matrix({{2, 1}, {1, 1}});
  IterateBudget budget;
  budget.max_degree = 20000;
  auto s = degree_sequence(m.homogenize(), 10, budget);
  REQUIRE(!s.truncated);
  const double ratio = double(s.values[10]) / double(s.values[9]);
  CHECK(std::abs(ratio - kGolden2) / kGolden2 < 0.05);
  const double root = std::pow(double(s.values[10]), 0.1);
  CHECK(std::abs(root - kGolden2) / kGolden2 < 0.05);
}
