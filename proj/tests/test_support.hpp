#pragma once

#include <string>
#include <vector>

#include "projdyn/poly_parser.hpp"
#include "projdyn/polynomial.hpp"
#include "projdyn/rng.hpp"

namespace test_support {

inline const std::vector<std::string> kXYZ = {"x", "y", "z"};
inline const std::vector<std::string> kXY = {"x", "y"};
inline const std::vector<std::string> kXYZW = {"x", "y", "z", "w"};

inline projdyn::HomPoly P2(const std::string& text) {
  return projdyn::parse_homogeneous(text, test_support::kXYZ);
}
inline projdyn::HomPoly P1(const std::string& text) {
  return projdyn::parse_homogeneous(text, test_support::kXY);
}
inline projdyn::HomPoly P3(const std::string& text) {
  return projdyn::parse_homogeneous(text, test_support::kXYZW);
}

/// Random nonzero homogeneous polynomial with small integer coefficients.
inline projdyn::HomPoly random_poly(int nvars, int degree, int want_terms, uint64_t seed) {
  projdyn::CounterRng rng{seed};
  std::vector<projdyn::HomPoly::Term> terms;
  for (int t = 0; t < want_terms; ++t) {
    projdyn::Monomial m;
    int left = degree;
    for (int v = 0; v + 1 < nvars; ++v) {
      const int e = int(rng.below(10 + t, v, uint64_t(left) + 1));
      m.e[v] = uint16_t(e);
      left -= e;
    }
    m.e[nvars - 1] = uint16_t(left);
    const int64_t c = int64_t(rng.below(20 + t, 0, 19)) - 9;
    if (c != 0) terms.emplace_back(m, c);
  }
  auto p = projdyn::HomPoly::from_terms(nvars, std::move(terms));
  if (p.is_zero()) {
    projdyn::Monomial m;
    m.e[0] = uint16_t(degree);
    p = projdyn::HomPoly::term(nvars, m, 1);
  }
  return p;
}

}  // namespace test_support
