#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "projdyn/rng.hpp"
#include "projdyn/monomial.hpp"

namespace projdyn {

using Cplx = std::complex<double>;
/// Small dynamic matrices with stack storage (ambient dimension <= 3).
using SmallMat = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;
using SmallVec = Eigen::Matrix<Cplx, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;

/// Point of P^k as homogeneous coordinates scaled so the coordinate of
/// maximal modulus has modulus one. `chart` records that coordinate.
struct ProjPoint {
  int dim = 1;  // k
  std::array<Cplx, kMaxVars> c{};
  int chart = 0;

  int ncoords() const { return dim + 1; }
};

inline ProjPoint make_proj_point(int dim, std::span<const Cplx> v) {
  if (int(v.size()) != dim + 1) throw std::invalid_argument("coordinate count mismatch");
  int best = 0;
  double mx = 0;
  for (int i = 0; i <= dim; ++i) {
    const double a = std::abs(v[i]);
    if (a > mx) {
      mx = a;
      best = i;
    }
  }
  if (!(mx > 0)) throw std::invalid_argument("zero vector is not a projective point");
  ProjPoint p;
  p.dim = dim;
  p.chart = best;
  for (int i = 0; i <= dim; ++i) p.c[i] = v[i] / mx;
  return p;
}

/// Fubini-Study distance arccos(|<x,y>| / (|x| |y|)), in [0, pi/2].
/// Evaluated as atan2 of the wedge-product norm against the inner
/// product, which is exact near zero where the arccos form loses half
/// the significand.
inline double fs_distance(const ProjPoint& a, const ProjPoint& b) {
  Cplx dot = 0;
  double na = 0, nb = 0, wedge2 = 0;
  for (int i = 0; i <= a.dim; ++i) {
    dot += std::conj(a.c[i]) * b.c[i];
    na += std::norm(a.c[i]);
    nb += std::norm(b.c[i]);
  }
  for (int i = 0; i <= a.dim; ++i)
    for (int j = i + 1; j <= a.dim; ++j) wedge2 += std::norm(a.c[i] * b.c[j] - a.c[j] * b.c[i]);
  const double nn = std::sqrt(na * nb);
  return std::atan2(std::sqrt(wedge2) / nn, std::abs(dot) / nn);
}

/// Affine coordinates in the chart of the max-modulus coordinate:
/// w_i = x_i / x_chart for i != chart, all of modulus <= 1.
inline SmallVec chart_coords(const ProjPoint& p) {
  SmallVec w(p.dim);
  int j = 0;
  for (int i = 0; i <= p.dim; ++i) {
    if (i == p.chart) continue;
    w(j++) = p.c[i] / p.c[p.chart];
  }
  return w;
}

/// Fubini-Study metric matrix in an affine chart, up to a global constant
/// that cancels in every pencil this library solves:
///   G(w) = ((1+|w|^2) I - conj(w) w^T) / (1+|w|^2)^2.
inline SmallMat fs_metric(const SmallVec& w) {
  const int k = int(w.size());
  const double s = 1.0 + w.squaredNorm();
  SmallMat g(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      g(a, b) = (a == b ? Cplx(s) : Cplx(0)) - std::conj(w(a)) * w(b);
  return g / (s * s);
}

/// Draws a point distributed by the normalized Fubini-Study volume:
/// k+1 standard complex Gaussians, projectivized. Deterministic in
/// (seed, index); draw i never touches the state of draw j.
inline ProjPoint sample_fs(int dim, uint64_t seed, uint64_t index) {
  CounterRng rng{seed};
  std::array<Cplx, kMaxVars> v{};
  for (int i = 0; i <= dim; ++i) v[i] = rng.complex_normal(1, index * kMaxVars + i);
  return make_proj_point(dim, std::span<const Cplx>(v.data(), size_t(dim) + 1));
}

}  // namespace projdyn
