#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "projdyn/rational_map.hpp"

namespace projdyn {

/// Maps whose components are monomials, encoded by the k x k integer
/// matrix acting on torus exponents: u |-> u^A. Every dynamical invariant
/// is computable from the eigenvalues of A, which makes these the test
/// oracle for the numeric machinery.
struct MonomialMap {
  int dim = 2;                        // k
  std::array<std::array<long, 3>, 3> a{};  // top-left k x k block used

  static MonomialMap from_matrix(const std::vector<std::vector<long>>& m) {
    MonomialMap mm;
    mm.dim = int(m.size());
    if (mm.dim < 1 || mm.dim > 3) throw std::invalid_argument("monomial matrix must be k x k, k in 1..3");
    for (int i = 0; i < mm.dim; ++i) {
      if (int(m[i].size()) != mm.dim) throw std::invalid_argument("monomial matrix must be square");
      for (int j = 0; j < mm.dim; ++j) mm.a[i][j] = m[i][j];
    }
    if (mm.determinant() == 0) throw std::invalid_argument("monomial matrix must be nonsingular");
    return mm;
  }

  long determinant() const {
    if (dim == 1) return a[0][0];
    if (dim == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  }

  MonomialMap operator*(const MonomialMap& o) const {
    if (dim != o.dim) throw std::invalid_argument("monomial matrix dimension mismatch");
    MonomialMap r;
    r.dim = dim;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        long s = 0;
        for (int l = 0; l < dim; ++l) s += a[i][l] * o.a[l][j];
        r.a[i][j] = s;
      }
    return r;
  }

  /// Eigenvalue moduli of A, descending.
  std::vector<double> eigen_moduli() const {
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = double(a[i][j]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    std::vector<double> mod(dim);
    for (int i = 0; i < dim; ++i) mod[i] = std::abs(es.eigenvalues()(i));
    std::sort(mod.rbegin(), mod.rend());
    return mod;
  }

  /// lambda_l = product of the l largest eigenvalue moduli; lambda_k is
  /// pinned to |det A| exactly.
  std::vector<double> exact_dynamical_degrees() const {
    const auto mod = eigen_moduli();
    std::vector<double> lambda(dim);
    double p = 1;
    for (int l = 0; l < dim; ++l) {
      p *= mod[l];
      lambda[l] = p;
    }
    lambda[dim - 1] = std::abs(double(determinant()));
    return lambda;
  }

  /// Entropy of the torus action: sum of log^+ of the eigenvalue moduli,
  /// which equals max_l log lambda_l.
  double exact_entropy() const {
    double h = 0;
    for (double m : eigen_moduli())
      if (m > 1) h += std::log(m);
    return h;
  }

  /// The reduced self-map of P^k restricting to u |-> u^A on the torus
  /// u_i = x_i / x_last: exponents are shifted by the minimal clearing
  /// monomial, homogenized with the last coordinate, then reduced.
  RationalMap homogenize() const {
    const int k = dim;
    // Torus components u^row plus the constant 1 for the last coordinate.
    std::array<long, 3> shift{};
    for (int j = 0; j < k; ++j) {
      long mn = 0;
      for (int i = 0; i < k; ++i) mn = std::min(mn, a[i][j]);
      shift[j] = -mn;
    }
    std::vector<std::array<long, 4>> exps(size_t(k) + 1);
    long dmax = 0;
    for (int i = 0; i <= k; ++i) {
      long d = 0;
      for (int j = 0; j < k; ++j) {
        const long e = (i < k ? a[i][j] : 0) + shift[j];
        exps[i][j] = e;
        d += e;
      }
      exps[i][3] = 0;
      dmax = std::max(dmax, d);
    }
    std::vector<HomPoly> comps;
    for (int i = 0; i <= k; ++i) {
      Monomial m;
      long d = 0;
      for (int j = 0; j < k; ++j) {
        if (exps[i][j] > 60000) throw std::invalid_argument("monomial matrix entries too large");
        m.e[j] = uint16_t(exps[i][j]);
        d += exps[i][j];
      }
      m.e[k] = uint16_t(dmax - d);  // homogenizing coordinate is last
      comps.push_back(HomPoly::term(k + 1, m, 1));
    }
    return RationalMap::from_components(std::move(comps));
  }
};

}  // namespace projdyn
