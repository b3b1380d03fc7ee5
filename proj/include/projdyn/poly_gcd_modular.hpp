#pragma once

// Z/p primitives behind the modular gcd of homogeneous polynomials:
// dense dehomogenized images, Brown-style evaluation/interpolation gcd,
// and a symmetric-remainder CRT accumulator. The over-Z orchestration
// (content handling, rehomogenization, division certification) lives
// next to the recursive gcd in poly_gcd.hpp.

#include <map>
#include <optional>
#include <vector>

#include "projdyn/polynomial.hpp"

namespace projdyn::detail {

inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

inline const std::vector<uint64_t>& gcd_primes() {
  static const std::vector<uint64_t> primes = [] {
    std::vector<uint64_t> ps;
    uint64_t n = (uint64_t(1) << 62) - 1;
    while (ps.size() < 12) {
      if (is_prime_u64(n)) ps.push_back(n);
      n -= 2;
    }
    return ps;
  }();
  return primes;
}

inline uint64_t eval_poly_mod(const std::vector<uint64_t>& a, uint64_t x, uint64_t p) {
  uint64_t v = 0;
  for (size_t i = a.size(); i-- > 0;) v = (mulmod(v, x, p) + a[i]) % p;
  return v;
}

/// Variable roles for dehomogenization: `main` is the Euclid variable,
/// `second` the interpolation variable (3 active vars only), `homog` is
/// set to 1.
struct VarRoles {
  int main = 0;
  int second = 1;
  int homog = 2;
  int actives = 3;
};

/// Dense image mod p of a homogeneous polynomial, dehomogenized at
/// roles.homog = 1: c[i][j] = coefficient of main^i second^j. Returns
/// nullopt when the polynomial vanishes mod p.
inline std::optional<std::vector<std::vector<uint64_t>>> dense_image_mod(const HomPoly& f,
                                                                         const VarRoles& roles,
                                                                         uint64_t p) {
  const int dx = f.degree_in(roles.main);
  const int dy = roles.actives >= 3 ? f.degree_in(roles.second) : 0;
  std::vector<std::vector<uint64_t>> c(size_t(dx) + 1, std::vector<uint64_t>(size_t(dy) + 1, 0));
  bool nonzero = false;
  for (const auto& [m, co] : f.terms()) {
    const uint64_t v = reduce_bigint_mod(co, p);
    if (v == 0) continue;
    nonzero = true;
    const int j = roles.actives >= 3 ? m.e[roles.second] : 0;
    c[m.e[roles.main]][size_t(j)] = (c[m.e[roles.main]][size_t(j)] + v) % p;
  }
  if (!nonzero) return std::nullopt;
  return c;
}

struct ModGcdResult {
  std::map<std::pair<int, int>, uint64_t> coeff;  // (main exp, second exp)
  int main_degree = 0;
};

/// Brown's evaluation/interpolation gcd mod p. Inputs are the dense
/// images of polynomials that are primitive w.r.t. the main variable
/// over Z; `gamma` is the image of the integer-side gcd of their leading
/// coefficients, which fixes a prime-independent scaling of the result
/// (the image of (gamma / lc(G)) * G). Unlucky evaluation points can
/// only raise the univariate gcd degree, so the minimal degree wins.
inline std::optional<ModGcdResult> modular_gcd_image(const std::vector<std::vector<uint64_t>>& a,
                                                     const std::vector<std::vector<uint64_t>>& b,
                                                     const std::vector<uint64_t>& gamma,
                                                     uint64_t p) {
  auto top_row = [&](const std::vector<std::vector<uint64_t>>& m) -> int {
    for (int i = int(m.size()) - 1; i >= 0; --i) {
      auto r = m[size_t(i)];
      trim_mod(r);
      if (!r.empty()) return i;
    }
    return -1;
  };
  const int dxa = top_row(a), dxb = top_row(b);
  if (dxa < 0 || dxb < 0) return std::nullopt;
  std::vector<uint64_t> lca = a[size_t(dxa)], lcb = b[size_t(dxb)];
  trim_mod(lca);
  trim_mod(lcb);
  if (lca.empty() || lcb.empty()) return std::nullopt;

  const int dy_a = int(a[0].size()) - 1;
  const int dy_b = int(b[0].size()) - 1;
  const int points_needed = int(gamma.size()) - 1 + std::min(dy_a, dy_b) + 1;

  std::vector<uint64_t> ys;
  std::vector<std::vector<uint64_t>> gs;
  int dmin = INT32_MAX;
  for (uint64_t y0 = 0; int(ys.size()) < points_needed; ++y0) {
    if (y0 > uint64_t(8 * points_needed + 64)) return std::nullopt;
    if (eval_poly_mod(lca, y0, p) == 0 || eval_poly_mod(lcb, y0, p) == 0) continue;
    auto eval_at = [&](const std::vector<std::vector<uint64_t>>& m, int dx) {
      std::vector<uint64_t> u(size_t(dx) + 1, 0);
      for (int i = 0; i <= dx; ++i) u[size_t(i)] = eval_poly_mod(m[size_t(i)], y0, p);
      return u;
    };
    auto g0 = gcd_mod(eval_at(a, dxa), eval_at(b, dxb), p);
    const int d0 = int(g0.size()) - 1;
    if (d0 == 0) {
      ModGcdResult r;
      r.coeff[{0, 0}] = 1;
      r.main_degree = 0;
      return r;
    }
    if (d0 < dmin) {
      dmin = d0;
      ys.clear();
      gs.clear();
    }
    if (d0 > dmin) continue;
    // Normalize to gamma(y0) * monic.
    const uint64_t inv_lead = invmod(g0.back(), p);
    const uint64_t scale = mulmod(eval_poly_mod(gamma, y0, p), inv_lead, p);
    for (auto& c : g0) c = mulmod(c, scale, p);
    ys.push_back(y0);
    gs.push_back(std::move(g0));
  }

  // Newton interpolation of each main-variable coefficient over the
  // surviving points. Points are small ascending integers, so the
  // divided-difference denominators come from a small inverse table.
  const size_t n = ys.size();
  uint64_t max_diff = 1;
  for (size_t j = 1; j < n; ++j) max_diff = std::max(max_diff, ys[j] - ys[0]);
  std::vector<uint64_t> inv_diff(max_diff + 1, 0);
  for (uint64_t d = 1; d <= max_diff; ++d) inv_diff[d] = invmod(d % p, p);

  ModGcdResult result;
  result.main_degree = dmin;
  std::vector<uint64_t> dd(n), coeffs;
  for (int i = 0; i <= dmin; ++i) {
    for (size_t j = 0; j < n; ++j) dd[j] = i < int(gs[j].size()) ? gs[j][size_t(i)] : 0;
    for (size_t k = 1; k < n; ++k)
      for (size_t j = n - 1; j >= k; --j) {
        dd[j] = mulmod((dd[j] + p - dd[j - 1]) % p, inv_diff[ys[j] - ys[j - k]], p);
        if (j == k) break;
      }
    coeffs.assign(1, dd[n - 1]);
    for (size_t j = n - 1; j-- > 0;) {
      coeffs.insert(coeffs.begin(), 0);
      const uint64_t neg = (p - ys[j] % p) % p;
      for (size_t t = 0; t + 1 < coeffs.size(); ++t)
        coeffs[t] = (coeffs[t] + mulmod(coeffs[t + 1], neg, p)) % p;
      coeffs[0] = (coeffs[0] + dd[j]) % p;
    }
    for (size_t t = 0; t < coeffs.size(); ++t)
      if (coeffs[t] != 0) result.coeff[{i, int(t)}] = coeffs[t];
  }
  return result;
}

/// Symmetric-remainder CRT accumulator over sparse exponent keys.
struct CrtPoly {
  std::map<std::pair<int, int>, BigInt> coeff;
  BigInt modulus = 1;
  bool stable = false;

  void add_prime(const std::map<std::pair<int, int>, uint64_t>& image, uint64_t p) {
    const BigInt bigp(p);
    std::map<std::pair<int, int>, BigInt> next;
    bool unchanged = modulus > 1;
    const uint64_t minv = invmod(reduce_bigint_mod(modulus, p), p);
    auto lift_one = [&](const BigInt& cur, uint64_t v) {
      const uint64_t cur_mod = reduce_bigint_mod(cur, p);
      const uint64_t delta = (v + p - cur_mod) % p;
      BigInt t(mulmod(delta, minv, p));
      if (t > bigp / 2) t -= bigp;
      BigInt out = cur + modulus * t;
      if (out != cur) unchanged = false;
      return out;
    };
    for (const auto& [key, v] : image) {
      auto it = coeff.find(key);
      next[key] = lift_one(it == coeff.end() ? BigInt(0) : it->second, v);
    }
    for (const auto& [key, cur] : coeff)
      if (!image.count(key)) next[key] = lift_one(cur, 0);
    for (auto it = next.begin(); it != next.end();) {
      if (it->second == 0)
        it = next.erase(it);
      else
        ++it;
    }
    coeff = std::move(next);
    modulus *= bigp;
    stable = unchanged;
  }
};

}  // namespace projdyn::detail
