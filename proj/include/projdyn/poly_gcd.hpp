#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "projdyn/poly_gcd_modular.hpp"
#include "projdyn/polynomial.hpp"
#include "projdyn/rng.hpp"

namespace projdyn {

namespace detail {

inline constexpr uint64_t kLinePrime = (uint64_t(1) << 61) - 1;  // Mersenne prime 2^61-1

inline uint64_t invmod(uint64_t a, uint64_t p) { return powmod(a, p - 2, p); }

/// Univariate polynomials over Z/p as ascending coefficient vectors.
inline void trim_mod(std::vector<uint64_t>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<uint64_t> gcd_mod(std::vector<uint64_t> a, std::vector<uint64_t> b, uint64_t p) {
  trim_mod(a);
  trim_mod(b);
  while (!b.empty()) {
    // a mod b
    const uint64_t inv_lb = invmod(b.back(), p);
    while (a.size() >= b.size()) {
      const uint64_t q = mulmod(a.back(), inv_lb, p);
      if (q != 0) {
        const size_t off = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) {
          const uint64_t s = mulmod(q, b[i], p);
          a[off + i] = (a[off + i] + p - s) % p;
        }
      }
      a.pop_back();
      trim_mod(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  trim_mod(a);
  return a;
}

/// Newton interpolation through (j, values[j]), j = 0..d; returns ascending
/// monomial-basis coefficients mod p.
inline std::vector<uint64_t> interpolate_mod(std::span<const uint64_t> values, uint64_t p) {
  const size_t n = values.size();
  std::vector<uint64_t> dd(values.begin(), values.end());
  std::vector<uint64_t> inv(n, 0);
  for (size_t i = 1; i < n; ++i) inv[i] = invmod(i % p, p);
  // Divided differences in place: dd[j] = f[x_{j-k}..x_j] after pass k.
  for (size_t k = 1; k < n; ++k)
    for (size_t j = n - 1; j >= k; --j) {
      dd[j] = mulmod((dd[j] + p - dd[j - 1]) % p, inv[k], p);
      if (j == k) break;
    }
  // Expand the Newton form ((..(dd_d (x-x_{d-1}) + dd_{d-1})..)).
  std::vector<uint64_t> coeff{dd.empty() ? 0 : dd.back()};
  for (size_t j = n - 1; j-- > 0;) {
    coeff.insert(coeff.begin(), 0);
    const uint64_t xj = j % p;
    for (size_t i = 0; i + 1 < coeff.size(); ++i) {
      const uint64_t s = mulmod(coeff[i + 1], xj, p);
      coeff[i] = (coeff[i] + p - s) % p;
    }
    coeff[0] = (coeff[0] + dd[j]) % p;
  }
  trim_mod(coeff);
  return coeff;
}

/// Restriction of a homogeneous polynomial to the projective line
/// s*a + t*b over Z/p, dehomogenized at s = 1, as coefficients in t.
/// Returns nullopt when the restriction degenerates (vanishes or drops
/// degree), which only happens on unlucky lines.
inline std::optional<std::vector<uint64_t>> restrict_to_line(const HomPoly& f,
                                                             std::span<const uint64_t> a,
                                                             std::span<const uint64_t> b) {
  const uint64_t p = kLinePrime;
  const int d = f.degree();
  std::vector<uint64_t> values(size_t(d) + 1);
  std::vector<uint64_t> point(size_t(f.nvars()));
  for (int j = 0; j <= d; ++j) {
    for (int i = 0; i < f.nvars(); ++i) point[i] = (a[i] + mulmod(uint64_t(j), b[i], p)) % p;
    values[j] = f.eval_mod(point, p);
  }
  auto coeff = interpolate_mod(values, p);
  if (int(coeff.size()) != d + 1) return std::nullopt;  // degree dropped mod p
  return coeff;
}

}  // namespace detail

/// Degree of the gcd of the restrictions of `polys` to a random projective
/// line over Z/p. Because all inputs are homogeneous, a common factor G
/// restricts to a common factor of full degree deg(G) whenever every
/// restriction keeps its degree, so a constant restricted gcd certifies
/// that the inputs are coprime. Returns nullopt on a degenerate line.
inline std::optional<int> line_gcd_degree(std::span<const HomPoly> polys, uint64_t salt) {
  const uint64_t p = detail::kLinePrime;
  CounterRng rng{0x9d2c5680cafe0000ULL + salt};
  const int nv = polys.empty() ? 1 : polys[0].nvars();
  std::vector<uint64_t> a(nv), b(nv);
  for (int i = 0; i < nv; ++i) {
    a[i] = 1 + rng.below(1, i, p - 1);
    b[i] = 1 + rng.below(2, i, p - 1);
  }
  std::vector<uint64_t> g;
  bool first = true;
  for (const auto& f : polys) {
    if (f.is_zero()) continue;
    auto r = detail::restrict_to_line(f, a, b);
    if (!r) return std::nullopt;
    g = first ? *r : detail::gcd_mod(std::move(g), std::move(*r), p);
    first = false;
    if (!first && g.size() == 1) break;  // already constant
  }
  if (first) return std::nullopt;
  if (g.empty()) return std::nullopt;
  return int(g.size()) - 1;
}

inline bool certified_coprime(std::span<const HomPoly> polys, int attempts = 3) {
  for (int s = 0; s < attempts; ++s) {
    auto d = line_gcd_degree(polys, uint64_t(s));
    if (d && *d == 0) return true;
    if (d) return false;  // non-degenerate line with a nontrivial common factor bound
  }
  return false;
}

namespace detail {

inline int degree_in_var(const HomPoly& p, int var) { return p.degree_in(var); }

/// Leading coefficient of p viewed as univariate in `var` (the var-free
/// homogeneous polynomial multiplying x_var^{deg_var}).
inline HomPoly leading_coeff_in(const HomPoly& p, int var) {
  const int d = degree_in_var(p, var);
  std::vector<HomPoly::Term> terms;
  for (const auto& [m, c] : p.terms())
    if (m.e[var] == d) {
      Monomial mm = m;
      mm.e[var] = 0;
      terms.emplace_back(mm, c);
    }
  return HomPoly::from_terms(p.nvars(), std::move(terms));
}

inline HomPoly gcd_impl(const HomPoly& a, const HomPoly& b);

/// Coefficient polynomials of p viewed as univariate in `var`, keyed by
/// the exponent of var (exponent stripped from the terms).
inline std::vector<std::pair<int, HomPoly>> coefficients_in(const HomPoly& p, int var) {
  std::map<int, std::vector<HomPoly::Term>> groups;
  for (const auto& [m, c] : p.terms()) {
    Monomial mm = m;
    mm.e[var] = 0;
    groups[m.e[var]].emplace_back(mm, c);
  }
  std::vector<std::pair<int, HomPoly>> out;
  out.reserve(groups.size());
  for (auto& [e, terms] : groups)
    out.emplace_back(e, HomPoly::from_terms(p.nvars(), std::move(terms)));
  return out;
}

/// gcd of the coefficient polynomials of p in `var` (the content of p as
/// a univariate polynomial over the remaining variables).
inline HomPoly content_in(const HomPoly& p, int var) {
  HomPoly g;
  bool first = true;
  for (auto& [e, coeff] : coefficients_in(p, var)) {
    g = first ? coeff.primitive_part() : gcd_impl(g, coeff);
    first = false;
    if (!g.is_zero() && g.degree() == 0) break;
  }
  return g;
}

inline std::optional<HomPoly> modular_route(const HomPoly& a, const HomPoly& b);

/// One pseudo-remainder step chain: reduces u modulo v in `var`. The
/// result differs from the true remainder by a power of lc(v), which the
/// primitive reduction of the caller removes anyway.
inline HomPoly pseudo_remainder(HomPoly u, const HomPoly& v, int var) {
  const int dv = degree_in_var(v, var);
  const HomPoly lv = leading_coeff_in(v, var);
  int du = degree_in_var(u, var);
  while (!u.is_zero() && du >= dv) {
    const HomPoly lu = leading_coeff_in(u, var);
    Monomial shift;
    shift.e[var] = uint16_t(du - dv);
    u = u * lv - v.scaled_by_term({shift, BigInt(1)}) * lu;
    const int dnew = u.is_zero() ? -1 : degree_in_var(u, var);
    if (dnew >= du) throw std::logic_error("pseudo-remainder failed to reduce");
    du = dnew;
  }
  return u;
}

/// Strips integer content and the gcd of the coefficient polynomials in
/// `var`; result is primitive as a univariate polynomial in var.
inline HomPoly primitive_in(const HomPoly& p, int var) {
  if (p.is_zero()) return p;
  HomPoly q = p.primitive_part();
  HomPoly c = content_in(q, var);
  if (c.is_zero() || c.degree() == 0) return q;
  auto d = divide_exact(q, c);
  return d ? d->primitive_part() : q;
}

/// Primitive polynomial remainder sequence in the variable with fewest
/// occurrences among those shared by both inputs.
inline HomPoly gcd_prs(const HomPoly& a, const HomPoly& b) {
  const auto occ_a = a.occurrence_counts(), occ_b = b.occurrence_counts();
  int var = -1, best = INT32_MAX;
  for (int i = 0; i < kMaxVars; ++i) {
    if (occ_a[i] == 0 || occ_b[i] == 0) continue;
    if (occ_a[i] + occ_b[i] < best) {
      best = occ_a[i] + occ_b[i];
      var = i;
    }
  }
  if (var < 0) return HomPoly::constant(a.nvars(), 1);  // no shared variable

  const HomPoly ca = content_in(a, var), cb = content_in(b, var);
  const HomPoly cg = gcd_impl(ca, cb);
  HomPoly u = *divide_exact(a.primitive_part(), ca);
  HomPoly v = *divide_exact(b.primitive_part(), cb);
  if (degree_in_var(u, var) < degree_in_var(v, var)) std::swap(u, v);

  HomPoly pp_gcd = HomPoly::constant(a.nvars(), 1);
  while (true) {
    HomPoly r = pseudo_remainder(u, v, var);
    if (r.is_zero()) {
      pp_gcd = primitive_in(v, var);
      break;
    }
    if (degree_in_var(r, var) == 0) break;  // coprime as univariates in var
    u = std::move(v);
    v = primitive_in(r, var);
  }
  return (cg * pp_gcd).primitive_part();
}

inline HomPoly gcd_impl(const HomPoly& a, const HomPoly& b) {
  if (a.is_zero()) return b.primitive_part();
  if (b.is_zero()) return a.primitive_part();
  HomPoly pa = a.primitive_part(), pb = b.primitive_part();
  const Monomial ma = pa.monomial_content(), mb = pb.monomial_content();
  Monomial m;
  for (int i = 0; i < kMaxVars; ++i) m.e[i] = std::min(ma.e[i], mb.e[i]);
  pa = pa.divided_by_monomial(ma);
  pb = pb.divided_by_monomial(mb);
  const HomPoly common = HomPoly::term(a.nvars(), m, 1);
  if (pa.is_monomial() || pb.is_monomial()) return common;  // stripped monomial is a unit
  if (pa == pb) return common * pa;
  const HomPoly polys[2] = {pa, pb};
  if (certified_coprime(std::span(polys, 2))) return common;
  // Divisibility shortcut: frequent when a cancellation factor is one of
  // the inputs outright.
  if (pb.degree() <= pa.degree() && divide_exact(pa, pb).has_value()) return common * pb;
  if (pa.degree() <= pb.degree() && divide_exact(pb, pa).has_value()) return common * pa;
  if (auto g = modular_route(pa, pb)) return common * *g;
  return common * gcd_prs(pa, pb);
}

/// Modular gcd over Z (dehomogenize, Brown gcd mod p, CRT lift, exact
/// division certificate) for up to three active variables. Returns
/// nullopt when lifting fails, in which case the caller falls back to
/// the primitive remainder sequence. Inputs are primitive with their
/// monomial contents already stripped.
inline std::optional<HomPoly> modular_route(const HomPoly& a, const HomPoly& b) {
  const auto occ_a = a.occurrence_counts(), occ_b = b.occurrence_counts();
  std::vector<int> shared, actives;
  for (int i = 0; i < kMaxVars; ++i) {
    if (occ_a[i] > 0 || occ_b[i] > 0) actives.push_back(i);
    if (occ_a[i] > 0 && occ_b[i] > 0) shared.push_back(i);
  }
  if (shared.empty()) return HomPoly::constant(a.nvars(), 1);
  if (actives.size() > 3 || actives.size() < 2) return std::nullopt;

  VarRoles roles;
  roles.actives = int(actives.size());
  long best = -1;
  for (int v : shared) {
    const long s = std::min(a.degree_in(v), b.degree_in(v));
    if (s > best) {
      best = s;
      roles.main = v;
    }
  }
  std::vector<int> rest;
  for (int v : actives)
    if (v != roles.main) rest.push_back(v);
  if (rest.size() == 1) {
    roles.second = roles.homog = rest[0];
  } else if (a.degree_in(rest[0]) + b.degree_in(rest[0]) >=
             a.degree_in(rest[1]) + b.degree_in(rest[1])) {
    roles.second = rest[0];
    roles.homog = rest[1];
  } else {
    roles.second = rest[1];
    roles.homog = rest[0];
  }

  const HomPoly ca = content_in(a, roles.main), cb = content_in(b, roles.main);
  HomPoly pa = a, pb = b;
  if (ca.degree() > 0) {
    auto q = divide_exact(pa, ca);
    if (!q) return std::nullopt;
    pa = std::move(*q);
  }
  if (cb.degree() > 0) {
    auto q = divide_exact(pb, cb);
    if (!q) return std::nullopt;
    pb = std::move(*q);
  }
  const HomPoly cg = gcd_impl(ca, cb);
  const HomPoly gamma =
      gcd_impl(leading_coeff_in(pa, roles.main), leading_coeff_in(pb, roles.main));

  auto gamma_image = [&](uint64_t p) -> std::optional<std::vector<uint64_t>> {
    const int dg = roles.actives >= 3 ? gamma.degree_in(roles.second) : 0;
    std::vector<uint64_t> g(size_t(dg) + 1, 0);
    bool nz = false;
    for (const auto& [m, c] : gamma.terms()) {
      const uint64_t v = reduce_bigint_mod(c, p);
      if (v == 0) continue;
      nz = true;
      const int j = roles.actives >= 3 ? m.e[roles.second] : 0;
      g[size_t(j)] = (g[size_t(j)] + v) % p;
    }
    if (!nz) return std::nullopt;
    return g;
  };

  CrtPoly crt;
  int dmin_global = INT32_MAX;
  for (uint64_t p : gcd_primes()) {
    auto ia = dense_image_mod(pa, roles, p);
    auto ib = dense_image_mod(pb, roles, p);
    auto ig = gamma_image(p);
    if (!ia || !ib || !ig) continue;
    auto img = modular_gcd_image(*ia, *ib, *ig, p);
    if (!img) continue;
    if (img->main_degree == 0) return cg;  // primitive parts certified coprime
    if (img->main_degree > dmin_global) continue;
    if (img->main_degree < dmin_global) {
      dmin_global = img->main_degree;
      crt = CrtPoly{};
    }
    crt.add_prime(img->coeff, p);
    if (!crt.stable) continue;

    int total = 0;
    for (const auto& [key, c] : crt.coeff)
      total = std::max(total, roles.actives >= 3 ? key.first + key.second : key.first);
    std::vector<HomPoly::Term> terms;
    for (const auto& [key, c] : crt.coeff) {
      Monomial m;
      m.e[roles.main] = uint16_t(key.first);
      int h;
      if (roles.actives >= 3) {
        m.e[roles.second] = uint16_t(key.second);
        h = total - key.first - key.second;
      } else {
        h = total - key.first;
      }
      m.e[roles.homog] = uint16_t(uint32_t(m.e[roles.homog]) + uint32_t(h));
      terms.emplace_back(m, c);
    }
    HomPoly cand = HomPoly::from_terms(a.nvars(), std::move(terms)).primitive_part();
    if (cand.is_zero()) continue;
    const HomPoly wc = content_in(cand, roles.main);
    if (wc.degree() > 0) {
      auto q = divide_exact(cand, wc);
      if (!q) continue;
      cand = q->primitive_part();
    }
    cand = cand.divided_by_monomial(cand.monomial_content()).primitive_part();
    if (divide_exact(pa, cand) && divide_exact(pb, cand)) return cg * cand;
  }
  return std::nullopt;
}

}  // namespace detail

/// Greatest common divisor: primitive (content 1) and sign-normalized so
/// the leading coefficient is positive. gcd of homogeneous inputs is
/// homogeneous.
inline HomPoly gcd(const HomPoly& a, const HomPoly& b) {
  if (a.is_zero() && b.is_zero()) throw std::invalid_argument("gcd of two zero polynomials");
  return detail::gcd_impl(a, b).primitive_part();
}

inline HomPoly gcd(std::span<const HomPoly> polys) {
  HomPoly g;
  bool first = true;
  for (const auto& p : polys) {
    if (p.is_zero()) continue;
    g = first ? p.primitive_part() : gcd(g, p);
    first = false;
    if (!first && g.degree() == 0) break;
  }
  if (first) throw std::invalid_argument("gcd of an all-zero family");
  return g;
}

}  // namespace projdyn
