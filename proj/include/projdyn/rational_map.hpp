#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "projdyn/poly_gcd.hpp"
#include "projdyn/polynomial.hpp"
#include "projdyn/projective.hpp"

namespace projdyn {

struct IndeterminacyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateCompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonDominantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Relative threshold under which all components count as vanished.
inline constexpr double kIndeterminacyTol = 1e-12;

namespace detail {

/// Double-precision view of a component tuple. Coefficients are scaled by
/// a common power of two so that evaluations of very deep iterates (whose
/// integer coefficients can exceed double range) stay finite; the shared
/// scale drops out of every projective quantity.
struct NumericView {
  struct Entry {
    std::array<uint16_t, kMaxVars> e;
    double coeff;
  };
  std::vector<std::vector<Entry>> comps;
  std::array<int, kMaxVars> max_exp{};
  double l1max = 0;
  int nvars = 0;

  /// c * 2^-shift as a double, safe for integers far beyond double range.
  static double scaled_to_double(const BigInt& c, long shift) {
    if (c == 0) return 0.0;
    const bool neg = c < 0;
    const BigInt a = neg ? BigInt(-c) : c;
    const long m = long(boost::multiprecision::msb(a));
    double d;
    long e;
    if (m <= 52) {
      d = a.convert_to<double>();
      e = -shift;
    } else {
      d = double((a >> unsigned(m - 52)).convert_to<uint64_t>());
      e = m - 52 - shift;
    }
    d = std::ldexp(d, int(e));
    return neg ? -d : d;
  }

  void build(std::span<const HomPoly> polys) {
    nvars = polys.empty() ? 0 : polys[0].nvars();
    comps.assign(polys.size(), {});
    max_exp = {};
    long msb_max = 0;
    for (const auto& p : polys)
      for (const auto& [m, c] : p.terms())
        msb_max = std::max(msb_max, long(boost::multiprecision::msb(c < 0 ? -c : c)));
    const long shift = std::max(long(0), msb_max - 400);
    l1max = 0;
    for (size_t j = 0; j < polys.size(); ++j) {
      double l1 = 0;
      comps[j].reserve(polys[j].term_count());
      for (const auto& [m, c] : polys[j].terms()) {
        const double d = scaled_to_double(c, shift);
        comps[j].push_back({m.e, d});
        l1 += std::abs(d);
        for (int i = 0; i < nvars; ++i) max_exp[i] = std::max(max_exp[i], int(m.e[i]));
      }
      l1max = std::max(l1max, l1);
    }
  }

  /// Values of every component at y.
  void eval(std::span<const Cplx> y, std::span<Cplx> out) const {
    thread_local std::array<std::vector<Cplx>, kMaxVars> pows;
    for (int i = 0; i < nvars; ++i) {
      pows[i].resize(size_t(max_exp[i]) + 1);
      pows[i][0] = 1.0;
      for (int j = 1; j <= max_exp[i]; ++j) pows[i][j] = pows[i][j - 1] * y[i];
    }
    for (size_t j = 0; j < comps.size(); ++j) {
      Cplx s = 0;
      for (const auto& t : comps[j]) {
        Cplx v = t.coeff;
        for (int i = 0; i < nvars; ++i) v *= pows[i][t.e[i]];
        s += v;
      }
      out[j] = s;
    }
  }

  /// Values plus the full homogeneous Jacobian P(j,i) = d f_j / d x_i.
  void eval_with_jacobian(std::span<const Cplx> y, std::span<Cplx> out,
                          Eigen::Ref<SmallMat> jac) const {
    thread_local std::array<std::vector<Cplx>, kMaxVars> pows;
    for (int i = 0; i < nvars; ++i) {
      pows[i].resize(size_t(max_exp[i]) + 1);
      pows[i][0] = 1.0;
      for (int j = 1; j <= max_exp[i]; ++j) pows[i][j] = pows[i][j - 1] * y[i];
    }
    jac.setZero();
    for (size_t j = 0; j < comps.size(); ++j) {
      Cplx s = 0;
      for (const auto& t : comps[j]) {
        Cplx v = t.coeff;
        for (int i = 0; i < nvars; ++i) v *= pows[i][t.e[i]];
        s += v;
        for (int i = 0; i < nvars; ++i) {
          if (t.e[i] == 0) continue;
          Cplx d = t.coeff * double(t.e[i]);
          for (int l = 0; l < nvars; ++l) d *= pows[l][l == i ? t.e[l] - 1 : t.e[l]];
          jac(Eigen::Index(j), i) += d;
        }
      }
      out[j] = s;
    }
  }
};

}  // namespace detail

struct ReductionInfo {
  bool reduced = false;       // a common factor or content was cancelled
  int cancelled_degree = 0;   // degree of the cancelled polynomial factor
};

struct MapStep {
  ProjPoint image;
  SmallMat jacobian;  // k x k chart Jacobian, source chart -> image chart
};

/// Dominant rational self-map of P^k given by k+1 primitive equal-degree
/// homogeneous components; immutable after construction.
class RationalMap {
 public:
  static RationalMap from_components(std::vector<HomPoly> comps, ReductionInfo* info = nullptr,
                                     bool check_dominance = true) {
    if (comps.empty() || comps.size() < 2 || comps.size() > kMaxVars)
      throw std::invalid_argument("a map of P^k needs k+1 components, k in 1..3");
    const int nvars = comps[0].nvars();
    if (int(comps.size()) != nvars)
      throw std::invalid_argument("component count must match variable count");
    int degree = -1;
    bool all_zero = true;
    for (const auto& c : comps) {
      if (c.nvars() != nvars) throw std::invalid_argument("mixed variable counts");
      if (c.is_zero()) continue;
      all_zero = false;
      if (degree < 0) degree = c.degree();
      if (c.degree() != degree)
        throw std::invalid_argument("components must share a common degree");
    }
    if (all_zero) throw DegenerateCompositionError("all components are identically zero");

    ReductionInfo local;
    reduce_tuple(comps, local);
    if (info) *info = local;
    RationalMap f;
    f.dim_ = nvars - 1;
    f.comps_ = std::move(comps);
    f.degree_ = f.comps_[first_nonzero(f.comps_)].degree();
    f.view_.build(f.comps_);
    if (check_dominance) f.check_dominant();
    return f;
  }

  static RationalMap identity(int dim) {
    std::vector<HomPoly> comps;
    for (int i = 0; i <= dim; ++i) comps.push_back(HomPoly::variable(dim + 1, i));
    return from_components(std::move(comps));
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const std::vector<HomPoly>& components() const { return comps_; }
  const detail::NumericView& view() const { return view_; }

  bool operator==(const RationalMap& o) const { return comps_ == o.comps_; }

  bool is_identity() const {
    if (degree_ != 1) return false;
    for (int i = 0; i <= dim_; ++i)
      if (comps_[i] != HomPoly::variable(dim_ + 1, i)) return false;
    return true;
  }

  /// Pointwise action off the indeterminacy set; nullopt when every
  /// component vanishes to tolerance (orbit must be discarded).
  std::optional<ProjPoint> try_evaluate(const ProjPoint& x) const {
    std::array<Cplx, kMaxVars> y, c;
    rescale_to_chart(x, y);
    view_.eval(std::span<const Cplx>(y.data(), size_t(dim_) + 1),
               std::span<Cplx>(c.data(), size_t(dim_) + 1));
    if (!finite_and_above_tol(c)) return std::nullopt;
    return make_proj_point(dim_, std::span<const Cplx>(c.data(), size_t(dim_) + 1));
  }

  ProjPoint evaluate(const ProjPoint& x) const {
    auto r = try_evaluate(x);
    if (!r) throw IndeterminacyError("evaluation hit the indeterminacy set");
    return *r;
  }

  /// One orbit step together with the k x k Jacobian between max-modulus
  /// charts; the building block of every pullback computation.
  std::optional<MapStep> try_step(const ProjPoint& x) const {
    std::array<Cplx, kMaxVars> y, c;
    rescale_to_chart(x, y);
    SmallMat hom_jac(dim_ + 1, dim_ + 1);
    view_.eval_with_jacobian(std::span<const Cplx>(y.data(), size_t(dim_) + 1),
                             std::span<Cplx>(c.data(), size_t(dim_) + 1), hom_jac);
    if (!finite_and_above_tol(c)) return std::nullopt;
    MapStep step;
    step.image = make_proj_point(dim_, std::span<const Cplx>(c.data(), size_t(dim_) + 1));
    const int alpha = x.chart, beta = step.image.chart;
    const Cplx cb = c[beta];
    step.jacobian.resize(dim_, dim_);
    int row = 0;
    for (int j = 0; j <= dim_; ++j) {
      if (j == beta) continue;
      int col = 0;
      for (int i = 0; i <= dim_; ++i) {
        if (i == alpha) continue;
        step.jacobian(row, col) = (hom_jac(j, i) * cb - c[j] * hom_jac(beta, i)) / (cb * cb);
        ++col;
      }
      ++row;
    }
    if (!step.jacobian.allFinite()) return std::nullopt;
    return step;
  }

  /// Homogeneous Jacobian at a point (used by the dominance check).
  SmallMat homogeneous_jacobian(const ProjPoint& x) const {
    std::array<Cplx, kMaxVars> y, c;
    rescale_to_chart(x, y);
    SmallMat jac(dim_ + 1, dim_ + 1);
    view_.eval_with_jacobian(std::span<const Cplx>(y.data(), size_t(dim_) + 1),
                             std::span<Cplx>(c.data(), size_t(dim_) + 1), jac);
    return jac;
  }

 private:
  RationalMap() = default;

  static size_t first_nonzero(const std::vector<HomPoly>& comps) {
    for (size_t i = 0; i < comps.size(); ++i)
      if (!comps[i].is_zero()) return i;
    return 0;
  }

  void rescale_to_chart(const ProjPoint& x, std::array<Cplx, kMaxVars>& y) const {
    if (x.dim != dim_) throw std::invalid_argument("point dimension mismatch");
    const Cplx s = x.c[x.chart];
    for (int i = 0; i <= dim_; ++i) y[i] = x.c[i] / s;
  }

  bool finite_and_above_tol(const std::array<Cplx, kMaxVars>& c) const {
    double mx = 0;
    for (int i = 0; i <= dim_; ++i) {
      if (!std::isfinite(c[i].real()) || !std::isfinite(c[i].imag())) return false;
      mx = std::max(mx, std::abs(c[i]));
    }
    return mx >= kIndeterminacyTol * view_.l1max;
  }

  /// Divides the tuple by its collective integer content, collective
  /// monomial factor and the gcd of all components, then normalizes the
  /// sign; the result is the unique primitive representative.
  static void reduce_tuple(std::vector<HomPoly>& comps, ReductionInfo& info) {
    // Integer content.
    BigInt ic = 0;
    for (const auto& c : comps)
      if (!c.is_zero()) ic = boost::multiprecision::gcd(ic, c.content());
    const size_t lead = first_nonzero(comps);
    if (comps[lead].leading_coeff() < 0) ic = -ic;
    if (ic != 1) {
      for (auto& c : comps) c = c.divided_by_int(ic);
      if (ic != -1) info.reduced = true;
    }
    // Collective monomial factor.
    Monomial m;
    bool first = true;
    for (const auto& c : comps) {
      if (c.is_zero()) continue;
      const Monomial mc = c.monomial_content();
      if (first) {
        m = mc;
        first = false;
      } else {
        for (int i = 0; i < kMaxVars; ++i) m.e[i] = std::min(m.e[i], mc.e[i]);
      }
    }
    if (m.degree() > 0) {
      for (auto& c : comps) c = c.divided_by_monomial(m);
      info.reduced = true;
      info.cancelled_degree += m.degree();
    }
    // Non-monomial common factor. A single-term component cannot share
    // one once the collective monomial is gone, and a certified-coprime
    // tuple needs no remainder sequences at all.
    bool has_monomial = false;
    for (const auto& c : comps)
      if (!c.is_zero() && c.is_monomial()) has_monomial = true;
    if (has_monomial) return;
    std::vector<HomPoly> nonzero;
    for (const auto& c : comps)
      if (!c.is_zero()) nonzero.push_back(c);
    if (nonzero.size() >= 2 && certified_coprime(nonzero)) return;
    std::sort(nonzero.begin(), nonzero.end(),
              [](const HomPoly& a, const HomPoly& b) { return a.term_count() < b.term_count(); });
    HomPoly g = nonzero[0];
    for (size_t i = 1; i < nonzero.size() && g.degree() > 0; ++i) g = gcd(g, nonzero[i]);
    if (g.degree() > 0) {
      for (auto& c : comps) {
        auto q = divide_exact(c, g);
        if (!q) throw std::logic_error("tuple gcd does not divide a component");
        c = std::move(*q);
      }
      info.reduced = true;
      info.cancelled_degree += g.degree();
    }
  }

  /// Dominance = the homogeneous Jacobian has full rank at some sampled
  /// point (it can only fail on a Zariski-closed set). Points are drawn
  /// from the unit torus |x_i| = 1, which is Zariski-dense and keeps the
  /// powers of deep iterates from underflowing.
  void check_dominant() const {
    CounterRng rng{0x00d0311a17ULL};
    for (uint64_t i = 0; i < 8; ++i) {
      std::array<Cplx, kMaxVars> v{};
      for (int j = 0; j <= dim_; ++j) {
        const double th = 6.283185307179586 * rng.u01(j + 1, i);
        v[j] = Cplx(std::cos(th), std::sin(th));
      }
      const ProjPoint x = make_proj_point(dim_, std::span<const Cplx>(v.data(), size_t(dim_) + 1));
      SmallMat j = homogeneous_jacobian(x);
      if (!j.allFinite()) continue;
      // Components of deep iterates can differ in scale by hundreds of
      // binary orders; rank is invariant under row scaling, so balance
      // the rows before looking at the spectrum.
      bool zero_row = false;
      for (Eigen::Index r = 0; r < j.rows(); ++r) {
        const double s = j.row(r).cwiseAbs().maxCoeff();
        if (s > 0)
          j.row(r) /= s;
        else
          zero_row = true;
      }
      if (zero_row) continue;
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(j);
      const auto& sv = svd.singularValues();
      if (sv(0) > 0 && sv(sv.size() - 1) > 1e-8 * sv(0)) return;
    }
    throw NonDominantError("map is not dominant (rank-deficient Jacobian at sampled points)");
  }

  int dim_ = 1;
  int degree_ = 1;
  std::vector<HomPoly> comps_;
  detail::NumericView view_;
};

/// Symbolic substitution followed by cancellation of the common factor,
/// so the result is the reduced composition f o g.
inline RationalMap compose(const RationalMap& f, const RationalMap& g,
                           size_t term_budget = 0, ReductionInfo* info = nullptr) {
  if (f.dim() != g.dim()) throw std::invalid_argument("composition dimension mismatch");
  if (long(f.degree()) * long(g.degree()) > 60000)
    throw BudgetError("composition degree exceeds representable range");
  std::vector<HomPoly> comps;
  comps.reserve(size_t(f.dim()) + 1);
  for (const auto& c : f.components())
    comps.push_back(substitute(c, g.components(), term_budget));
  return RationalMap::from_components(std::move(comps), info);
}

struct IterateBudget {
  int max_degree = 4096;
  size_t max_terms = 2'000'000;
};

struct IterateResult {
  RationalMap map;
  int reached = 0;       // largest n with f^n computed
  bool truncated = false;
};

/// Reduced n-th iterate via repeated composition with cancellation at
/// every step; stops early (with a flag) when the budget is exceeded.
inline IterateResult iterate(const RationalMap& f, int n, const IterateBudget& budget = {}) {
  if (n < 1) throw std::invalid_argument("iterate needs n >= 1");
  IterateResult r{f, 1, false};
  for (int i = 2; i <= n; ++i) {
    RationalMap next = [&] {
      try {
        return compose(r.map, f, budget.max_terms);
      } catch (const BudgetError&) {
        r.truncated = true;
        return r.map;
      }
    }();
    if (r.truncated) break;
    if (next.degree() > budget.max_degree) {
      r.truncated = true;
      break;
    }
    r.map = std::move(next);
    r.reached = i;
  }
  return r;
}

/// Degree sequence of the reduced iterates: values[n] = deg(f^n),
/// values[0] = 1.
struct DegreeSequence {
  std::vector<long> values;  // size horizon+1 unless truncated
  int horizon = 0;
  bool truncated = false;
};

inline DegreeSequence degree_sequence(const RationalMap& f, int n_max,
                                      const IterateBudget& budget = {}) {
  if (n_max < 1) throw std::invalid_argument("degree_sequence needs N >= 1");
  DegreeSequence s;
  s.horizon = n_max;
  s.values = {1, long(f.degree())};
  RationalMap g = f;
  for (int n = 2; n <= n_max; ++n) {
    bool stop = false;
    try {
      RationalMap next = compose(g, f, budget.max_terms);
      if (next.degree() > budget.max_degree)
        stop = true;
      else
        g = std::move(next);
    } catch (const BudgetError&) {
      stop = true;
    }
    if (stop) {
      s.truncated = true;
      break;
    }
    s.values.push_back(g.degree());
  }
  return s;
}

/// Reduced composition g o f o g_inv after verifying symbolically that
/// g_inv really is a two-sided rational inverse of g.
inline RationalMap conjugate(const RationalMap& f, const RationalMap& g,
                             const RationalMap& g_inv, size_t term_budget = 0) {
  if (!compose(g, g_inv).is_identity() || !compose(g_inv, g).is_identity())
    throw std::invalid_argument("g_inv is not the inverse of g");
  return compose(g, compose(f, g_inv, term_budget), term_budget);
}

struct IndeterminacyProbe {
  std::vector<ProjPoint> points;
  int exact_count = 0;   // leading entries found by the vanishing pattern
  bool heuristic = true; // never a certified or exhaustive list
};

/// Common zeros of all components: exact coordinate base points from the
/// monomial vanishing pattern plus Gauss-Newton refinements from random
/// starts. Heuristic by design; used to keep orbit samples away from the
/// indeterminacy set.
inline IndeterminacyProbe indeterminacy_probe(const RationalMap& f, int samples = 64,
                                              uint64_t seed = 1) {
  IndeterminacyProbe probe;
  const int k = f.dim();
  // Coordinate points e_j: base points iff no component contains x_j^d.
  for (int j = 0; j <= k; ++j) {
    bool vanishes = true;
    for (const auto& c : f.components()) {
      for (const auto& [m, coeff] : c.terms())
        if (m.e[j] == c.degree()) {
          vanishes = false;
          break;
        }
      if (!vanishes) break;
    }
    if (vanishes) {
      std::array<Cplx, kMaxVars> v{};
      v[j] = 1.0;
      probe.points.push_back(make_proj_point(k, std::span<const Cplx>(v.data(), size_t(k) + 1)));
    }
  }
  probe.exact_count = int(probe.points.size());

  const double scale = f.view().l1max;
  for (int s = 0; s < samples; ++s) {
    ProjPoint x = sample_fs(k, seed, uint64_t(s));
    const int alpha = x.chart;
    Eigen::VectorXcd w(k);
    {
      SmallVec w0 = chart_coords(x);
      for (int i = 0; i < k; ++i) w(i) = w0(i);
    }
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      std::array<Cplx, kMaxVars> y{}, c{};
      int col = 0;
      for (int i = 0; i <= k; ++i) y[i] = (i == alpha) ? 1.0 : w(col++);
      SmallMat hom_jac(k + 1, k + 1);
      f.view().eval_with_jacobian(std::span<const Cplx>(y.data(), size_t(k) + 1),
                                  std::span<Cplx>(c.data(), size_t(k) + 1), hom_jac);
      Eigen::VectorXcd r(k + 1);
      for (int i = 0; i <= k; ++i) r(i) = c[i];
      if (!r.allFinite()) break;
      if (r.norm() <= 1e-11 * scale) {
        converged = true;
        break;
      }
      Eigen::MatrixXcd jac(k + 1, k);
      col = 0;
      for (int i = 0; i <= k; ++i) {
        if (i == alpha) continue;
        jac.col(col++) = hom_jac.col(i);
      }
      Eigen::VectorXcd delta = jac.colPivHouseholderQr().solve(-r);
      if (!delta.allFinite() || delta.norm() > 1e6) break;
      w += delta;
      if (w.norm() > 1e8) break;
    }
    if (!converged) continue;
    std::array<Cplx, kMaxVars> v{};
    int col = 0;
    for (int i = 0; i <= k; ++i) v[i] = (i == alpha) ? 1.0 : w(col++);
    ProjPoint found = make_proj_point(k, std::span<const Cplx>(v.data(), size_t(k) + 1));
    bool fresh = true;
    for (const auto& p : probe.points)
      if (fs_distance(p, found) < 1e-6) fresh = false;
    if (fresh) probe.points.push_back(found);
  }
  return probe;
}

}  // namespace projdyn
