#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "projdyn/monomial.hpp"

namespace projdyn {

using BigInt = boost::multiprecision::cpp_int;

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sparse homogeneous polynomial in `nvars` variables with exact integer
/// coefficients. Terms are kept in descending graded-lex order with no zero
/// coefficients, so equality is structural and floating-point summation
/// order is reproducible. The zero polynomial carries a nominal degree and
/// is treated as degree-compatible by every checked operation.
class HomPoly {
 public:
  using Term = std::pair<Monomial, BigInt>;

  HomPoly() : nvars_(1), degree_(0) {}

  static HomPoly zero(int nvars, int degree) {
    HomPoly p;
    p.nvars_ = check_nvars(nvars);
    p.degree_ = degree;
    return p;
  }

  static HomPoly term(int nvars, const Monomial& m, BigInt coeff) {
    HomPoly p = zero(nvars, m.degree());
    if (coeff != 0) p.terms_.emplace_back(m, std::move(coeff));
    return p;
  }

  static HomPoly constant(int nvars, BigInt c) { return term(nvars, Monomial{}, std::move(c)); }

  static HomPoly variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw std::invalid_argument("variable index out of range");
    Monomial m;
    m.e[index] = 1;
    return term(nvars, m, 1);
  }

  /// Builds from an arbitrary term list; checks homogeneity.
  static HomPoly from_terms(int nvars, std::vector<Term> terms) {
    HomPoly p;
    p.nvars_ = check_nvars(nvars);
    p.terms_ = std::move(terms);
    p.canonicalize();
    p.degree_ = p.terms_.empty() ? 0 : p.terms_.front().first.degree();
    for (const auto& [m, c] : p.terms_)
      if (m.degree() != p.degree_) throw std::invalid_argument("non-homogeneous term list");
    return p;
  }

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  size_t term_count() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  const BigInt& leading_coeff() const {
    if (is_zero()) throw std::invalid_argument("zero polynomial has no leading coefficient");
    return terms_.front().second;
  }
  const Monomial& leading_monomial() const {
    if (is_zero()) throw std::invalid_argument("zero polynomial has no leading monomial");
    return terms_.front().first;
  }

  HomPoly operator-() const {
    HomPoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  HomPoly operator+(const HomPoly& q) const {
    check_compatible(q);
    HomPoly r = zero(nvars_, is_zero() ? q.degree_ : degree_);
    r.terms_.reserve(terms_.size() + q.terms_.size());
    auto a = terms_.begin(), b = q.terms_.begin();
    while (a != terms_.end() || b != q.terms_.end()) {
      if (b == q.terms_.end() || (a != terms_.end() && a->first > b->first)) {
        r.terms_.push_back(*a++);
      } else if (a == terms_.end() || b->first > a->first) {
        r.terms_.push_back(*b++);
      } else {
        BigInt c = a->second + b->second;
        if (c != 0) r.terms_.emplace_back(a->first, std::move(c));
        ++a;
        ++b;
      }
    }
    return r;
  }

  HomPoly operator-(const HomPoly& q) const { return *this + (-q); }

  HomPoly operator*(const HomPoly& q) const {
    if (is_zero() || q.is_zero()) return zero(nvars_, degree_ + q.degree_);
    if (is_monomial()) return q.scaled_by_term(terms_.front());
    if (q.is_monomial()) return scaled_by_term(q.terms_.front());
    std::unordered_map<uint64_t, BigInt> acc;
    acc.reserve(terms_.size() * q.terms_.size() / 2 + 8);
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : q.terms_) acc[(ma * mb).packed()] += ca * cb;
    return from_accumulator(nvars_, degree_ + q.degree_, acc);
  }

  HomPoly& operator+=(const HomPoly& q) { return *this = *this + q; }
  HomPoly& operator*=(const HomPoly& q) { return *this = *this * q; }

  bool operator==(const HomPoly& q) const {
    return nvars_ == q.nvars_ && terms_ == q.terms_ && (!terms_.empty() || degree_ == q.degree_);
  }

  /// Positive gcd of all coefficients. Rejects the zero polynomial.
  BigInt content() const {
    if (is_zero()) throw std::invalid_argument("content of zero polynomial");
    BigInt g = 0;
    for (const auto& [m, c] : terms_) {
      g = boost::multiprecision::gcd(g, c);
      if (g == 1) break;
    }
    if (g < 0) g = -g;
    return g;
  }

  /// Divides out the content, with the sign chosen so the leading
  /// coefficient is positive.
  HomPoly primitive_part() const {
    if (is_zero()) return *this;
    BigInt g = content();
    if (leading_coeff() < 0) g = -g;
    return divided_by_int(g);
  }

  /// Exact division by a scalar; every coefficient must be divisible.
  HomPoly divided_by_int(const BigInt& d) const {
    if (d == 0) throw std::invalid_argument("division by zero");
    HomPoly r = zero(nvars_, degree_);
    r.terms_.reserve(terms_.size());
    for (const auto& [m, c] : terms_) {
      BigInt q, rem;
      boost::multiprecision::divide_qr(c, d, q, rem);
      if (rem != 0) throw std::invalid_argument("inexact scalar division");
      r.terms_.emplace_back(m, std::move(q));
    }
    return r;
  }

  HomPoly scaled_by_int(const BigInt& s) const {
    if (s == 0) return zero(nvars_, degree_);
    HomPoly r = *this;
    for (auto& [m, c] : r.terms_) c *= s;
    return r;
  }

  HomPoly scaled_by_term(const Term& t) const {
    if (t.second == 0) return zero(nvars_, degree_ + t.first.degree());
    HomPoly r = zero(nvars_, degree_ + t.first.degree());
    r.terms_.reserve(terms_.size());
    for (const auto& [m, c] : terms_) r.terms_.emplace_back(m * t.first, c * t.second);
    return r;
  }

  /// Per-variable minimum exponent over all terms (zero polynomial -> 1).
  Monomial monomial_content() const {
    Monomial m;
    if (is_zero()) return m;
    m = terms_.front().first;
    for (const auto& [mm, c] : terms_)
      for (int i = 0; i < kMaxVars; ++i) m.e[i] = std::min(m.e[i], mm.e[i]);
    return m;
  }

  HomPoly divided_by_monomial(const Monomial& m) const {
    HomPoly r = zero(nvars_, degree_ - m.degree());
    r.terms_.reserve(terms_.size());
    for (const auto& [mm, c] : terms_) {
      if (!m.divides(mm)) throw std::invalid_argument("inexact monomial division");
      r.terms_.emplace_back(mm / m, c);
    }
    return r;
  }

  /// Formal partial derivative; degree drops by one (zero stays zero).
  HomPoly partial_derivative(int var) const {
    if (var < 0 || var >= nvars_) throw std::invalid_argument("derivative index out of range");
    HomPoly r = zero(nvars_, degree_ > 0 ? degree_ - 1 : 0);
    r.terms_.reserve(terms_.size());
    for (const auto& [m, c] : terms_) {
      if (m.e[var] == 0) continue;
      Monomial d = m;
      d.e[var] -= 1;
      r.terms_.emplace_back(d, c * m.e[var]);
    }
    return r;
  }

  /// Plain term-by-term summation in canonical order (deterministic).
  std::complex<double> eval(std::span<const std::complex<double>> v) const {
    if (int(v.size()) != nvars_) throw std::invalid_argument("evaluation arity mismatch");
    std::complex<double> sum = 0.0;
    for (const auto& [m, c] : terms_) {
      std::complex<double> t = static_cast<double>(c);
      for (int i = 0; i < nvars_; ++i)
        for (int j = 0; j < m.e[i]; ++j) t *= v[i];
      sum += t;
    }
    return sum;
  }

  /// Evaluation over Z/p with precomputed power tables.
  uint64_t eval_mod(std::span<const uint64_t> v, uint64_t p) const;

  /// Number of occurrences of each variable (terms with positive exponent).
  std::array<int, kMaxVars> occurrence_counts() const {
    std::array<int, kMaxVars> n{};
    for (const auto& [m, c] : terms_)
      for (int i = 0; i < kMaxVars; ++i)
        if (m.e[i] > 0) ++n[i];
    return n;
  }

  int degree_in(int var) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, int(m.e[var]));
    return d;
  }

  std::string to_string(std::span<const std::string> names) const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      BigInt a = c;
      if (first) {
        if (a < 0) {
          out << "-";
          a = -a;
        }
      } else {
        out << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      }
      first = false;
      bool printed = false;
      if (a != 1 || m.degree() == 0) {
        out << a;
        printed = true;
      }
      for (int i = 0; i < nvars_; ++i) {
        if (m.e[i] == 0) continue;
        if (printed) out << "*";
        out << (i < int(names.size()) ? names[i] : "x" + std::to_string(i));
        if (m.e[i] > 1) out << "^" << int(m.e[i]);
        printed = true;
      }
    }
    return out.str();
  }

  static HomPoly from_accumulator(int nvars, int degree, std::unordered_map<uint64_t, BigInt>& acc) {
    HomPoly r = zero(nvars, degree);
    r.terms_.reserve(acc.size());
    for (auto& [k, c] : acc)
      if (c != 0) r.terms_.emplace_back(Monomial::from_packed(k), std::move(c));
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& a, const Term& b) { return a.first.packed() > b.first.packed(); });
    return r;
  }

 private:
  static int check_nvars(int n) {
    if (n < 1 || n > kMaxVars) throw std::invalid_argument("variable count out of range");
    return n;
  }

  void check_compatible(const HomPoly& q) const {
    if (nvars_ != q.nvars_) throw std::invalid_argument("variable count mismatch");
    if (!is_zero() && !q.is_zero() && degree_ != q.degree_)
      throw std::invalid_argument("degree mismatch: " + std::to_string(degree_) + " vs " +
                                  std::to_string(q.degree_));
  }

  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.first > b.first; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().first == t.first)
        out.back().second += t.second;
      else
        out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return t.second == 0; });
    terms_ = std::move(out);
  }

  int nvars_;
  int degree_;
  std::vector<Term> terms_;
};

namespace detail {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline uint64_t powmod(uint64_t base, uint64_t exp, uint64_t p) {
  uint64_t r = 1 % p;
  base %= p;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, p);
    base = mulmod(base, base, p);
    exp >>= 1;
  }
  return r;
}

inline uint64_t reduce_bigint_mod(const BigInt& c, uint64_t p) {
  BigInt r = c % BigInt(p);
  if (r < 0) r += p;
  return r.convert_to<uint64_t>();
}

}  // namespace detail

inline uint64_t HomPoly::eval_mod(std::span<const uint64_t> v, uint64_t p) const {
  uint64_t sum = 0;
  std::array<std::vector<uint64_t>, kMaxVars> pows;
  for (int i = 0; i < nvars_; ++i) {
    const int d = degree_in(i);
    pows[i].resize(size_t(d) + 1);
    pows[i][0] = 1 % p;
    for (int j = 1; j <= d; ++j) pows[i][j] = detail::mulmod(pows[i][j - 1], v[i] % p, p);
  }
  for (const auto& [m, c] : terms_) {
    uint64_t t = detail::reduce_bigint_mod(c, p);
    for (int i = 0; i < nvars_; ++i)
      if (m.e[i]) t = detail::mulmod(t, pows[i][m.e[i]], p);
    sum = (sum + t) % p;
  }
  return sum;
}

/// Exact multivariate division: returns num/den when den divides num
/// exactly over the integers, nullopt otherwise.
inline std::optional<HomPoly> divide_exact(const HomPoly& num, const HomPoly& den) {
  if (den.is_zero()) throw std::invalid_argument("division by zero polynomial");
  if (num.is_zero()) return HomPoly::zero(num.nvars(), num.degree() - den.degree());
  if (den.degree() > num.degree()) return std::nullopt;
  HomPoly r = num;
  std::vector<HomPoly::Term> quotient;
  while (!r.is_zero()) {
    const Monomial& lm = r.leading_monomial();
    if (!den.leading_monomial().divides(lm)) return std::nullopt;
    BigInt q, rem;
    boost::multiprecision::divide_qr(r.leading_coeff(), den.leading_coeff(), q, rem);
    if (rem != 0) return std::nullopt;
    HomPoly::Term t{lm / den.leading_monomial(), std::move(q)};
    r = r - den.scaled_by_term(t);
    quotient.push_back(std::move(t));
  }
  return HomPoly::from_terms(num.nvars(), std::move(quotient));
}

/// Integer power with a fast path for monomials.
inline HomPoly poly_pow(const HomPoly& base, int e, size_t term_budget = 0) {
  if (e == 0) return HomPoly::constant(base.nvars(), 1);
  if (base.is_monomial()) {
    Monomial m;
    BigInt c = 1;
    for (int i = 0; i < kMaxVars; ++i) {
      const uint32_t s = uint32_t(base.terms().front().first.e[i]) * uint32_t(e);
      if (s > 0xffff) throw std::overflow_error("monomial exponent overflow");
      m.e[i] = uint16_t(s);
    }
    c = boost::multiprecision::pow(base.terms().front().second, unsigned(e));
    return HomPoly::term(base.nvars(), m, std::move(c));
  }
  HomPoly acc = HomPoly::constant(base.nvars(), 1);
  HomPoly sq = base;
  int k = e;
  while (true) {
    if (k & 1) acc = acc * sq;
    k >>= 1;
    if (!k) break;
    sq = sq * sq;
    if (term_budget && (acc.term_count() > term_budget || sq.term_count() > term_budget))
      throw BudgetError("term budget exceeded in polynomial power");
  }
  return acc;
}

namespace detail {

/// Horner substitution over the recursive coefficient structure. `span`
/// holds terms in descending graded-lex order, which already groups them
/// by the exponent of the current variable.
inline HomPoly subst_range(std::span<const HomPoly::Term> terms, int var, int nvars, int res_nvars,
                           int res_degree_per_unit, std::span<const HomPoly> args,
                           size_t term_budget) {
  if (var == nvars) {
    // All exponents consumed; a single constant term remains.
    return HomPoly::constant(res_nvars, terms.empty() ? BigInt(0) : terms.front().second);
  }
  if (terms.empty()) return HomPoly::zero(res_nvars, 0);

  HomPoly acc = HomPoly::zero(res_nvars, 0);
  bool acc_started = false;
  int prev_exp = 0;
  size_t i = 0;
  while (i < terms.size()) {
    const int exp = terms[i].first.e[var];
    size_t j = i;
    while (j < terms.size() && terms[j].first.e[var] == exp) ++j;
    HomPoly coeff = subst_range(terms.subspan(i, j - i), var + 1, nvars, res_nvars,
                                res_degree_per_unit, args, term_budget);
    if (!acc_started) {
      acc = std::move(coeff);
      acc_started = true;
    } else {
      acc = acc * poly_pow(args[var], prev_exp - exp, term_budget) + coeff;
    }
    if (term_budget && acc.term_count() > term_budget)
      throw BudgetError("term budget exceeded in substitution");
    prev_exp = exp;
    i = j;
  }
  if (prev_exp > 0) acc = acc * poly_pow(args[var], prev_exp, term_budget);
  return acc;
}

}  // namespace detail

/// Evaluates f on a tuple of equal-degree polynomials (the core of map
/// composition). Result degree is deg(f) * deg(args).
inline HomPoly substitute(const HomPoly& f, std::span<const HomPoly> args, size_t term_budget = 0) {
  if (int(args.size()) != f.nvars()) throw std::invalid_argument("substitution arity mismatch");
  const int res_nvars = args.empty() ? f.nvars() : args[0].nvars();
  int arg_degree = args.empty() ? 1 : args[0].degree();
  for (const auto& a : args) {
    if (a.nvars() != res_nvars) throw std::invalid_argument("substitution argument arity mismatch");
    if (a.degree() != arg_degree) throw std::invalid_argument("substitution argument degree mismatch");
  }
  if (f.is_zero()) return HomPoly::zero(res_nvars, f.degree() * arg_degree);
  HomPoly r = detail::subst_range(std::span(f.terms()), 0, f.nvars(), res_nvars, arg_degree,
                                  args, term_budget);
  if (r.is_zero()) return HomPoly::zero(res_nvars, f.degree() * arg_degree);
  return r;
}

}  // namespace projdyn
