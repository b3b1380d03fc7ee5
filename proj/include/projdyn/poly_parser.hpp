#pragma once

#include <cctype>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "projdyn/polynomial.hpp"

namespace projdyn {

using BigRat = boost::multiprecision::cpp_rational;

struct ParseError : std::invalid_argument {
  ParseError(const std::string& msg, size_t column)
      : std::invalid_argument(msg + " (column " + std::to_string(column + 1) + ")"),
        column(column) {}
  size_t column;
};

/// Polynomial with rational coefficients as produced by the parser; the
/// map loader clears denominators collectively before building HomPolys.
struct RatPoly {
  std::map<Monomial, BigRat> terms;

  RatPoly& operator+=(const RatPoly& q) {
    for (const auto& [m, c] : q.terms) {
      auto& t = terms[m];
      t += c;
      if (t == 0) terms.erase(m);
    }
    return *this;
  }

  RatPoly operator*(const RatPoly& q) const {
    RatPoly r;
    for (const auto& [ma, ca] : terms)
      for (const auto& [mb, cb] : q.terms) {
        auto& t = r.terms[ma * mb];
        t += ca * cb;
        if (t == 0) r.terms.erase(ma * mb);
      }
    return r;
  }

  RatPoly pow(int e) const {
    RatPoly r;
    r.terms[Monomial{}] = 1;
    RatPoly b = *this;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  BigInt denominator_lcm() const {
    BigInt l = 1;
    for (const auto& [m, c] : terms) {
      const BigInt d = boost::multiprecision::denominator(c);
      l = l / boost::multiprecision::gcd(l, d) * d;
    }
    return l;
  }
};

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::span<const std::string> vars)
      : text_(text), vars_(vars) {}

  RatPoly parse() {
    RatPoly p = expression();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return p;
  }

 private:
  RatPoly expression() {
    skip_ws();
    bool negate = false;
    while (peek() == '+' || peek() == '-') {
      if (take() == '-') negate = !negate;
      skip_ws();
    }
    RatPoly p = product();
    if (negate) p = negate_poly(p);
    while (true) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') break;
      take();
      skip_ws();
      bool neg = (c == '-');
      while (peek() == '+' || peek() == '-') {
        if (take() == '-') neg = !neg;
        skip_ws();
      }
      RatPoly q = product();
      if (neg) q = negate_poly(q);
      p += q;
    }
    return p;
  }

  RatPoly product() {
    RatPoly p = power();
    while (true) {
      skip_ws();
      if (peek() == '*') {
        take();
        p = p * power();
      } else if (peek() == '(' || std::isalpha(static_cast<unsigned char>(peek())) ||
                 std::isdigit(static_cast<unsigned char>(peek()))) {
        // Juxtaposition like "2x" or "x y" multiplies.
        p = p * power();
      } else {
        break;
      }
    }
    return p;
  }

  RatPoly power() {
    RatPoly base = atom();
    skip_ws();
    if (peek() == '^') {
      take();
      skip_ws();
      const size_t at = pos_;
      const BigInt e = integer();
      if (e < 0 || e > 60000) throw ParseError("exponent out of range", at);
      return base.pow(e.convert_to<int>());
    }
    return base;
  }

  RatPoly atom() {
    skip_ws();
    const char c = peek();
    if (c == '(') {
      take();
      RatPoly p = expression();
      skip_ws();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      take();
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      BigInt n = integer();
      BigRat v(n);
      skip_ws();
      if (peek() == '/') {
        // Rational coefficient; denominators are cleared by the loader.
        const size_t at = pos_;
        take();
        skip_ws();
        const BigInt d = integer();
        if (d == 0) throw ParseError("zero denominator", at);
        v /= BigRat(d);
      }
      RatPoly p;
      if (v != 0) p.terms[Monomial{}] = v;
      return p;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const size_t at = pos_;
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        name += text_[pos_++];
      for (size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) {
          Monomial m;
          m.e[i] = 1;
          RatPoly p;
          p.terms[m] = 1;
          return p;
        }
      }
      throw ParseError("unknown variable '" + name + "'", at);
    }
    throw ParseError("expected a coefficient, variable or '('", pos_);
  }

  BigInt integer() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("expected an integer", pos_);
    BigInt n = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      n = n * 10 + (text_[pos_++] - '0');
    return n;
  }

  static RatPoly negate_poly(RatPoly p) {
    for (auto& [m, c] : p.terms) c = -c;
    return p;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() { return text_[pos_++]; }

  std::string_view text_;
  std::span<const std::string> vars_;
  size_t pos_ = 0;
};

}  // namespace detail

inline RatPoly parse_rational_poly(std::string_view text, std::span<const std::string> vars) {
  if (int(vars.size()) > kMaxVars) throw std::invalid_argument("too many variables");
  return detail::PolyParser(text, vars).parse();
}

/// Parses polynomial text ("3*x^2*y - z^3") and rejects non-homogeneous
/// input with a diagnostic naming the offending monomials. Rational
/// coefficients are cleared by the polynomial's own denominator lcm.
inline HomPoly parse_homogeneous(std::string_view text, std::span<const std::string> vars) {
  RatPoly rp = parse_rational_poly(text, vars);
  const int nvars = int(vars.size());
  if (rp.terms.empty()) return HomPoly::zero(nvars, 0);
  const int deg = rp.terms.rbegin()->first.degree();
  std::string offenders;
  for (const auto& [m, c] : rp.terms) {
    if (m.degree() != deg) {
      HomPoly one = HomPoly::term(nvars, m, 1);
      if (!offenders.empty()) offenders += ", ";
      offenders += "'" + one.to_string(vars) + "' (degree " + std::to_string(m.degree()) + ")";
    }
  }
  if (!offenders.empty())
    throw std::invalid_argument("non-homogeneous polynomial: monomials " + offenders +
                                " do not match degree " + std::to_string(deg));
  const BigInt lcm = rp.denominator_lcm();
  std::vector<HomPoly::Term> terms;
  terms.reserve(rp.terms.size());
  for (const auto& [m, c] : rp.terms)
    terms.emplace_back(m, boost::multiprecision::numerator(c * BigRat(lcm)));
  return HomPoly::from_terms(nvars, std::move(terms));
}

}  // namespace projdyn
