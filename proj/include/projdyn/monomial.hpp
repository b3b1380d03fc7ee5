#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>

namespace projdyn {

/// Ambient spaces are P^1..P^3, so at most 4 homogeneous variables.
inline constexpr int kMaxVars = 4;

/// Exponent vector of a power product. Slots beyond the active variable
/// count stay zero, so comparisons and packing ignore arity.
struct Monomial {
  std::array<uint16_t, kMaxVars> e{};

  int degree() const {
    return int(e[0]) + int(e[1]) + int(e[2]) + int(e[3]);
  }

  uint64_t packed() const {
    return (uint64_t(e[0]) << 48) | (uint64_t(e[1]) << 32) |
           (uint64_t(e[2]) << 16) | uint64_t(e[3]);
  }

  static Monomial from_packed(uint64_t k) {
    Monomial m;
    m.e = {uint16_t(k >> 48), uint16_t(k >> 32), uint16_t(k >> 16), uint16_t(k)};
    return m;
  }

  bool divides(const Monomial& m) const {
    for (int i = 0; i < kMaxVars; ++i)
      if (e[i] > m.e[i]) return false;
    return true;
  }

  Monomial operator*(const Monomial& m) const {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) {
      const uint32_t s = uint32_t(e[i]) + uint32_t(m.e[i]);
      if (s > 0xffff) throw std::overflow_error("monomial exponent overflow");
      r.e[i] = uint16_t(s);
    }
    return r;
  }

  /// Caller guarantees m.divides(*this).
  Monomial operator/(const Monomial& m) const {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) r.e[i] = uint16_t(e[i] - m.e[i]);
    return r;
  }

  /// Graded lexicographic: total degree first, then earlier variables
  /// weigh more. This is the canonical term order used everywhere.
  std::strong_ordering operator<=>(const Monomial& m) const {
    if (auto c = degree() <=> m.degree(); c != 0) return c;
    return packed() <=> m.packed();
  }
  bool operator==(const Monomial&) const = default;
};

}  // namespace projdyn
