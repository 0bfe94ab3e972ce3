#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/multiprecision/gmp.hpp>

namespace ctopo {

/// Arbitrary-precision integer. Naturals are the non-negative values; the
/// signed range is only used for jump offsets and host-side rationals.
using Nat = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Raised when an operation is called outside its documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Nat monus(const Nat& a, const Nat& b) { return a > b ? Nat(a - b) : Nat(0); }

/// Cantor pairing: (n+m)(n+m+1)/2 + m.
inline Nat pair(const Nat& n, const Nat& m) {
  Nat s = n + m;
  return s * (s + 1) / 2 + m;
}

inline std::pair<Nat, Nat> unpair(const Nat& k) {
  // s = floor((sqrt(8k+1) - 1) / 2) is the diagonal index.
  Nat s = (boost::multiprecision::sqrt(Nat(8 * k + 1)) - 1) / 2;
  Nat m = k - s * (s + 1) / 2;
  return {s - m, m};
}

inline Nat unpair_left(const Nat& k) { return unpair(k).first; }
inline Nat unpair_right(const Nat& k) { return unpair(k).second; }

inline Nat triple(const Nat& a, const Nat& b, const Nat& c) { return pair(a, pair(b, c)); }

inline std::uint64_t saturate_u64(const Nat& v) {
  if (v <= 0) return 0;
  if (v >= Nat(std::numeric_limits<std::uint64_t>::max())) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(v);
}

inline Nat parse_nat(const std::string& text) {
  if (text.empty()) throw PreconditionError("empty natural number");
  for (char c : text) {
    if (c < '0' || c > '9') throw PreconditionError("not a decimal natural: " + text);
  }
  return Nat(text);
}

inline std::string to_string(const Nat& v) { return v.str(); }

struct NatHash {
  std::size_t operator()(const Nat& v) const noexcept {
    const auto* z = v.backend().data();
    std::uint64_t h = mpz_getlimbn(z, 0);
    h ^= static_cast<std::uint64_t>(mpz_size(z)) * 0x9E3779B97F4A7C15ULL;
    return std::hash<std::uint64_t>{}(h);
  }
};

}  // namespace ctopo
