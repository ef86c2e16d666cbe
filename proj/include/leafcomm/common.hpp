/*! \file common.hpp
  \brief Shared value types: exact rationals, error kinds, bit helpers, seeded randomness.
*/
#pragma once

#include <gmpxx.h>

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace leafcomm {

using Rational = mpq_class;
using BigInt = mpz_class;
using u64 = std::uint64_t;

/// Raised for malformed user input (exit code 2 in the CLI).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an internal check on computed values fails (exit code 1 in the CLI).
class AssertionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Rational parse_rational(std::string_view text);
/// Canonical a/b, b != 0.
Rational frac(const BigInt& a, const BigInt& b);
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

Rational abs_q(const Rational& q);
/// Nearest integer; sets `tie` when q is exactly halfway between two integers.
BigInt round_nearest(const Rational& q, bool& tie);
/// Smallest integer >= q.
BigInt ceil_q(const Rational& q);

inline int popcount(u64 x) { return std::popcount(x); }
inline bool parity(u64 x) { return (std::popcount(x) & 1) != 0; }
inline u64 low_mask(int bits) { return bits >= 64 ? ~u64{0} : ((u64{1} << bits) - 1); }

/// ceil(log2(x)) for x >= 1.
int ceil_log2(u64 x);

/*! \brief Counter-based generator: output i of stream `key` is a fixed mix of (key, i).

  `split` derives an independent stream, so every consumer can receive its own
  generator from one 64-bit root seed without sharing mutable state.
*/
class Rng {
 public:
  using result_type = u64;

  explicit Rng(u64 seed = 0);
  Rng split(u64 stream) const;

  u64 next();
  u64 operator()() { return next(); }
  static constexpr u64 min() { return 0; }
  static constexpr u64 max() { return ~u64{0}; }

  /// Uniform integer in [0, bound), bound > 0.
  u64 below(u64 bound);
  bool bit() { return (next() >> 63) != 0; }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01();
  /// Bernoulli with exact rational probability num/den.
  bool bernoulli(u64 num, u64 den) { return below(den) < num; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  u64 key() const { return key_; }

 private:
  Rng(u64 key, u64 counter) : key_(key), counter_(counter) {}
  u64 key_;
  u64 counter_;
};

u64 mix64(u64 x);

}  // namespace leafcomm
