#pragma once

// Exact arithmetic modulo primes below 2^62, deterministic primality, and
// brute-force quadratic exponential sums used as oracles for the chirp
// construction.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "ripchirp/error.hpp"

namespace ripchirp {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 kMaxModulus = u64{1} << 62;

constexpr u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 addmod(u64 a, u64 b, u64 m) {
  const u64 s = a + b;  // a, b < m < 2^63 so no wrap
  return s >= m ? s - m : s;
}

constexpr u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Deterministic for every n < 2^64 (first twelve primes as witnesses).
constexpr bool is_prime(u64 n) {
  if (n < 2) return false;
  constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 q : small) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : small) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// An odd prime 3 <= p < 2^62.
class PrimeModulus {
 public:
  explicit PrimeModulus(u64 p) : p_(p) {
    if (p < 3 || p >= kMaxModulus || !is_prime(p)) {
      throw Error(ErrorCode::InvalidArgument,
                  "modulus " + std::to_string(p) + " is not an odd prime below 2^62");
    }
  }

  u64 value() const noexcept { return p_; }
  operator u64() const noexcept { return p_; }

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  u64 p_;
};

/// Smallest prime in [lo, hi].
inline u64 find_prime_in_interval(u64 lo, u64 hi) {
  if (lo < 2 || lo > hi || hi >= kMaxModulus) {
    throw Error(ErrorCode::InvalidArgument, "interval must satisfy 2 <= lo <= hi < 2^62");
  }
  for (u64 n = lo;; ++n) {
    if (is_prime(n)) return n;
    if (n == hi) break;
  }
  throw Error(ErrorCode::NoPrimeInInterval,
              "no prime in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

/// e^{2 pi i t / p}.
inline std::complex<double> unit_root(const PrimeModulus& p, u64 t) {
  const u64 r = t % p.value();
  // symmetric representative keeps |angle| <= pi
  const double signed_r = r > p.value() / 2 ? -static_cast<double>(p.value() - r) : static_cast<double>(r);
  const double angle = 2.0 * std::numbers::pi * signed_r / static_cast<double>(p.value());
  return {std::cos(angle), std::sin(angle)};
}

/// Precomputed e_p(t) for t in [0, p). Immutable once built.
class RootTable {
 public:
  explicit RootTable(const PrimeModulus& p) : p_(p) {
    roots_.reserve(p.value());
    for (u64 t = 0; t < p.value(); ++t) roots_.push_back(unit_root(p, t));
  }

  const PrimeModulus& modulus() const noexcept { return p_; }
  const std::complex<double>& operator[](u64 t) const { return roots_[t]; }

 private:
  PrimeModulus p_;
  std::vector<std::complex<double>> roots_;
};

/// Phase a x^2 + b x mod p.
constexpr u64 chirp_phase(u64 a, u64 b, u64 x, u64 p) {
  const u64 xr = x % p;
  return addmod(mulmod(a % p, mulmod(xr, xr, p), p), mulmod(b % p, xr, p), p);
}

/// Sum over x = 1..p of e_p(a x^2 + b x), by direct summation.
inline std::complex<double> gauss_sum_bruteforce(const PrimeModulus& p, u64 a, u64 b) {
  std::complex<double> sum{0.0, 0.0};
  for (u64 x = 1; x <= p.value(); ++x) sum += unit_root(p, chirp_phase(a, b, x, p.value()));
  return sum;
}

/// floor(n^(1/k)) without floating-point rounding in the result.
inline u64 integer_root(u64 n, unsigned k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "root degree must be positive");
  if (k == 1 || n < 2) return n;
  // c^k <= n, evaluated with an overflow guard
  auto fits = [n, k](u64 c) {
    u128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
      acc *= c;
      if (acc > n) return false;
    }
    return true;
  };
  u64 guess = static_cast<u64>(std::pow(static_cast<long double>(n), 1.0L / k));
  while (guess > 0 && !fits(guess)) --guess;
  while (fits(guess + 1)) ++guess;
  return guess;
}

}  // namespace ripchirp
