#pragma once

// Index sets A = {1..floor(p^(1/2m))} and B (r base-2M digits in 0..M-1),
// the chirp columns u_{a,b}(x) = p^{-1/2} e_p(a x^2 + b x), x = 1..p, and the
// complex-to-real block substitution.

#include <cmath>
#include <complex>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ripchirp/dense.hpp"
#include "ripchirp/modmath.hpp"
#include "ripchirp/residue_set.hpp"

namespace ripchirp {

/// Largest set B we are willing to materialize.
inline constexpr u64 kMaxMaterializedB = u64{1} << 24;

/// Full-scale matrices need m >= 100.
inline constexpr u64 kStrictMinM = 100;

/// log2 of M = floor(2^(2.01 m - 1)), ignoring the floor.
inline double log2_digit_bound(u64 m) { return 2.01 * static_cast<double>(m) - 1.0; }

struct ConstructionParams {
  u64 m = 0;
  PrimeModulus p;
  double alpha = 0;  // 1/(2m)
  double beta = 0;   // 1/(2.01 m)
  u64 r = 0;         // floor(beta log2 p)
  double log2M = 0;
  std::optional<u64> M;  // only when 2^(2.01m - 1) fits in 63 bits
  bool strict = false;

  /// Toy mode accepts any even m >= 2; strict mode requires m >= 100 and
  /// leaves M symbolic (only log2M is available).
  static ConstructionParams make(PrimeModulus p, u64 m, bool strict = false) {
    if (m < 2 || m % 2 != 0) {
      throw Error(ErrorCode::InvalidArgument, "m must be an even integer >= 2, got " + std::to_string(m));
    }
    if (strict && m < kStrictMinM) {
      throw Error(ErrorCode::InvalidArgument, "strict mode requires m >= 100");
    }
    ConstructionParams params{.m = m, .p = p, .M = std::nullopt};
    params.alpha = 1.0 / (2.0 * static_cast<double>(m));
    params.beta = 1.0 / (2.01 * static_cast<double>(m));
    const long double log2p = std::log2(static_cast<long double>(p.value()));
    params.r = static_cast<u64>(std::floor(log2p / (2.01L * static_cast<long double>(m))));
    params.log2M = log2_digit_bound(m);
    if (params.log2M < 63.0) params.M = static_cast<u64>(std::floor(std::exp2(params.log2M)));
    params.strict = strict;
    return params;
  }
};

/// {1, ..., floor(p^(1/(2m)))}.
inline ResidueSet build_set_A(const PrimeModulus& p, u64 m) {
  if (m < 2 || m % 2 != 0) throw Error(ErrorCode::InvalidArgument, "m must be an even integer >= 2");
  const u64 top = integer_root(p.value(), static_cast<unsigned>(2 * m));
  if (top < 2) {
    throw Error(ErrorCode::DegenerateSet,
                "floor(p^(1/2m)) = " + std::to_string(top) + " leaves |A| < 2");
  }
  return ResidueSet::range(p, 1, top);
}

/// (M - 1)((2M)^r - 1)/(2M - 1), or nullopt if it exceeds 64 bits.
inline std::optional<u64> max_B_element(u64 M, u64 r) {
  u128 acc = 0;
  u128 place = 1;
  for (u64 j = 0; j < r; ++j) {
    acc += static_cast<u128>(M - 1) * place;
    if (acc > ~u64{0}) return std::nullopt;
    if (j + 1 < r) {
      place *= 2 * static_cast<u128>(M);
      if (place > ~u64{0}) return std::nullopt;
    }
  }
  return static_cast<u64>(acc);
}

/// All sums x_1 + x_2 (2M) + ... + x_r (2M)^{r-1} with digits in {0..M-1}.
inline ResidueSet build_set_B_explicit(u64 M, u64 r, const PrimeModulus& p) {
  if (M < 2) throw Error(ErrorCode::DegenerateSet, "digit bound M must be >= 2");
  if (r < 1) throw Error(ErrorCode::DegenerateSet, "digit count r must be >= 1");
  const auto top = max_B_element(M, r);
  if (!top || static_cast<u128>(*top) * 2 >= p.value()) {
    throw Error(ErrorCode::Overflow, "largest element of B is not below p/2 (M=" + std::to_string(M) +
                                         ", r=" + std::to_string(r) + ", p=" + std::to_string(p.value()) + ")");
  }
  u64 count = 1;
  for (u64 j = 0; j < r; ++j) {
    if (count > kMaxMaterializedB / M) throw Error(ErrorCode::Overflow, "|B| = M^r too large to materialize");
    count *= M;
  }
  std::vector<u64> digits(r, 0);
  std::vector<u64> values;
  values.reserve(count);
  for (u64 i = 0; i < count; ++i) {
    u64 v = 0;
    for (u64 j = r; j-- > 0;) v = v * (2 * M) + digits[j];
    values.push_back(v);
    for (u64 j = 0; j < r; ++j) {
      if (++digits[j] < M) break;
      digits[j] = 0;
    }
  }
  return ResidueSet(p, values);
}

inline ResidueSet build_set_B(const ConstructionParams& params) {
  if (!params.M) {
    throw Error(ErrorCode::Overflow, "M = 2^" + std::to_string(params.log2M) + " is not representable");
  }
  if (params.r == 0) throw Error(ErrorCode::DegenerateSet, "r = floor(beta log2 p) is 0");
  return build_set_B_explicit(*params.M, params.r, params.p);
}

inline ResidueSet build_set_B(const PrimeModulus& p, u64 m) {
  return build_set_B(ConstructionParams::make(p, m));
}

/// Unit-norm chirp vector of length p.
inline std::vector<std::complex<double>> column(const RootTable& roots, u64 a, u64 b) {
  const u64 p = roots.modulus().value();
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  std::vector<std::complex<double>> out(p);
  for (u64 x = 1; x <= p; ++x) out[x - 1] = scale * roots[chirp_phase(a, b, x, p)];
  return out;
}

inline std::vector<std::complex<double>> column(const PrimeModulus& p, u64 a, u64 b) {
  return column(RootTable(p), a, b);
}

/// Column index list (a, b) over a prime; entries are generated on demand.
class ChirpMatrix {
 public:
  ChirpMatrix(PrimeModulus p, std::vector<std::pair<u64, u64>> columns)
      : p_(p), columns_(std::move(columns)) {
    std::set<std::pair<u64, u64>> seen;
    for (const auto& c : columns_) {
      if (c.first >= p.value() || c.second >= p.value()) {
        throw Error(ErrorCode::InvalidArgument, "column index outside [0, p)");
      }
      if (!seen.insert(c).second) throw Error(ErrorCode::DuplicateIndex, "repeated (a, b) column");
    }
  }

  const PrimeModulus& modulus() const noexcept { return p_; }
  std::size_t rows() const noexcept { return p_.value(); }
  std::size_t cols() const noexcept { return columns_.size(); }
  const std::vector<std::pair<u64, u64>>& columns() const noexcept { return columns_; }

  ComplexMatrix materialize() const {
    const RootTable roots(p_);
    ComplexMatrix out(rows(), cols());
    for (std::size_t j = 0; j < cols(); ++j) {
      const auto v = column(roots, columns_[j].first, columns_[j].second);
      std::copy(v.begin(), v.end(), out.column(j).begin());
    }
    return out;
  }

 private:
  PrimeModulus p_;
  std::vector<std::pair<u64, u64>> columns_;
};

/// First N pairs of A x B in lexicographic (a, then b) order.
inline ChirpMatrix build_matrix(const ResidueSet& A, const ResidueSet& B, u64 N) {
  require_same_modulus(A, B);
  const u64 capacity = static_cast<u64>(A.size()) * B.size();
  if (N > capacity) {
    throw Error(ErrorCode::CapacityExceeded,
                "N = " + std::to_string(N) + " exceeds |A||B| = " + std::to_string(capacity));
  }
  std::vector<std::pair<u64, u64>> cols;
  cols.reserve(N);
  for (u64 a : A) {
    for (u64 b : B) {
      if (cols.size() == N) return ChirpMatrix(A.modulus(), std::move(cols));
      cols.emplace_back(a, b);
    }
  }
  return ChirpMatrix(A.modulus(), std::move(cols));
}

inline ChirpMatrix build_matrix(const ConstructionParams& params, u64 N) {
  return build_matrix(build_set_A(params.p, params.m), build_set_B(params), N);
}

/// Smallest prime in [ceil(k^(2-eps)), floor(2 k^(2-eps))].
inline PrimeModulus select_prime_for_k(u64 k, double eps) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be >= 2");
  if (!(eps >= 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in [0, 1)");
  const long double base = eps == 0.0 ? static_cast<long double>(k) * static_cast<long double>(k)
                                      : std::pow(static_cast<long double>(k), 2.0L - eps);
  if (base >= std::ldexp(1.0L, 61)) {
    throw Error(ErrorCode::RangeTooLarge, "k^(2-eps) exceeds 2^61");
  }
  const u64 lo = std::max<u64>(3, static_cast<u64>(std::ceil(base)));
  const u64 hi = static_cast<u64>(std::floor(2.0L * base));
  return PrimeModulus(find_prime_in_interval(lo, hi));
}

struct CapacityReport {
  double eps = 0;
  double eps_limit = 0;        // 1/(403 m)
  double power = 0;            // p^((2+eps)/(2-eps))
  u64 capacity = 0;            // |A||B|
  u64 N = 0;
  bool eps_ok = false;         // eps <= 1/(403 m)
  bool N_below_power = false;  // N <= p^((2+eps)/(2-eps))
  bool power_below_capacity = false;  // p^((2+eps)/(2-eps)) <= |A||B|
  bool N_within_capacity = false;     // N <= |A||B|
};

inline CapacityReport capacity_check(const PrimeModulus& p, u64 m, double eps, u64 N) {
  const auto A = build_set_A(p, m);
  const auto B = build_set_B(p, m);
  CapacityReport rep;
  rep.eps = eps;
  rep.eps_limit = 1.0 / (403.0 * static_cast<double>(m));
  rep.power = std::pow(static_cast<double>(p.value()), (2.0 + eps) / (2.0 - eps));
  rep.capacity = static_cast<u64>(A.size()) * B.size();
  rep.N = N;
  rep.eps_ok = eps <= rep.eps_limit;
  rep.N_below_power = static_cast<double>(N) <= rep.power;
  rep.power_below_capacity = rep.power <= static_cast<double>(rep.capacity);
  rep.N_within_capacity = N <= rep.capacity;
  return rep;
}

/// Replaces each a+ib by [[a, b], [-b, a]].
inline RealMatrix realify(const ComplexMatrix& mat) {
  RealMatrix out(2 * mat.rows(), 2 * mat.cols());
  for (std::size_t j = 0; j < mat.cols(); ++j) {
    for (std::size_t i = 0; i < mat.rows(); ++i) {
      const auto z = mat(i, j);
      out(2 * i, 2 * j) = z.real();
      out(2 * i, 2 * j + 1) = z.imag();
      out(2 * i + 1, 2 * j) = -z.imag();
      out(2 * i + 1, 2 * j + 1) = z.real();
    }
  }
  return out;
}

/// The real vector v with realify(Phi) v = (Re, -Im) interleaving of Phi z.
inline std::vector<double> realify_vector(std::span<const std::complex<double>> z) {
  std::vector<double> v(2 * z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    v[2 * j] = z[j].real();
    v[2 * j + 1] = -z[j].imag();
  }
  return v;
}

}  // namespace ripchirp
