#pragma once

// Restricted isometry constants from Gram spectra:
//   delta_k = max over k-column supports S of max(lambda_max(G_S) - 1, 1 - lambda_min(G_S)).
// Exhaustive scans split the support ranks across threads; sampled scans draw
// support t from CounterRng(seed, t). Both merge by (max delta, lowest index),
// so results do not depend on the worker count.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ripchirp/construction.hpp"
#include "ripchirp/dense.hpp"
#include "ripchirp/rng.hpp"

namespace ripchirp {

using HermitianMatrix = ComplexMatrix;

inline constexpr std::size_t kMaxEigenDim = 64;
inline constexpr std::uint64_t kMaxExhaustiveSupports = 10'000'000;

struct EigenRange {
  double lambda_min = 0;
  double lambda_max = 0;
};

/// Cyclic Jacobi diagonalization of a small dense Hermitian matrix; returns
/// the eigenvalues in ascending order.
inline std::vector<double> hermitian_eigenvalues(HermitianMatrix h) {
  const std::size_t k = h.rows();
  if (k != h.cols()) throw Error(ErrorCode::NotHermitian, "matrix is not square");
  if (k > kMaxEigenDim) throw Error(ErrorCode::InvalidArgument, "eigen solver is limited to 64x64");
  double scale = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (std::abs(h(i, j) - std::conj(h(j, i))) > 1e-12) {
        throw Error(ErrorCode::NotHermitian, "H differs from its conjugate transpose");
      }
      scale = std::max(scale, std::abs(h(i, j)));
    }
  }
  for (std::size_t i = 0; i < k; ++i) h(i, i) = h(i, i).real();

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t q = p + 1; q < k; ++q) off += std::norm(h(p, q));
    if (std::sqrt(off) <= 1e-17 * std::max(scale, 1e-300)) break;

    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        const std::complex<double> hpq = h(p, q);
        const double r = std::abs(hpq);
        if (r == 0.0) continue;
        const std::complex<double> phase = hpq / r;
        const double app = h(p, p).real();
        const double aqq = h(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U = [[c, s], [-s conj(phase), c conj(phase)]] on coordinates (p, q)
        const std::complex<double> upp = c, upq = s;
        const std::complex<double> uqp = -s * std::conj(phase), uqq = c * std::conj(phase);
        for (std::size_t i = 0; i < k; ++i) {
          const auto hip = h(i, p), hiq = h(i, q);
          h(i, p) = hip * upp + hiq * uqp;
          h(i, q) = hip * upq + hiq * uqq;
        }
        for (std::size_t j = 0; j < k; ++j) {
          const auto hpj = h(p, j), hqj = h(q, j);
          h(p, j) = std::conj(upp) * hpj + std::conj(uqp) * hqj;
          h(q, j) = std::conj(upq) * hpj + std::conj(uqq) * hqj;
        }
        h(p, q) = h(q, p) = 0.0;
        h(p, p) = app - t * r;
        h(q, q) = aqq + t * r;
      }
    }
  }
  std::vector<double> eig(k);
  for (std::size_t i = 0; i < k; ++i) eig[i] = h(i, i).real();
  std::sort(eig.begin(), eig.end());
  return eig;
}

inline EigenRange extreme_eigenvalues(const HermitianMatrix& h) {
  const auto eig = hermitian_eigenvalues(h);
  if (eig.empty()) throw Error(ErrorCode::InvalidArgument, "empty matrix");
  return {eig.front(), eig.back()};
}

namespace detail {

inline void check_support(std::size_t cols, std::span<const std::size_t> support) {
  std::vector<std::size_t> sorted(support.begin(), support.end());
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.back() >= cols) throw Error(ErrorCode::IndexOutOfRange, "column index out of range");
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::DuplicateIndex, "support repeats a column");
  }
}

inline double support_delta(const HermitianMatrix& gram, std::span<const std::size_t> support) {
  HermitianMatrix sub(support.size(), support.size());
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = 0; j < support.size(); ++j) sub(i, j) = gram(support[i], support[j]);
  const auto range = extreme_eigenvalues(sub);
  return std::max(range.lambda_max - 1.0, 1.0 - range.lambda_min);
}

/// C(n, k), saturating at `cap + 1`.
inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(acc);
}

/// The rank-th k-subset of [0, n) in lexicographic order.
inline std::vector<std::size_t> unrank_combination(std::uint64_t rank, std::size_t n, std::size_t k) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < k; ++slot) {
    for (;; ++next) {
      const std::uint64_t with_next = binomial_capped(n - next - 1, k - slot - 1, ~std::uint64_t{0} - 1);
      if (rank < with_next) break;
      rank -= with_next;
    }
    out.push_back(next++);
  }
  return out;
}

inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

struct Candidate {
  double delta = -1.0;
  std::uint64_t index = 0;
  std::vector<std::size_t> support;

  void offer(double d, std::uint64_t i, std::span<const std::size_t> s) {
    if (d > delta || (d == delta && i < index)) {
      delta = d;
      index = i;
      support.assign(s.begin(), s.end());
    }
  }
};

template <typename Work>
Candidate parallel_max(std::uint64_t total, unsigned workers, Work&& work) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(total, 1))));
  std::vector<Candidate> partial(workers);
  {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = total * w / workers;
      const std::uint64_t end = total * (w + 1) / workers;
      threads.emplace_back([&, w, begin, end] { work(begin, end, partial[w]); });
    }
  }
  Candidate best;
  for (const auto& c : partial) {
    if (c.delta >= 0.0) best.offer(c.delta, c.index, c.support);
  }
  return best;
}

}  // namespace detail

/// G[i][j] = <u_{s_i}, u_{s_j}>.
template <typename T>
HermitianMatrix gram_submatrix(const DenseMatrix<T>& mat, std::span<const std::size_t> support) {
  detail::check_support(mat.cols(), support);
  HermitianMatrix g(support.size(), support.size());
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = 0; j < support.size(); ++j)
      g(i, j) = inner<T>(mat.column(support[i]), mat.column(support[j]));
  return g;
}

template <typename T>
HermitianMatrix gram_matrix(const DenseMatrix<T>& mat) {
  std::vector<std::size_t> all(mat.cols());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return gram_submatrix(mat, all);
}

enum class RicMethod { Exhaustive, Sampled };

inline std::string to_string(RicMethod m) { return m == RicMethod::Exhaustive ? "exhaustive" : "sampled"; }

struct RICEstimate {
  std::size_t k = 0;
  double delta_lower = 0;
  RicMethod method = RicMethod::Exhaustive;
  std::uint64_t supports_examined = 0;
  std::vector<std::size_t> extremal_support;
  std::optional<std::uint64_t> seed;
};

/// Exact delta_k over every k-column support.
template <typename T>
RICEstimate ric_exhaustive(const DenseMatrix<T>& mat, std::size_t k, unsigned workers = 1) {
  if (k < 1 || k > mat.cols()) throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= N");
  if (k > kMaxEigenDim) throw Error(ErrorCode::InvalidArgument, "k is limited to 64");
  const std::uint64_t total = detail::binomial_capped(mat.cols(), k, kMaxExhaustiveSupports);
  if (total > kMaxExhaustiveSupports) {
    throw Error(ErrorCode::TooManySupports, "C(" + std::to_string(mat.cols()) + ", " + std::to_string(k) +
                                                ") exceeds 10^7 supports");
  }
  const auto gram = gram_matrix(mat);
  const std::size_t n = mat.cols();
  auto best = detail::parallel_max(total, workers, [&](std::uint64_t begin, std::uint64_t end, detail::Candidate& out) {
    if (begin >= end) return;
    auto support = detail::unrank_combination(begin, n, k);
    for (std::uint64_t rank = begin; rank < end; ++rank) {
      out.offer(detail::support_delta(gram, support), rank, support);
      detail::next_combination(support, n);
    }
  });
  return {k, best.delta, RicMethod::Exhaustive, total, best.support, std::nullopt};
}

/// Lower bound on delta_k from `trials` seeded random supports.
template <typename T>
RICEstimate ric_sampled(const DenseMatrix<T>& mat, std::size_t k, std::uint64_t trials, std::uint64_t seed,
                        unsigned workers = 1) {
  if (k < 1 || k > mat.cols()) throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= N");
  if (k > kMaxEigenDim) throw Error(ErrorCode::InvalidArgument, "k is limited to 64");
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  const auto gram = gram_matrix(mat);
  const std::size_t n = mat.cols();
  auto best = detail::parallel_max(trials, workers, [&](std::uint64_t begin, std::uint64_t end, detail::Candidate& out) {
    for (std::uint64_t t = begin; t < end; ++t) {
      const auto support = CounterRng(seed, t).subset(n, k);
      out.offer(detail::support_delta(gram, support), t, support);
    }
  });
  return {k, best.delta, RicMethod::Sampled, trials, best.support, seed};
}

/// max over i != j of |<u_i, u_j>|.
template <typename T>
double coherence(const DenseMatrix<T>& mat) {
  if (mat.cols() < 2) throw Error(ErrorCode::InvalidArgument, "coherence needs at least two columns");
  double mu = 0.0;
  for (std::size_t i = 0; i < mat.cols(); ++i)
    for (std::size_t j = i + 1; j < mat.cols(); ++j)
      mu = std::max(mu, std::abs(inner<T>(mat.column(i), mat.column(j))));
  return mu;
}

struct FlatPairSum {
  std::complex<double> double_sum;  // sum_{i in J1} sum_{j in J2} <u_i, u_j>
  std::complex<double> aggregated;  // <sum_{J1} u, sum_{J2} u>
};

/// Both evaluations of the flat pair sum over disjoint column sets.
template <typename T>
FlatPairSum flat_pair_sum(const DenseMatrix<T>& mat, std::span<const std::size_t> J1,
                          std::span<const std::size_t> J2) {
  detail::check_support(mat.cols(), J1);
  detail::check_support(mat.cols(), J2);
  for (std::size_t i : J1) {
    if (std::find(J2.begin(), J2.end(), i) != J2.end()) {
      throw Error(ErrorCode::OverlappingSets, "J1 and J2 share column " + std::to_string(i));
    }
  }
  FlatPairSum res{};
  for (std::size_t i : J1)
    for (std::size_t j : J2) res.double_sum += std::complex<double>(inner<T>(mat.column(i), mat.column(j)));
  std::vector<T> v1(mat.rows(), T{}), v2(mat.rows(), T{});
  for (std::size_t i : J1)
    for (std::size_t x = 0; x < mat.rows(); ++x) v1[x] += mat(x, i);
  for (std::size_t j : J2)
    for (std::size_t x = 0; x < mat.rows(); ++x) v2[x] += mat(x, j);
  res.aggregated = inner<T>(v1, v2);
  return res;
}

inline FlatPairSum flat_pair_sum(const ChirpMatrix& mat, std::span<const std::size_t> J1,
                                 std::span<const std::size_t> J2) {
  return flat_pair_sum(mat.materialize(), J1, J2);
}

/// Entries +-1/sqrt(n), signs from the top bit of CounterRng(seed, 0) in
/// column-major order.
inline RealMatrix bernoulli_matrix(std::size_t n, std::size_t N, std::uint64_t seed) {
  if (n < 1 || N < 1) throw Error(ErrorCode::InvalidArgument, "n and N must be positive");
  RealMatrix out(n, N);
  CounterRng rng(seed, 0);
  const double mag = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& d : out.data()) d = (rng.next() >> 63) ? -mag : mag;
  return out;
}

}  // namespace ripchirp
