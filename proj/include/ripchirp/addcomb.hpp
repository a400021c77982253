#pragma once

// Additive energies, sum/difference sets and dilates of residue sets, plus
// the empirical checkers for the sum-product energy bound, the small-energy
// condition on subsets of B, and Balog-Szemeredi-Gowers witnesses.

#include <bit>
#include <cmath>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ripchirp/residue_set.hpp"
#include "ripchirp/rng.hpp"

namespace ripchirp {

/// Moduli up to this size use a dense count table.
inline constexpr u64 kDenseCountLimit = u64{1} << 22;

struct EnergyCount {
  u64 value = 0;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
};

namespace detail {

template <typename Visit>
void for_each_representation_count(const ResidueSet& A, const ResidueSet& B, Visit&& visit) {
  const u64 p = A.modulus().value();
  if (p <= kDenseCountLimit) {
    std::vector<u64> counts(p, 0);
    for (u64 a : A)
      for (u64 b : B) ++counts[addmod(a, b, p)];
    for (u64 c : counts)
      if (c) visit(c);
  } else {
    std::unordered_map<u64, u64> counts;
    counts.reserve(A.size() * B.size());
    for (u64 a : A)
      for (u64 b : B) ++counts[addmod(a, b, p)];
    for (const auto& [s, c] : counts) visit(c);
  }
}

inline ResidueSet combine(const ResidueSet& A, const ResidueSet& B, bool subtract) {
  require_same_modulus(A, B);
  const u64 p = A.modulus().value();
  std::vector<u64> out;
  out.reserve(A.size() * B.size());
  for (u64 a : A)
    for (u64 b : B) out.push_back(subtract ? addmod(a, p - b, p) : addmod(a, b, p));
  return ResidueSet(A.modulus(), out);
}

}  // namespace detail

/// E(A, B) = #{a1 + b1 = a2 + b2}, by summing squared representation counts.
inline EnergyCount energy(const ResidueSet& A, const ResidueSet& B) {
  require_same_modulus(A, B);
  u128 total = 0;
  detail::for_each_representation_count(A, B, [&total](u64 c) { total += static_cast<u128>(c) * c; });
  if (total > ~u64{0}) throw Error(ErrorCode::Overflow, "energy exceeds 64 bits");
  return {static_cast<u64>(total), A.size(), B.size()};
}

inline ResidueSet sumset(const ResidueSet& A, const ResidueSet& B) { return detail::combine(A, B, false); }
inline ResidueSet difference_set(const ResidueSet& A, const ResidueSet& B) { return detail::combine(A, B, true); }

/// x . B = {x b}.
inline ResidueSet dilate(u64 x, const ResidueSet& B) {
  const u64 p = B.modulus().value();
  std::vector<u64> out;
  out.reserve(B.size());
  for (u64 b : B) out.push_back(mulmod(x % p, b, p));
  return ResidueSet(B.modulus(), out);
}

struct PropCResult {
  u64 lhs = 0;          // sum over b in B of E(A, b.A)
  double scale = 0;     // min(p/|A|, |B|)^(-c0) |A|^3 |B|
  double ratio = 0;     // lhs / scale
  double c0 = 0;
};

/// Sum over b in B of E(A, b . A), normalized by min(p/|A|, |B|)^(-c0) |A|^3 |B|.
inline PropCResult prop_c_sum(const ResidueSet& A, const ResidueSet& B, double c0) {
  require_same_modulus(A, B);
  if (B.contains(0)) throw Error(ErrorCode::ZeroInB, "0 must not belong to B");
  if (A.size() < B.size()) throw Error(ErrorCode::SizeOrderViolated, "requires |A| >= |B|");
  if (A.empty()) throw Error(ErrorCode::InvalidArgument, "A must be nonempty");
  PropCResult res;
  res.c0 = c0;
  for (u64 b : B) {
    const u64 e = energy(A, dilate(b, A)).value;
    if (res.lhs > ~u64{0} - e) throw Error(ErrorCode::Overflow, "energy sum exceeds 64 bits");
    res.lhs += e;
  }
  const double a = static_cast<double>(A.size());
  const double bsize = static_cast<double>(B.size());
  const double p = static_cast<double>(A.modulus().value());
  res.scale = std::pow(std::min(p / a, bsize), -c0) * a * a * a * bsize;
  res.ratio = static_cast<double>(res.lhs) / res.scale;
  return res;
}

struct EssResult {
  u64 energy = 0;
  std::size_t size = 0;
  double ratio = 0;          // E(S,S)/|S|^3
  double size_threshold = 0; // p^0.49
  bool large_enough = false; // |S| >= p^0.49

  /// E(S,S) <= c5 p^(-gamma) |S|^3.
  bool satisfies(double c5, double gamma, u64 p) const {
    return ratio <= c5 * std::pow(static_cast<double>(p), -gamma);
  }
};

inline EssResult ess_ratio(const ResidueSet& S) {
  if (S.empty()) throw Error(ErrorCode::InvalidArgument, "S must be nonempty");
  EssResult res;
  res.energy = energy(S, S).value;
  res.size = S.size();
  const double s = static_cast<double>(S.size());
  res.ratio = static_cast<double>(res.energy) / (s * s * s);
  res.size_threshold = std::pow(static_cast<double>(S.modulus().value()), 0.49);
  res.large_enough = s >= res.size_threshold;
  return res;
}

enum class BsgMode { Exhaustive, Random };

/// Exhaustive search enumerates subsets as bitmasks.
inline constexpr std::size_t kBsgExhaustiveMaxSize = 24;

struct BsgWitness {
  ResidueSet first;
  ResidueSet second;
  std::size_t difference_size = 0;
  double difference_cap = 0;  // K^c1 (|A'||B'|)^(1/2)
  double score = 0;           // difference_size / difference_cap, <= 1 for a witness
};

struct BsgSearchResult {
  double K = 0;           // |A|^3 / E(A, A)
  double size_floor = 0;  // |A| / K^c4
  u64 pairs_examined = 0;
  bool budget_exhausted = false;
  std::optional<BsgWitness> witness;
};

/// Looks for A', B' in A with |A'|,|B'| >= |A|/K^c4 and |A' - B'| <= K^c1 (|A'||B'|)^(1/2),
/// taking the remaining BSG constants as 1. Absence within the budget
/// is a result, not an error.
inline BsgSearchResult bsg_witness_search(const ResidueSet& A, double c1, double c4, u64 budget,
                                          BsgMode mode = BsgMode::Exhaustive, u64 seed = 0) {
  if (A.empty()) throw Error(ErrorCode::InvalidArgument, "A must be nonempty");
  const std::size_t n = A.size();
  if (mode == BsgMode::Exhaustive && n > kBsgExhaustiveMaxSize) {
    throw Error(ErrorCode::InvalidArgument, "exhaustive BSG search supports |A| <= 24");
  }
  BsgSearchResult res;
  const double size = static_cast<double>(n);
  res.K = size * size * size / static_cast<double>(energy(A, A).value);
  res.size_floor = size / std::pow(res.K, c4);
  const double k_pow = std::pow(res.K, c1);
  const std::size_t min_size =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(res.size_floor - 1e-12)));

  const auto& elems = A.elements();
  auto pick = [&](std::uint32_t mask) {
    std::vector<u64> v;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) v.push_back(elems[i]);
    return ResidueSet(A.modulus(), v);
  };
  auto consider = [&](const ResidueSet& X, const ResidueSet& Y) {
    ++res.pairs_examined;
    const std::size_t diff = difference_set(X, Y).size();
    const double cap = k_pow * std::sqrt(static_cast<double>(X.size()) * static_cast<double>(Y.size()));
    const double score = static_cast<double>(diff) / cap;
    if (score <= 1.0 && (!res.witness || score < res.witness->score)) {
      res.witness = BsgWitness{X, Y, diff, cap, score};
    }
  };

  if (min_size > n) return res;
  if (mode == BsgMode::Exhaustive) {
    const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1u;
    for (std::uint32_t x = full; x >= 1; --x) {
      if (static_cast<std::size_t>(std::popcount(x)) < min_size) continue;
      const auto X = pick(x);
      for (std::uint32_t y = x; y >= 1; --y) {
        if (static_cast<std::size_t>(std::popcount(y)) < min_size) continue;
        if (res.pairs_examined >= budget) {
          res.budget_exhausted = true;
          return res;
        }
        consider(X, pick(y));
      }
    }
    return res;
  }

  for (u64 trial = 0; trial < budget; ++trial) {
    CounterRng rng(seed, trial);
    auto draw = [&] {
      const std::size_t k = min_size + static_cast<std::size_t>(rng.uniform(n - min_size + 1));
      std::vector<u64> v;
      for (std::size_t i : rng.subset(n, k)) v.push_back(elems[i]);
      return ResidueSet(A.modulus(), v);
    };
    const auto X = draw();
    const auto Y = draw();
    consider(X, Y);
  }
  res.budget_exhausted = true;
  return res;
}

}  // namespace ripchirp
