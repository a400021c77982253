#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "ripchirp/modmath.hpp"

namespace ripchirp {

/// Sorted set of distinct residues modulo an odd prime.
class ResidueSet {
 public:
  /// Reduces every value mod p and removes duplicates.
  ResidueSet(PrimeModulus p, std::span<const u64> values) : p_(p) {
    elements_.reserve(values.size());
    for (u64 v : values) elements_.push_back(v % p.value());
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  }

  ResidueSet(PrimeModulus p, std::initializer_list<u64> values)
      : ResidueSet(p, std::span<const u64>(values.begin(), values.size())) {}

  /// {lo, ..., hi} as residues.
  static ResidueSet range(PrimeModulus p, u64 lo, u64 hi) {
    std::vector<u64> v;
    for (u64 x = lo; x <= hi; ++x) v.push_back(x);
    return ResidueSet(p, v);
  }

  const PrimeModulus& modulus() const noexcept { return p_; }
  const std::vector<u64>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  bool contains(u64 x) const { return std::binary_search(elements_.begin(), elements_.end(), x % p_.value()); }
  u64 max() const { return elements_.empty() ? 0 : elements_.back(); }

  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }

  friend bool operator==(const ResidueSet&, const ResidueSet&) = default;

 private:
  PrimeModulus p_;
  std::vector<u64> elements_;
};

inline void require_same_modulus(const ResidueSet& a, const ResidueSet& b) {
  if (a.modulus() != b.modulus()) {
    throw Error(ErrorCode::ModulusMismatch,
                "sets live modulo " + std::to_string(a.modulus().value()) + " and " +
                    std::to_string(b.modulus().value()));
  }
}

}  // namespace ripchirp
