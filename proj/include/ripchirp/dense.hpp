#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "ripchirp/error.hpp"

namespace ripchirp {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename T>
constexpr T conj_if_complex(const T& x) {
  if constexpr (is_complex<T>::value) {
    return std::conj(x);
  } else {
    return x;
  }
}

/// Column-major dense matrix.
template <typename T>
class DenseMatrix {
 public:
  using value_type = T;

  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<T> column(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const T> column(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = DenseMatrix<std::complex<double>>;
using RealMatrix = DenseMatrix<double>;

/// <u, v> = sum_x u_x conj(v_x).
template <typename T>
T inner(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) throw Error(ErrorCode::InvalidArgument, "inner product of unequal lengths");
  T acc{};
  for (std::size_t x = 0; x < u.size(); ++x) acc += u[x] * conj_if_complex(v[x]);
  return acc;
}

template <typename T>
std::vector<T> multiply(const DenseMatrix<T>& a, std::span<const T> v) {
  if (v.size() != a.cols()) throw Error(ErrorCode::InvalidArgument, "dimension mismatch in multiply");
  std::vector<T> out(a.rows(), T{});
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (v[j] == T{}) continue;
    const auto col = a.column(j);
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] += col[i] * v[j];
  }
  return out;
}

inline ComplexMatrix to_complex(const RealMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t k = 0; k < m.data().size(); ++k) out.data()[k] = m.data()[k];
  return out;
}

}  // namespace ripchirp
