#pragma once

// CHIRP1 binary matrix format:
//   bytes 0-5   "CHIRP1"
//   byte  6     1 = complex, 0 = real
//   bytes 7-14  n (u64 little-endian)
//   bytes 15-22 N (u64 little-endian)
//   then column-major binary64 little-endian entries (complex: re, im).

#include <array>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <variant>

#include "ripchirp/dense.hpp"

namespace ripchirp {

inline constexpr std::array<char, 6> kChirpMagic = {'C', 'H', 'I', 'R', 'P', '1'};

using StoredMatrix = std::variant<ComplexMatrix, RealMatrix>;

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

inline std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw Error(ErrorCode::Format, "truncated CHIRP1 stream");
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

inline void put_f64(std::ostream& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }
inline double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace detail

inline void write_chirp1(std::ostream& out, const ComplexMatrix& mat) {
  out.write(kChirpMagic.data(), kChirpMagic.size());
  out.put(1);
  detail::put_u64(out, mat.rows());
  detail::put_u64(out, mat.cols());
  for (const auto& z : mat.data()) {
    detail::put_f64(out, z.real());
    detail::put_f64(out, z.imag());
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing CHIRP1 stream");
}

inline void write_chirp1(std::ostream& out, const RealMatrix& mat) {
  out.write(kChirpMagic.data(), kChirpMagic.size());
  out.put(0);
  detail::put_u64(out, mat.rows());
  detail::put_u64(out, mat.cols());
  for (double d : mat.data()) detail::put_f64(out, d);
  if (!out) throw Error(ErrorCode::Io, "failed writing CHIRP1 stream");
}

inline StoredMatrix read_chirp1(std::istream& in) {
  std::array<char, 6> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kChirpMagic) {
    throw Error(ErrorCode::Format, "missing CHIRP1 magic");
  }
  const int flag = in.get();
  if (flag != 0 && flag != 1) throw Error(ErrorCode::Format, "bad CHIRP1 type flag");
  const std::uint64_t n = detail::get_u64(in);
  const std::uint64_t N = detail::get_u64(in);
  if (n != 0 && N > (std::uint64_t{1} << 40) / n) throw Error(ErrorCode::Format, "implausible CHIRP1 dimensions");
  if (flag == 1) {
    ComplexMatrix mat(n, N);
    for (auto& z : mat.data()) {
      const double re = detail::get_f64(in);
      const double im = detail::get_f64(in);
      z = {re, im};
    }
    return mat;
  }
  RealMatrix mat(n, N);
  for (auto& d : mat.data()) d = detail::get_f64(in);
  return mat;
}

template <typename Matrix>
void save_chirp1(const std::filesystem::path& path, const Matrix& mat) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  write_chirp1(out, mat);
}

inline StoredMatrix load_chirp1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_chirp1(in);
}

/// Real matrices are promoted with zero imaginary part.
inline ComplexMatrix as_complex(const StoredMatrix& stored) {
  if (const auto* c = std::get_if<ComplexMatrix>(&stored)) return *c;
  return to_complex(std::get<RealMatrix>(stored));
}

}  // namespace ripchirp
