#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "ripchirp/construction.hpp"
#include "ripchirp/ric.hpp"

using namespace ripchirp;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

std::vector<u64> elems(const ResidueSet& s) { return s.elements(); }

}  // namespace

TEST(Params, ToyValuesForP101) {
  const auto params = ConstructionParams::make(PrimeModulus(101), 2);
  EXPECT_DOUBLE_EQ(params.alpha, 0.25);
  EXPECT_DOUBLE_EQ(params.beta, 1.0 / 4.02);
  EXPECT_EQ(params.r, 1u);  // floor(log2(101)/4.02) = floor(1.6563)
  ASSERT_TRUE(params.M.has_value());
  EXPECT_EQ(*params.M, 8u);  // floor(2^3.02)
  EXPECT_FALSE(params.strict);
}

TEST(Params, StrictModeRequiresLargeEvenM) {
  EXPECT_THROW(ConstructionParams::make(PrimeModulus(101), 3), Error);
  EXPECT_THROW(ConstructionParams::make(PrimeModulus(101), 2, true), Error);
  const auto strict = ConstructionParams::make(PrimeModulus(101), 7586, true);
  EXPECT_FALSE(strict.M.has_value());
  EXPECT_NEAR(strict.log2M, 15246.86, 1e-9);
  EXPECT_EQ(code_of([&] { build_set_B(strict); }), ErrorCode::Overflow);
}

TEST(SetA, Examples) {
  EXPECT_EQ(elems(build_set_A(PrimeModulus(101), 2)), (std::vector<u64>{1, 2, 3}));
  EXPECT_EQ(code_of([] { build_set_A(PrimeModulus(5), 2); }), ErrorCode::DegenerateSet);
  const auto big = build_set_A(PrimeModulus((u64{1} << 40) + 15), 2);
  EXPECT_EQ(big.size(), 1024u);
  EXPECT_EQ(big.max(), 1024u);
}

TEST(SetB, Examples) {
  EXPECT_EQ(elems(build_set_B(PrimeModulus(101), 2)), (std::vector<u64>{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(elems(build_set_B_explicit(4, 2, PrimeModulus(4001))),
            (std::vector<u64>{0, 1, 2, 3, 8, 9, 10, 11, 16, 17, 18, 19, 24, 25, 26, 27}));
  EXPECT_EQ(elems(build_set_B_explicit(2, 1, PrimeModulus(101))), (std::vector<u64>{0, 1}));
}

TEST(SetB, ExplicitDigitConstruction) {
  const auto B = build_set_B_explicit(4, 3, PrimeModulus(4001));
  EXPECT_EQ(B.size(), 64u);
  EXPECT_EQ(B.max(), 219u);  // 3 + 3*8 + 3*64
  EXPECT_EQ(elems(build_set_B_explicit(2, 2, PrimeModulus(101))), (std::vector<u64>{0, 1, 4, 5}));
  EXPECT_EQ(code_of([] { build_set_B_explicit(4, 3, PrimeModulus(101)); }), ErrorCode::Overflow);
  EXPECT_EQ(code_of([] { build_set_B_explicit(4, 0, PrimeModulus(101)); }), ErrorCode::DegenerateSet);
}

TEST(SetB, SizeAndMaxMatchFormula) {
  for (u64 M : {2u, 3u, 4u, 5u}) {
    for (u64 r : {1u, 2u, 3u}) {
      const auto top = max_B_element(M, r);
      ASSERT_TRUE(top);
      const u64 p = find_prime_in_interval(2 * *top + 1, 4 * *top + 10);
      const auto B = build_set_B_explicit(M, r, PrimeModulus(p));
      EXPECT_EQ(B.size(), static_cast<std::size_t>(std::pow(M, r)));
      EXPECT_EQ(B.max(), *top);
      EXPECT_TRUE(B.contains(0));
    }
  }
}

// |A||B| sits between p^(1+1/(402m)) and that power divided by 2^(2.01m),
// corrected by (M / 2^(2.01m-1))^r for the floor in M. The lower constant
// depends on m: the floor in r alone can cost a factor close to M.
TEST(SetSizes, ProductWithinConstantOfPredictedPower) {
  for (u64 q : {101u, 257u, 4001u, 10007u, 40009u, 65537u, 1000003u}) {
    for (u64 m : {2u, 4u}) {
      const PrimeModulus p(q);
      try {
        const auto params = ConstructionParams::make(p, m);
        const auto A = build_set_A(p, m);
        const auto B = build_set_B(params);
        const double product = static_cast<double>(A.size() * B.size());
        const double predicted = std::pow(static_cast<double>(q), 1.0 + 1.0 / (402.0 * m));
        const double floor_loss =
            std::pow(static_cast<double>(*params.M) / std::exp2(params.log2M), static_cast<double>(params.r));
        EXPECT_GE(product, predicted * floor_loss / std::exp2(2.01 * m)) << q << " m=" << m;
        EXPECT_LE(product, predicted) << q << " m=" << m;
        EXPECT_LT(2 * B.max(), q);
      } catch (const Error& e) {
        EXPECT_TRUE(e.code() == ErrorCode::DegenerateSet || e.code() == ErrorCode::Overflow) << e.what();
      }
    }
  }
}

TEST(Column, Examples) {
  const PrimeModulus p(5);
  for (const auto& z : column(p, 0, 0)) EXPECT_NEAR(std::abs(z - 1.0 / std::sqrt(5.0)), 0.0, 1e-15);
  const auto u10 = column(p, 1, 0), u11 = column(p, 1, 1), u20 = column(p, 2, 0);
  EXPECT_LT(std::abs(inner<std::complex<double>>(u10, u11)), 1e-12);
  const double expected = std::abs(gauss_sum_bruteforce(p, 4, 0)) / 5.0;
  EXPECT_NEAR(std::abs(inner<std::complex<double>>(u10, u20)), expected, 1e-12);
  EXPECT_NEAR(std::abs(inner<std::complex<double>>(u10, u20)), 1.0 / std::sqrt(5.0), 1e-9);
}

TEST(Column, UnitNorm) {
  const RootTable roots{PrimeModulus(257)};
  for (u64 a = 0; a < 257; a += 13) {
    for (u64 b = 0; b < 257; b += 17) {
      const auto u = column(roots, a, b);
      EXPECT_NEAR(std::real(inner<std::complex<double>>(u, u)), 1.0, 1e-10);
    }
  }
}

TEST(SelectPrime, Examples) {
  EXPECT_EQ(select_prime_for_k(100, 0.0).value(), 10007u);
  EXPECT_EQ(select_prime_for_k(2, 0.0).value(), 5u);
  EXPECT_EQ(code_of([] { select_prime_for_k(10'000'000'000ULL, 0.0); }), ErrorCode::RangeTooLarge);
  const u64 p = select_prime_for_k(1000, 0.01).value();
  const double lo = std::pow(1000.0, 1.99);
  EXPECT_GE(static_cast<double>(p), lo);
  EXPECT_LE(static_cast<double>(p), 2 * lo);
}

TEST(Capacity, Examples) {
  const PrimeModulus p(101);
  const auto rep = capacity_check(p, 2, 1.0 / 807.0, 24);
  EXPECT_EQ(rep.capacity, 24u);
  EXPECT_TRUE(rep.N_within_capacity);
  EXPECT_TRUE(rep.eps_ok);
  EXPECT_TRUE(rep.N_below_power);
  EXPECT_TRUE(capacity_check(p, 2, 1.0 / (403.0 * 2), 24).eps_ok);
  EXPECT_FALSE(capacity_check(p, 2, 0.01, 24).eps_ok);
  EXPECT_EQ(code_of([] { capacity_check(PrimeModulus(5), 2, 0.0, 1); }), ErrorCode::DegenerateSet);
}

TEST(BuildMatrix, LexicographicColumns) {
  const auto params = ConstructionParams::make(PrimeModulus(101), 2);
  const auto mat = build_matrix(params, 24);
  ASSERT_EQ(mat.cols(), 24u);
  EXPECT_EQ(mat.rows(), 101u);
  std::size_t j = 0;
  for (u64 a = 1; a <= 3; ++a)
    for (u64 b = 0; b < 8; ++b) EXPECT_EQ(mat.columns()[j++], std::make_pair(a, b));
  EXPECT_EQ(code_of([&] { build_matrix(params, 25); }), ErrorCode::CapacityExceeded);
  const auto single = build_matrix(params, 1);
  ASSERT_EQ(single.cols(), 1u);
  EXPECT_EQ(single.columns()[0], std::make_pair(u64{1}, u64{0}));
}

TEST(BuildMatrix, DeterministicAndUnitNorm) {
  const auto params = ConstructionParams::make(PrimeModulus(257), 2);
  const auto a = build_matrix(params, 32);
  const auto b = build_matrix(params, 32);
  EXPECT_EQ(a.columns(), b.columns());
  EXPECT_EQ(a.materialize(), b.materialize());
  const auto dense = a.materialize();
  for (std::size_t j = 0; j < dense.cols(); ++j) {
    EXPECT_NEAR(std::real(inner<std::complex<double>>(dense.column(j), dense.column(j))), 1.0, 1e-10);
  }
}

TEST(ChirpMatrix, RejectsDuplicateColumns) {
  EXPECT_EQ(code_of([] { ChirpMatrix(PrimeModulus(7), {{1, 2}, {1, 2}}); }), ErrorCode::DuplicateIndex);
}

TEST(Realify, BlockExamples) {
  ComplexMatrix i1(1, 1);
  i1(0, 0) = {0.0, 1.0};
  const auto ri = realify(i1);
  EXPECT_EQ(ri(0, 0), 0.0);
  EXPECT_EQ(ri(0, 1), 1.0);
  EXPECT_EQ(ri(1, 0), -1.0);
  EXPECT_EQ(ri(1, 1), 0.0);
  ComplexMatrix one(1, 1);
  one(0, 0) = 1.0;
  const auto r1 = realify(one);
  EXPECT_EQ(r1(0, 0), 1.0);
  EXPECT_EQ(r1(0, 1), 0.0);
  EXPECT_EQ(r1(1, 0), 0.0);
  EXPECT_EQ(r1(1, 1), 1.0);
}

TEST(Realify, PreservesNormsOfImages) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + gen() % 8, N = 1 + gen() % 8;
    ComplexMatrix phi(n, N);
    for (auto& z : phi.data()) z = {gauss(gen), gauss(gen)};
    std::vector<std::complex<double>> z(N);
    for (auto& x : z) x = {gauss(gen), gauss(gen)};
    const auto lhs = multiply<double>(realify(phi), realify_vector(z));
    const auto rhs = multiply<std::complex<double>>(phi, z);
    double l = 0, r = 0;
    for (double d : lhs) l += d * d;
    for (auto c : rhs) r += std::norm(c);
    EXPECT_NEAR(l, r, 1e-10 * std::max(1.0, r));
  }
}

TEST(Realify, DoesNotIncreaseRic) {
  const auto chirp = build_matrix(ConstructionParams::make(PrimeModulus(101), 2), 24).materialize();
  const auto real = realify(chirp);
  for (std::size_t k = 1; k <= 2; ++k) {
    EXPECT_LE(ric_exhaustive(real, k).delta_lower, ric_exhaustive(chirp, k).delta_lower + 1e-9);
  }
}
