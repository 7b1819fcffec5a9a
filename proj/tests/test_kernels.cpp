#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "qinterf/kernels.hpp"

using namespace qinterf;

namespace {

std::vector<Complex> random_block(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> v(count);
  for (auto &z : v)
    z = {g(rng), g(rng)};
  return v;
}

double max_diff(const std::vector<Complex> &a, const std::vector<Complex> &b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Large enough to cross the parallel threshold.
constexpr unsigned kN = 8;
constexpr std::size_t kRows = std::size_t{1} << kN;
constexpr std::size_t kCols = 96;

} // namespace

TEST(BitHelpers, QubitZeroIsMostSignificant) {
  EXPECT_EQ(qubit_shift(0, 3), 2u);
  EXPECT_EQ(qubit_shift(2, 3), 0u);
  const std::vector<int> targets = {2, 0};
  // row 0b101 on 3 qubits: qubit 0 = 1, qubit 2 = 1.
  EXPECT_EQ(gather_bits(0b101, targets, 3), 0b11u);
  EXPECT_EQ(gather_bits(0b100, targets, 3), 0b01u);
  EXPECT_EQ(gather_bits(0b001, targets, 3), 0b10u);
  EXPECT_EQ(scatter_bits(0b010, 0b10, targets, 3), 0b011u);
  for (std::uint64_t r = 0; r < 8; ++r)
    for (std::uint64_t l = 0; l < 4; ++l)
      EXPECT_EQ(gather_bits(scatter_bits(r, l, targets, 3), targets, 3), l);
}

TEST(Kernels, OneQubitSerialMatchesParallelAndOracle) {
  const Complex g[4] = {{0.6, 0.1}, {0.2, -0.3}, {-0.1, 0.5}, {0.7, 0.0}};
  for (int q = 0; q < static_cast<int>(kN); ++q) {
    auto a = random_block(kRows * kCols, 7 + q);
    auto b = a;
    kernels::serial::apply_1q({a, kRows, kCols}, kN, q, g);
    kernels::parallel::apply_1q({b, kRows, kCols}, kN, q, g);
    EXPECT_EQ(max_diff(a, b), 0.0);
  }
  // Against an explicit tensor product on 3 qubits.
  oracle::Mat m(2);
  m(0, 0) = g[0];
  m(0, 1) = g[1];
  m(1, 0) = g[2];
  m(1, 1) = g[3];
  const oracle::Mat id = oracle::Mat::eye(2);
  const oracle::Mat full = oracle::tensor({id, m, id});
  std::vector<Complex> eye(64, 0.0);
  for (std::size_t i = 0; i < 8; ++i)
    eye[i * 8 + i] = 1.0;
  kernels::serial::apply_1q({eye, 8, 8}, 3, 1, g);
  EXPECT_LT(oracle::max_diff(full, ComplexMatrix(8, 8, eye)), 1e-15);
}

TEST(Kernels, DenseDiagonalPermutationSerialMatchesParallel) {
  const std::vector<int> targets = {5, 1, 3};
  const auto gate = random_block(64, 3);
  auto a = random_block(kRows * kCols, 11);
  auto b = a;
  kernels::serial::apply_dense({a, kRows, kCols}, kN, targets, gate);
  kernels::parallel::apply_dense({b, kRows, kCols}, kN, targets, gate);
  EXPECT_EQ(max_diff(a, b), 0.0);

  const auto diag = random_block(8, 5);
  kernels::serial::apply_diagonal({a, kRows, kCols}, kN, targets, diag);
  kernels::parallel::apply_diagonal({b, kRows, kCols}, kN, targets, diag);
  EXPECT_EQ(max_diff(a, b), 0.0);

  std::vector<std::uint64_t> map(8);
  std::iota(map.begin(), map.end(), 0);
  std::shuffle(map.begin(), map.end(), std::mt19937_64(9));
  std::vector<Complex> oa(a.size()), ob(b.size());
  kernels::serial::apply_permutation({a, kRows, kCols}, {oa, kRows, kCols}, kN, targets, map);
  kernels::parallel::apply_permutation({b, kRows, kCols}, {ob, kRows, kCols}, kN, targets, map);
  EXPECT_EQ(max_diff(oa, ob), 0.0);
}

TEST(Kernels, DenseOnSingleTargetEqualsOneQubit) {
  const Complex g[4] = {{0.0, 1.0}, {0.5, 0.0}, {0.25, 0.25}, {-1.0, 0.0}};
  const std::vector<int> t = {4};
  auto a = random_block(kRows * 4, 2);
  auto b = a;
  kernels::serial::apply_1q({a, kRows, 4}, kN, 4, g);
  kernels::serial::apply_dense({b, kRows, 4}, kN, t, std::span<const Complex>(g, 4));
  EXPECT_LT(max_diff(a, b), 1e-15);
}

TEST(Kernels, MatmulSerialMatchesParallelAndOracle) {
  const std::size_t n = 160;
  const auto a = random_block(n * n, 1);
  const auto b = random_block(n * n, 2);
  std::vector<Complex> c1(n * n), c2(n * n);
  kernels::serial::matmul(a, b, c1, n, n, n);
  kernels::parallel::matmul(a, b, c2, n, n, n);
  EXPECT_LT(max_diff(c1, c2), 1e-12);

  oracle::Mat x(16), y(16);
  x.a.assign(a.begin(), a.begin() + 256);
  y.a.assign(b.begin(), b.begin() + 256);
  std::vector<Complex> c3(256);
  kernels::serial::matmul(x.a, y.a, c3, 16, 16, 16);
  EXPECT_LT(oracle::max_diff(oracle::mul(x, y), ComplexMatrix(16, 16, c3)), 1e-12);
}

TEST(Kernels, RectangularMatmul) {
  const auto a = random_block(3 * 5, 4);
  const auto b = random_block(5 * 2, 6);
  std::vector<Complex> c(6), d(6);
  kernels::serial::matmul(a, b, c, 3, 5, 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 5; ++k)
        d[i * 2 + j] += a[i * 5 + k] * b[k * 2 + j];
  EXPECT_LT(max_diff(c, d), 1e-13);
}

TEST(Kernels, ReductionsAreThreadCountIndependent) {
  const auto a = random_block(512 * 512, 8);
  const double serial = kernels::serial::sum_abs4({a, 512, 512});
  const int saved = num_threads();
  for (int t : {1, 2, 8}) {
    set_num_threads(t);
    EXPECT_EQ(kernels::parallel::sum_abs4({a, 512, 512}), kernels::parallel::sum_abs4({a, 512, 512}));
    EXPECT_NEAR(kernels::parallel::sum_abs4({a, 512, 512}), serial, 1e-9 * serial);
  }
  set_num_threads(saved);
}

TEST(Kernels, KrausTermsGramNaiveParallelAgree) {
  const std::size_t dim = 32;
  std::vector<std::vector<Complex>> ops;
  for (int l = 0; l < 5; ++l)
    ops.push_back(random_block(dim * dim, 100 + l));
  std::vector<const Complex *> ptrs;
  for (const auto &o : ops)
    ptrs.push_back(o.data());
  const double naive = kernels::serial::kraus_first_term_naive(ptrs, dim);
  const double gram = kernels::serial::kraus_first_term_gram(ptrs, dim);
  const double pgram = kernels::parallel::kraus_first_term_gram(ptrs, dim);
  EXPECT_NEAR(gram, naive, 1e-9 * naive);
  EXPECT_NEAR(pgram, gram, 1e-12 * gram);
  EXPECT_NEAR(kernels::parallel::kraus_second_term(ptrs, dim),
              kernels::serial::kraus_second_term(ptrs, dim), 1e-12);
}
