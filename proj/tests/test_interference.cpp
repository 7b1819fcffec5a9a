#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "oracle.hpp"
#include "qinterf/channels.hpp"
#include "qinterf/errors.hpp"
#include "qinterf/gates.hpp"
#include "qinterf/interference.hpp"

using namespace qinterf;

namespace {

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::to_matrix(oracle::random_unitary(dim, rng));
}

// L Kraus operators cut from the first N columns of an LN x LN unitary.
std::vector<oracle::Mat> random_kraus(std::size_t dim, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const oracle::Mat v = oracle::random_unitary(dim * count, rng);
  std::vector<oracle::Mat> ops(count, oracle::Mat(dim));
  for (std::size_t l = 0; l < count; ++l)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t k = 0; k < dim; ++k)
        ops[l](i, k) = v(l * dim + i, k);
  return ops;
}

KrausChannel to_channel(const std::vector<oracle::Mat> &ops) {
  std::vector<ComplexMatrix> m;
  for (const auto &o : ops)
    m.push_back(oracle::to_matrix(o));
  return KrausChannel(std::move(m));
}

} // namespace

TEST(Ibits, Values) {
  EXPECT_EQ(ibits(1.0), 0.0);
  EXPECT_EQ(ibits(8.0), 3.0);
  EXPECT_EQ(ibits(0.0), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(ibits(-1e-12), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(make_report(4.0).ibits, 2.0);
}

TEST(UnitaryInterference, ReferenceValues) {
  EXPECT_NEAR(interference_unitary(perturbed_hadamard(std::numbers::pi / 4)).value, 1.0, 1e-15);
  EXPECT_EQ(interference_unitary(ComplexMatrix::identity(16)).value, 0.0);
  // Full Walsh on n qubits: N - 1.
  for (unsigned n = 1; n <= 6; ++n) {
    const ComplexMatrix w =
        circuit_unitary(walsh_layer(std::vector<double>(n, std::numbers::pi / 4)));
    EXPECT_NEAR(interference_unitary(w).value, std::ldexp(1.0, n) - 1, 1e-11);
  }
  // H(theta) gives 2 - 2(cos^4 + sin^4).
  for (double t : {0.1, 0.5, 1.3}) {
    const double c = std::cos(t), s = std::sin(t);
    EXPECT_NEAR(interference_unitary(perturbed_hadamard(t)).value,
                2 - 2 * (std::pow(c, 4) + std::pow(s, 4)), 1e-14);
  }
}

TEST(UnitaryInterference, MatchesOracleAndBounds) {
  for (std::size_t dim : {2u, 8u, 32u, 64u}) {
    std::mt19937_64 rng(dim);
    const oracle::Mat u = oracle::random_unitary(dim, rng);
    const double value = interference_unitary(oracle::to_matrix(u)).value;
    EXPECT_NEAR(value, oracle::interference(u), 1e-11);
    EXPECT_GE(value, 0.0);
    EXPECT_LE(value, static_cast<double>(dim) - 1 + 1e-12);
  }
}

// Row and column permutations and phases do not change I.
TEST(UnitaryInterference, PermutationAndPhaseInvariance) {
  const ComplexMatrix u = random_unitary(16, 21);
  std::vector<std::size_t> rows(16), cols(16);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::shuffle(rows.begin(), rows.end(), std::mt19937_64(1));
  std::shuffle(cols.begin(), cols.end(), std::mt19937_64(2));
  ComplexMatrix v(16, 16);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t k = 0; k < 16; ++k)
      v(i, k) = u(rows[i], cols[k]) * std::polar(1.0, 0.3 * static_cast<double>(i + 2 * k));
  EXPECT_NEAR(interference_unitary(u).value, interference_unitary(v).value, 1e-12);
}

TEST(KrausInterference, AllEvaluationPathsAgree) {
  for (auto [dim, count] : {std::pair<std::size_t, std::size_t>{2, 2}, {4, 3}, {8, 5}, {16, 2}}) {
    const auto ops = random_kraus(dim, count, 31 * dim + count);
    const KrausChannel ch = to_channel(ops);
    const double expected = oracle::kraus_interference(ops);
    EXPECT_NEAR(interference_kraus(ch).value, expected, 1e-10) << dim;
    EXPECT_NEAR(interference_kraus_naive(ch), expected, 1e-10) << dim;
    EXPECT_NEAR(interference_superoperator(superoperator_from_kraus(ch)).value, expected, 1e-10)
        << dim;
    EXPECT_GE(expected, -1e-12);
    EXPECT_LE(expected, static_cast<double>(dim) - 1 + 1e-10);
  }
}

TEST(KrausInterference, SingleOperatorReducesToUnitary) {
  const ComplexMatrix u = random_unitary(32, 5);
  EXPECT_NEAR(interference_kraus(KrausChannel({u})).value, interference_unitary(u).value, 1e-11);
}

TEST(KrausInterference, RejectsIncompleteChannels) {
  const ComplexMatrix half = 0.8 * ComplexMatrix::identity(4);
  EXPECT_THROW(interference_kraus(KrausChannel({half}, 1.0)), ValidationError);
}

TEST(Superoperator, ApplyMatchesKrausAndValidates) {
  const auto ops = random_kraus(4, 3, 77);
  const KrausChannel ch = to_channel(ops);
  const Superoperator p = superoperator_from_kraus(ch);
  const DensityMatrix rho = evolve_density(DensityMatrix::basis(4, 2), random_unitary(4, 8));
  EXPECT_LT(p.apply(rho.matrix()).max_abs_diff(apply_channel(ch, rho).matrix()), 1e-14);
  EXPECT_THROW(Superoperator(ComplexMatrix(6, 6)), ShapeError);
}

TEST(PauliSandwichInterference, FastPathMatchesMaterialized) {
  for (ErrorKind kind : {ErrorKind::BitFlip, ErrorKind::PhaseFlip})
    for (unsigned n : {2u, 3u, 4u}) {
      const std::size_t dim = std::size_t{1} << n;
      const ComplexMatrix pre = random_unitary(dim, 40 + n);
      const ComplexMatrix post = random_unitary(dim, 50 + n);
      std::vector<int> affected;
      for (unsigned q = 0; q < n; q += 2)
        affected.push_back(static_cast<int>(q));
      for (double p : {0.0, 0.2, 0.5, 1.0}) {
        const ErrorModel model{kind, p, affected};
        const PauliSandwich with_pre(n, model, pre, post);
        const PauliSandwich without(n, model, std::nullopt, post);
        EXPECT_NEAR(interference_kraus(with_pre).value,
                    interference_kraus(with_pre.materialize()).value, 1e-11);
        EXPECT_NEAR(interference_kraus(without).value,
                    interference_kraus(without.materialize()).value, 1e-11);
      }
    }
}

TEST(PauliSandwichInterference, OverPMatchesSingleP) {
  const ComplexMatrix pre = random_unitary(16, 61);
  const ComplexMatrix post = random_unitary(16, 62);
  const std::vector<double> ps = {0.0, 0.05, 0.3, 0.5, 0.9, 1.0};
  for (ErrorKind kind : {ErrorKind::BitFlip, ErrorKind::PhaseFlip}) {
    const PauliSandwich base(4, {kind, 0.7, {0, 1, 3}}, pre, post);
    const auto reports = interference_kraus_over_p(base, ps);
    ASSERT_EQ(reports.size(), ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const PauliSandwich at(4, {kind, ps[i], {0, 1, 3}}, pre, post);
      EXPECT_NEAR(reports[i].value, interference_kraus(at).value, 1e-11);
    }
  }
}

// W Z^m W = X^m: an even mixture of bit-flip permutations has no
// interference.
TEST(PauliSandwichInterference, PermutationMixtureHasNoInterference) {
  const ComplexMatrix w =
      circuit_unitary(walsh_layer(std::vector<double>(3, std::numbers::pi / 4)));
  const PauliSandwich s(3, {ErrorKind::PhaseFlip, 0.5, {0, 1, 2}}, w, w);
  EXPECT_NEAR(interference_kraus(s).value, 0.0, 1e-12);
  EXPECT_EQ(make_report(0.0).ibits, -std::numeric_limits<double>::infinity());
}
