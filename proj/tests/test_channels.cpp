#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qinterf/channels.hpp"
#include "qinterf/errors.hpp"
#include "qinterf/gates.hpp"

using namespace qinterf;

namespace {

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::to_matrix(oracle::random_unitary(dim, rng));
}

ComplexMatrix exact_walsh(unsigned n) {
  return circuit_unitary(walsh_layer(std::vector<double>(n, std::numbers::pi / 4)));
}

} // namespace

TEST(KrausChannel, Validation) {
  EXPECT_THROW(KrausChannel({}), ArgumentError);
  EXPECT_THROW(KrausChannel({ComplexMatrix::identity(2), ComplexMatrix::identity(4)}), ShapeError);
  EXPECT_THROW(KrausChannel({ComplexMatrix::identity(2), ComplexMatrix::identity(2)}),
               ValidationError);
  const KrausChannel ch({ComplexMatrix::identity(4)});
  EXPECT_EQ(ch.size(), 1u);
  EXPECT_EQ(ch.completeness_deviation(), 0.0);
}

TEST(KrausChannel, ProbeCheckCatchesLargeIncompleteSets) {
  ComplexMatrix u = random_unitary(128, 8);
  EXPECT_NO_THROW(KrausChannel({u}));
  u(3, 7) += 1e-3;
  EXPECT_THROW(KrausChannel({u}), ValidationError);
}

TEST(PauliError, SingleQubitKraus) {
  const KrausChannel bf = pauli_error_kraus(ErrorKind::BitFlip, 0.3);
  ASSERT_EQ(bf.size(), 2u);
  EXPECT_NEAR(bf[0](0, 0).real(), std::sqrt(0.7), 1e-15);
  EXPECT_NEAR(bf[1](0, 1).real(), std::sqrt(0.3), 1e-15);
  const KrausChannel pf = pauli_error_kraus(ErrorKind::PhaseFlip, 0.3);
  EXPECT_NEAR(pf[1](1, 1).real(), -std::sqrt(0.3), 1e-15);
  EXPECT_EQ(pauli_error_kraus(ErrorKind::BitFlip, 0.0).size(), 1u);
  EXPECT_EQ(pauli_error_kraus(ErrorKind::BitFlip, 1.0).size(), 1u);
  EXPECT_THROW(pauli_error_kraus(ErrorKind::BitFlip, 1.5), ArgumentError);
}

TEST(PauliError, LayeredChannelMatchesTensorProducts) {
  const double p = 0.2;
  const ErrorModel model{ErrorKind::BitFlip, p, {0, 2}};
  const KrausChannel ch = layered_error_channel(3, model);
  ASSERT_EQ(ch.size(), 4u);
  const oracle::Mat id = oracle::Mat::eye(2);
  const oracle::Mat x = oracle::pauli_x();
  // Term order: bit b of the index <=> affected[b] flipped.
  const std::vector<oracle::Mat> expected = {
      oracle::tensor({id, id, id}), oracle::tensor({x, id, id}),
      oracle::tensor({id, id, x}), oracle::tensor({x, id, x})};
  const std::vector<double> weights = {(1 - p) * (1 - p), p * (1 - p), (1 - p) * p, p * p};
  for (std::size_t l = 0; l < 4; ++l) {
    oracle::Mat e = expected[l];
    for (auto &z : e.a)
      z *= std::sqrt(weights[l]);
    EXPECT_LT(oracle::max_diff(e, ch[l]), 1e-15) << l;
  }
}

TEST(PauliError, ModelValidation) {
  EXPECT_THROW(ErrorModel({ErrorKind::BitFlip, 0.1, {0, 0}}).validate(2), ArgumentError);
  EXPECT_THROW(ErrorModel({ErrorKind::BitFlip, 0.1, {3}}).validate(2), ArgumentError);
  EXPECT_THROW(ErrorModel({ErrorKind::BitFlip, -0.1, {0}}).validate(2), ArgumentError);
  std::vector<int> many(21);
  for (int i = 0; i < 21; ++i)
    many[static_cast<std::size_t>(i)] = i;
  EXPECT_THROW(ErrorModel({ErrorKind::BitFlip, 0.1, many}).validate(24), SizeError);
}

TEST(PauliError, TermCountAndZeroWeights) {
  for (unsigned nf = 0; nf <= 5; ++nf) {
    std::vector<int> affected(nf);
    for (unsigned q = 0; q < nf; ++q)
      affected[q] = static_cast<int>(q);
    const ErrorModel mid{ErrorKind::PhaseFlip, 0.4, affected};
    EXPECT_EQ(pauli_layer_terms(5, mid).size(), std::size_t{1} << nf);
    double total = 0.0;
    for (const PauliTerm &t : pauli_layer_terms(5, mid))
      total += t.weight;
    EXPECT_NEAR(total, 1.0, 1e-14);
    EXPECT_EQ(pauli_layer_terms(5, {ErrorKind::PhaseFlip, 0.0, affected}).size(), 1u);
    EXPECT_EQ(pauli_layer_terms(5, {ErrorKind::PhaseFlip, 1.0, affected}).size(), 1u);
  }
}

// Bit flips leave the uniform superposition untouched.
TEST(PauliError, BitFlipInvarianceOnUniformState) {
  for (unsigned n : {3u, 4u}) {
    const DensityMatrix rho = evolve_density(DensityMatrix::basis(std::size_t{1} << n, 0),
                                             exact_walsh(n));
    for (double p : {0.1, 0.5, 0.9})
      for (std::vector<int> affected : {std::vector<int>{0}, std::vector<int>{1, 2},
                                        std::vector<int>{0, 1, 2}}) {
        const DensityMatrix out =
            apply_channel(layered_error_channel(n, {ErrorKind::BitFlip, p, affected}), rho);
        EXPECT_LT(out.matrix().max_abs_diff(rho.matrix()), 1e-10);
      }
  }
}

TEST(PauliError, FullDephasingOfUniformState) {
  const DensityMatrix rho =
      evolve_density(DensityMatrix::basis(8, 0), exact_walsh(3));
  const DensityMatrix out =
      apply_channel(layered_error_channel(3, {ErrorKind::PhaseFlip, 0.5, {0, 1, 2}}), rho);
  EXPECT_LT(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(8).matrix()), 1e-14);
}

TEST(PauliSandwich, MaterializeMatchesExplicitSandwich) {
  const ComplexMatrix pre = random_unitary(8, 1);
  const ComplexMatrix post = random_unitary(8, 2);
  for (ErrorKind kind : {ErrorKind::BitFlip, ErrorKind::PhaseFlip}) {
    const ErrorModel model{kind, 0.3, {2, 0}};
    const PauliSandwich s(3, model, pre, post);
    const KrausChannel a = s.materialize();
    const KrausChannel b = sandwich(layered_error_channel(3, model), pre, post);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t l = 0; l < a.size(); ++l)
      EXPECT_LT(a[l].max_abs_diff(b[l]), 1e-13);
    const PauliSandwich no_pre(3, model, std::nullopt, post);
    const KrausChannel c = no_pre.materialize();
    const KrausChannel d =
        sandwich(layered_error_channel(3, model), ComplexMatrix::identity(8), post);
    for (std::size_t l = 0; l < c.size(); ++l)
      EXPECT_LT(c[l].max_abs_diff(d[l]), 1e-13);
  }
}

TEST(PauliSandwich, OutputStateMatchesChannelApplication) {
  const ComplexMatrix pre = random_unitary(8, 3);
  const ComplexMatrix post = random_unitary(8, 4);
  const PauliSandwich s(3, {ErrorKind::PhaseFlip, 0.25, {1, 2}}, pre, post);
  for (std::uint64_t k : {0u, 6u}) {
    const DensityMatrix expected = apply_channel(s.materialize(), DensityMatrix::basis(8, k));
    EXPECT_LT(s.output_state(k).matrix().max_abs_diff(expected.matrix()), 1e-13);
    const auto probs = s.output_probabilities(k);
    for (std::size_t i = 0; i < 8; ++i)
      EXPECT_NEAR(probs[i], expected.probabilities()[i], 1e-13);
  }
  EXPECT_THROW(PauliSandwich(3, {ErrorKind::PhaseFlip, 0.1, {0}}, pre, random_unitary(4, 1)),
               ArgumentError);
}

TEST(PauliStrings, LeftAndRightMultiplication) {
  const ComplexMatrix m = random_unitary(4, 9);
  const oracle::Mat x = oracle::pauli_x(), z = oracle::pauli_z(), id = oracle::Mat::eye(2);
  // mask 0b10 is qubit 0 on two qubits.
  const oracle::Mat xs = oracle::tensor({x, id});
  const oracle::Mat zs = oracle::tensor({z, id});
  const oracle::Mat om = oracle::from_matrix(m);
  EXPECT_LT(oracle::max_diff(oracle::mul(xs, om), pauli_string_times(ErrorKind::BitFlip, 0b10, m)),
            1e-15);
  EXPECT_LT(oracle::max_diff(oracle::mul(om, zs), times_pauli_string(m, ErrorKind::PhaseFlip, 0b10)),
            1e-15);
}
