#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "qinterf/linalg.hpp"

namespace qinterf {

// [[cos t, sin t], [sin t, -cos t]]; t = pi/4 is the Hadamard gate,
// t = 0 is sigma_z and t = pi/2 is sigma_x.
struct PerturbedHadamard {
  double theta;
  int qubit;
};

struct PauliX {
  int qubit;
};

struct PauliZ {
  int qubit;
};

// diag(1, 1, 1, e^{i phi}); symmetric in control and target.
struct ControlledPhase {
  double phi;
  int control;
  int target;
};

// Basis permutation on `targets`: local index k -> map[k].
class PermutationGate {
public:
  PermutationGate(std::vector<int> targets, std::vector<std::uint64_t> map);
  const std::vector<int> &targets() const { return targets_; }
  const std::vector<std::uint64_t> &map() const { return map_; }

private:
  std::vector<int> targets_;
  std::vector<std::uint64_t> map_;
};

// Diagonal +-1 phases indexed by the local basis index on `targets`.
class DiagonalPhaseGate {
public:
  DiagonalPhaseGate(std::vector<int> targets, std::vector<std::int8_t> signs);
  const std::vector<int> &targets() const { return targets_; }
  const std::vector<std::int8_t> &signs() const { return signs_; }

private:
  std::vector<int> targets_;
  std::vector<std::int8_t> signs_;
};

// Arbitrary unitary on `targets`, checked at kUnitaryTol.
class RawUnitary {
public:
  RawUnitary(std::vector<int> targets, ComplexMatrix matrix);
  const std::vector<int> &targets() const { return targets_; }
  const ComplexMatrix &matrix() const { return matrix_; }

private:
  std::vector<int> targets_;
  ComplexMatrix matrix_;
};

using Gate = std::variant<PerturbedHadamard, PauliX, PauliZ, ControlledPhase,
                          PermutationGate, DiagonalPhaseGate, RawUnitary>;

std::vector<int> gate_targets(const Gate &gate);
// Dense 2^k x 2^k matrix of the gate on its own targets.
ComplexMatrix gate_matrix(const Gate &gate);

// Ordered gate list on n qubits. Gates are stored symbolically.
class Circuit {
public:
  explicit Circuit(unsigned n);

  unsigned num_qubits() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  const std::vector<Gate> &ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }

  Circuit &add(Gate gate);
  // Appends `other`, relabeling its qubit q as q + offset.
  Circuit &append(const Circuit &other, int offset = 0);

private:
  unsigned n_;
  std::vector<Gate> ops_;
};

ComplexMatrix perturbed_hadamard(double theta);

// One perturbed Hadamard per qubit, in ascending qubit order.
Circuit walsh_layer(std::span<const double> thetas);

inline std::size_t qft_phase_count(unsigned m) { return m * (m - 1) / 2; }

// QFT on m qubits with F[j][k] = exp(2 pi i jk / 2^m) / sqrt(2^m) when
// unperturbed. For j = 0..m-1: H(theta_j) on j, then ControlledPhase with
// angle pi/2^d + delta between j and j+d for d = 1..m-1-j. The deltas are
// consumed in that (j, d) order. A final bit-reversal permutation restores
// the output ordering.
Circuit qft_circuit(unsigned m, std::span<const double> phase_perturbations);
Circuit qft_circuit(unsigned m, std::span<const double> hadamard_thetas,
                    std::span<const double> phase_perturbations);

// Applies one gate to every row-block column (x <- G x).
void apply_gate(const Gate &gate, unsigned n, kernels::RowBlock x,
                std::vector<Complex> &scratch);

// m <- C m, with m a 2^n-row block.
void apply_circuit(const Circuit &c, ComplexMatrix &m);

ComplexMatrix circuit_unitary(const Circuit &c);
StateVector circuit_apply(const Circuit &c, const StateVector &psi);

} // namespace qinterf
