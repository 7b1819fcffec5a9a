#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qinterf/channels.hpp"
#include "qinterf/gates.hpp"

namespace qinterf {

// Search for one marked item alpha among 2^n.
struct GroverSpec {
  unsigned n = 4;
  std::uint64_t alpha = 0;
  std::optional<unsigned> k_override;

  void validate() const;
  unsigned iterations() const;
  std::size_t dim() const { return std::size_t{1} << n; }
  // n for the initial layer plus 2n per iteration.
  std::size_t hadamard_count() const;
};

// Order finding for f(x) = a^x mod R. Register 1 holds 2L qubits (qubits
// 0..2L-1), register 2 holds L qubits (qubits 2L..3L-1).
struct ShorSpec {
  unsigned L = 2;
  std::uint64_t R = 3;
  std::uint64_t a = 2;

  // Derives L = floor(log2 R) + 1.
  static ShorSpec make(std::uint64_t R, std::uint64_t a);
  void validate() const;
  unsigned num_qubits() const { return 3 * L; }
  unsigned first_register() const { return 2 * L; }
  std::size_t dim() const { return std::size_t{1} << num_qubits(); }
};

// An algorithm circuit split after its initial Hadamard layer.
struct SplitCircuit {
  Circuit initial; // the initial layer alone, on all qubits
  Circuit rest;    // everything after it
  Circuit full;    // initial then rest
};

unsigned grover_iteration_count(unsigned n);
// sin^2((2k+1) asin(2^{-n/2})) with k = grover_iteration_count(n).
double grover_exact_success(unsigned n);
double grover_exact_success(unsigned n, unsigned k);

Gate grover_oracle(unsigned n, std::uint64_t alpha);
Gate grover_zero_reflection(unsigned n);

// (W R2 W R1)^k W with perturbed Hadamards. Angle order: the n initial-layer
// angles, then per iteration the n angles of the W after R1 followed by the n
// angles of the W after R2.
SplitCircuit build_grover(const GroverSpec &spec,
                          std::span<const double> hadamard_thetas);

// a^x mod R for x = 0 .. 2^{2L}-1.
std::vector<std::uint64_t> modexp_values(const ShorSpec &spec);
// |x>|y> -> |x>|y XOR f(x)> on all 3L qubits.
PermutationGate modexp_permutation(const ShorSpec &spec);

struct ShorAngles {
  std::vector<double> initial;       // 2L
  std::vector<double> qft_hadamards; // 2L
  std::vector<double> qft_phases;    // L(2L-1), added to the nominal angles

  static ShorAngles exact(const ShorSpec &spec);
  static ShorAngles uniform(const ShorSpec &spec, double theta);
};

// Hadamard layer on register 1, modular exponentiation, QFT on register 1.
SplitCircuit build_shor(const ShorSpec &spec, const ShorAngles &angles);
// Same with the 4L Hadamard angles given as one list (initial layer first).
SplitCircuit build_shor(const ShorSpec &spec,
                        std::span<const double> hadamard_thetas,
                        std::span<const double> qft_phase_perturbations);

// Unitaries of a split algorithm and the qubits its initial layer touches.
struct AlgorithmUnitaries {
  ComplexMatrix full;
  ComplexMatrix rest;
  ComplexMatrix walsh;
  std::vector<int> hadamard_qubits;
};

AlgorithmUnitaries algorithm_unitaries(const SplitCircuit &circuit,
                                       std::vector<int> hadamard_qubits);

// Errors strike right after the initial layer. The potentially available
// channel is U_rest * errors * W; the actually used channel drops W.
struct AlgorithmChannels {
  PauliSandwich potentially_available;
  PauliSandwich actually_used;
  // Computational-basis distribution of the final state for input |0...0>.
  std::vector<double> final_probabilities;

  DensityMatrix final_state() const;
};

AlgorithmChannels decoherence_channels(const AlgorithmUnitaries &algorithm,
                                       const ErrorModel &model);

// tr(rho |alpha><alpha|), clamped to [0, 1].
double grover_success(const DensityMatrix &rho_f, std::uint64_t alpha);
double grover_success(std::span<const double> probabilities,
                      std::uint64_t alpha);

// 1 - sum_i |ideal_i - observed_i| / 2.
double shor_success(std::span<const double> ideal,
                    std::span<const double> observed);

// Marginal distribution of the first `qubits` qubits.
std::vector<double> register_marginal(std::span<const double> probabilities,
                                      unsigned n, unsigned qubits);

} // namespace qinterf
