#include "qinterf/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qinterf/errors.hpp"

namespace qinterf {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;

std::vector<int> qubit_range(unsigned first, unsigned count) {
  std::vector<int> q(count);
  std::iota(q.begin(), q.end(), static_cast<int>(first));
  return q;
}

void add_layer(Circuit &c, std::span<const double> thetas, unsigned first) {
  for (std::size_t q = 0; q < thetas.size(); ++q)
    c.add(PerturbedHadamard{thetas[q], static_cast<int>(first + q)});
}

} // namespace

void GroverSpec::validate() const {
  if (n < 2)
    throw ArgumentError("Grover: need at least 2 qubits");
  if (n > kMaxQubits)
    throw SizeError("Grover: more than 12 qubits (" + std::to_string(n) + ")");
  if (alpha >= dim())
    throw ArgumentError("Grover: marked item " + std::to_string(alpha) +
                        " outside 2^" + std::to_string(n));
}

unsigned GroverSpec::iterations() const {
  return k_override.value_or(grover_iteration_count(n));
}

std::size_t GroverSpec::hadamard_count() const {
  return n + 2 * static_cast<std::size_t>(n) * iterations();
}

ShorSpec ShorSpec::make(std::uint64_t R, std::uint64_t a) {
  if (R < 2)
    throw ArgumentError("Shor: modulus must be at least 2");
  ShorSpec spec;
  spec.R = R;
  spec.a = a;
  spec.L = static_cast<unsigned>(std::floor(std::log2(static_cast<double>(R)))) + 1;
  spec.validate();
  return spec;
}

void ShorSpec::validate() const {
  if (R < 2)
    throw ArgumentError("Shor: modulus must be at least 2");
  const unsigned expected =
      static_cast<unsigned>(std::floor(std::log2(static_cast<double>(R)))) + 1;
  if (L != expected)
    throw ArgumentError("Shor: L must be floor(log2 R) + 1 = " +
                        std::to_string(expected));
  if (a == 0 || a >= R)
    throw ArgumentError("Shor: base must satisfy 0 < a < R");
  if (std::gcd(a, R) != 1)
    throw ArgumentError("Shor: base must be coprime to R");
  if (3 * L > kMaxQubits)
    throw SizeError("Shor: 3L = " + std::to_string(3 * L) +
                    " qubits exceeds the 12-qubit cap");
}

unsigned grover_iteration_count(unsigned n) {
  if (n < 2)
    throw ArgumentError("grover_iteration_count: need n >= 2");
  const double theta = std::asin(std::pow(2.0, -0.5 * n));
  return static_cast<unsigned>(std::floor(std::numbers::pi / (4 * theta)));
}

double grover_exact_success(unsigned n, unsigned k) {
  const double theta = std::asin(std::pow(2.0, -0.5 * n));
  const double s = std::sin((2.0 * k + 1.0) * theta);
  return s * s;
}

double grover_exact_success(unsigned n) {
  return grover_exact_success(n, grover_iteration_count(n));
}

Gate grover_oracle(unsigned n, std::uint64_t alpha) {
  const std::size_t dim = std::size_t{1} << n;
  if (alpha >= dim)
    throw ArgumentError("grover_oracle: alpha out of range");
  std::vector<std::int8_t> signs(dim, 1);
  signs[alpha] = -1;
  return DiagonalPhaseGate(qubit_range(0, n), std::move(signs));
}

Gate grover_zero_reflection(unsigned n) {
  std::vector<std::int8_t> signs(std::size_t{1} << n, 1);
  signs[0] = -1;
  return DiagonalPhaseGate(qubit_range(0, n), std::move(signs));
}

SplitCircuit build_grover(const GroverSpec &spec,
                          std::span<const double> hadamard_thetas) {
  spec.validate();
  const unsigned n = spec.n;
  const unsigned k = spec.iterations();
  if (hadamard_thetas.size() != spec.hadamard_count())
    throw ArgumentError("build_grover: expected " +
                        std::to_string(spec.hadamard_count()) +
                        " Hadamard angles, got " +
                        std::to_string(hadamard_thetas.size()));
  Circuit initial(n);
  add_layer(initial, hadamard_thetas.subspan(0, n), 0);

  const Gate oracle = grover_oracle(n, spec.alpha);
  const Gate zero = grover_zero_reflection(n);
  Circuit rest(n);
  std::size_t next = n;
  for (unsigned it = 0; it < k; ++it) {
    rest.add(oracle);
    add_layer(rest, hadamard_thetas.subspan(next, n), 0);
    next += n;
    rest.add(zero);
    add_layer(rest, hadamard_thetas.subspan(next, n), 0);
    next += n;
  }
  Circuit full(n);
  full.append(initial).append(rest);
  return {std::move(initial), std::move(rest), std::move(full)};
}

std::vector<std::uint64_t> modexp_values(const ShorSpec &spec) {
  spec.validate();
  const std::size_t count = std::size_t{1} << spec.first_register();
  std::vector<std::uint64_t> f(count);
  std::uint64_t v = 1 % spec.R;
  for (std::size_t x = 0; x < count; ++x) {
    f[x] = v;
    v = (v * spec.a) % spec.R;
  }
  return f;
}

PermutationGate modexp_permutation(const ShorSpec &spec) {
  const std::vector<std::uint64_t> f = modexp_values(spec);
  const unsigned second = spec.L;
  const std::size_t ys = std::size_t{1} << second;
  std::vector<std::uint64_t> map(spec.dim());
  for (std::uint64_t x = 0; x < f.size(); ++x)
    for (std::uint64_t y = 0; y < ys; ++y)
      map[(x << second) | y] = (x << second) | (y ^ f[x]);
  return PermutationGate(qubit_range(0, spec.num_qubits()), std::move(map));
}

ShorAngles ShorAngles::exact(const ShorSpec &spec) {
  return uniform(spec, kQuarterPi);
}

ShorAngles ShorAngles::uniform(const ShorSpec &spec, double theta) {
  const unsigned m = spec.first_register();
  return {std::vector<double>(m, theta), std::vector<double>(m, theta),
          std::vector<double>(qft_phase_count(m), 0.0)};
}

SplitCircuit build_shor(const ShorSpec &spec, const ShorAngles &angles) {
  spec.validate();
  const unsigned n = spec.num_qubits();
  const unsigned m = spec.first_register();
  if (angles.initial.size() != m)
    throw ArgumentError("build_shor: expected " + std::to_string(m) +
                        " initial-layer angles, got " +
                        std::to_string(angles.initial.size()));
  Circuit initial(n);
  add_layer(initial, angles.initial, 0);

  Circuit rest(n);
  rest.add(modexp_permutation(spec));
  rest.append(qft_circuit(m, angles.qft_hadamards, angles.qft_phases), 0);

  Circuit full(n);
  full.append(initial).append(rest);
  return {std::move(initial), std::move(rest), std::move(full)};
}

SplitCircuit build_shor(const ShorSpec &spec,
                        std::span<const double> hadamard_thetas,
                        std::span<const double> qft_phase_perturbations) {
  spec.validate();
  const unsigned m = spec.first_register();
  if (hadamard_thetas.size() != 2 * m)
    throw ArgumentError("build_shor: expected " + std::to_string(2 * m) +
                        " Hadamard angles, got " +
                        std::to_string(hadamard_thetas.size()));
  ShorAngles angles;
  angles.initial.assign(hadamard_thetas.begin(), hadamard_thetas.begin() + m);
  angles.qft_hadamards.assign(hadamard_thetas.begin() + m, hadamard_thetas.end());
  angles.qft_phases.assign(qft_phase_perturbations.begin(),
                           qft_phase_perturbations.end());
  return build_shor(spec, angles);
}

AlgorithmUnitaries algorithm_unitaries(const SplitCircuit &circuit,
                                       std::vector<int> hadamard_qubits) {
  ComplexMatrix walsh = circuit_unitary(circuit.initial);
  ComplexMatrix rest = circuit_unitary(circuit.rest);
  ComplexMatrix full = walsh;
  apply_circuit(circuit.rest, full);
  return {std::move(full), std::move(rest), std::move(walsh),
          std::move(hadamard_qubits)};
}

DensityMatrix AlgorithmChannels::final_state() const {
  return potentially_available.output_state(0);
}

AlgorithmChannels decoherence_channels(const AlgorithmUnitaries &algorithm,
                                       const ErrorModel &model) {
  for (int q : model.affected)
    if (std::find(algorithm.hadamard_qubits.begin(),
                  algorithm.hadamard_qubits.end(),
                  q) == algorithm.hadamard_qubits.end())
      throw ArgumentError("decoherence_channels: qubit " + std::to_string(q) +
                          " does not receive an initial Hadamard");
  const unsigned n = log2_exact(algorithm.rest.rows());
  PauliSandwich pa(n, model, algorithm.walsh, algorithm.rest);
  PauliSandwich au(n, model, std::nullopt, algorithm.rest);
  std::vector<double> probs = pa.output_probabilities(0);
  return {std::move(pa), std::move(au), std::move(probs)};
}

double grover_success(std::span<const double> probabilities,
                      std::uint64_t alpha) {
  if (alpha >= probabilities.size())
    throw ArgumentError("grover_success: alpha out of range");
  return std::clamp(probabilities[alpha], 0.0, 1.0);
}

double grover_success(const DensityMatrix &rho_f, std::uint64_t alpha) {
  if (alpha >= rho_f.dim())
    throw ArgumentError("grover_success: alpha out of range");
  return std::clamp(rho_f(alpha, alpha).real(), 0.0, 1.0);
}

double shor_success(std::span<const double> ideal,
                    std::span<const double> observed) {
  if (ideal.size() != observed.size())
    throw ArgumentError("shor_success: distributions differ in length");
  const double si = std::accumulate(ideal.begin(), ideal.end(), 0.0);
  const double so = std::accumulate(observed.begin(), observed.end(), 0.0);
  if (std::abs(si - 1.0) > kUnitaryTol || std::abs(so - 1.0) > kUnitaryTol)
    throw ArgumentError("shor_success: distributions must sum to 1");
  double tv = 0.0;
  for (std::size_t i = 0; i < ideal.size(); ++i)
    tv += std::abs(ideal[i] - observed[i]);
  return std::clamp(1.0 - tv / 2.0, 0.0, 1.0);
}

std::vector<double> register_marginal(std::span<const double> probabilities,
                                      unsigned n, unsigned qubits) {
  if (probabilities.size() != (std::size_t{1} << n) || qubits > n)
    throw ArgumentError("register_marginal: bad dimensions");
  std::vector<double> out(std::size_t{1} << qubits, 0.0);
  const unsigned shift = n - qubits;
  for (std::size_t i = 0; i < probabilities.size(); ++i)
    out[i >> shift] += probabilities[i];
  return out;
}

} // namespace qinterf
