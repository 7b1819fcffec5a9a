#include "qinterf/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qinterf/errors.hpp"

namespace qinterf {
namespace {

void check_distinct(std::span<const int> targets, const char *what) {
  for (std::size_t a = 0; a < targets.size(); ++a) {
    if (targets[a] < 0)
      throw ArgumentError(std::string(what) + ": negative qubit index");
    for (std::size_t b = a + 1; b < targets.size(); ++b)
      if (targets[a] == targets[b])
        throw ArgumentError(std::string(what) + ": duplicate target");
  }
}

std::uint64_t reverse_bits(std::uint64_t x, unsigned width) {
  std::uint64_t r = 0;
  for (unsigned b = 0; b < width; ++b)
    r = (r << 1) | ((x >> b) & 1u);
  return r;
}

} // namespace

PermutationGate::PermutationGate(std::vector<int> targets,
                                 std::vector<std::uint64_t> map)
    : targets_(std::move(targets)), map_(std::move(map)) {
  check_distinct(targets_, "PermutationGate");
  if (targets_.empty() || targets_.size() > kMaxQubits)
    throw ArgumentError("PermutationGate: target count must be 1..12");
  const std::size_t dim = std::size_t{1} << targets_.size();
  if (map_.size() != dim)
    throw ShapeError("PermutationGate: map size must be 2^k");
  std::vector<bool> seen(dim, false);
  for (std::uint64_t v : map_) {
    if (v >= dim || seen[v])
      throw ArgumentError("PermutationGate: map is not a bijection");
    seen[v] = true;
  }
}

DiagonalPhaseGate::DiagonalPhaseGate(std::vector<int> targets,
                                     std::vector<std::int8_t> signs)
    : targets_(std::move(targets)), signs_(std::move(signs)) {
  check_distinct(targets_, "DiagonalPhaseGate");
  if (targets_.empty() || targets_.size() > kMaxQubits)
    throw ArgumentError("DiagonalPhaseGate: target count must be 1..12");
  if (signs_.size() != (std::size_t{1} << targets_.size()))
    throw ShapeError("DiagonalPhaseGate: sign count must be 2^k");
  for (std::int8_t s : signs_)
    if (s != 1 && s != -1)
      throw ArgumentError("DiagonalPhaseGate: entries must be +1 or -1");
}

RawUnitary::RawUnitary(std::vector<int> targets, ComplexMatrix matrix)
    : targets_(std::move(targets)), matrix_(std::move(matrix)) {
  check_distinct(targets_, "RawUnitary");
  if (!matrix_.is_square() || !is_power_of_two(matrix_.rows()))
    throw ShapeError("RawUnitary: matrix must be square 2^k x 2^k");
  if (matrix_.rows() != (std::size_t{1} << targets_.size()))
    throw ShapeError("RawUnitary: matrix size does not match targets");
  if (!check_unitary(matrix_, kUnitaryTol))
    throw ValidationError("RawUnitary: matrix is not unitary");
}

std::vector<int> gate_targets(const Gate &gate) {
  struct Visitor {
    std::vector<int> operator()(const PerturbedHadamard &g) { return {g.qubit}; }
    std::vector<int> operator()(const PauliX &g) { return {g.qubit}; }
    std::vector<int> operator()(const PauliZ &g) { return {g.qubit}; }
    std::vector<int> operator()(const ControlledPhase &g) {
      return {g.control, g.target};
    }
    std::vector<int> operator()(const PermutationGate &g) { return g.targets(); }
    std::vector<int> operator()(const DiagonalPhaseGate &g) {
      return g.targets();
    }
    std::vector<int> operator()(const RawUnitary &g) { return g.targets(); }
  };
  return std::visit(Visitor{}, gate);
}

ComplexMatrix perturbed_hadamard(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return ComplexMatrix{{c, s}, {s, -c}};
}

ComplexMatrix gate_matrix(const Gate &gate) {
  struct Visitor {
    ComplexMatrix operator()(const PerturbedHadamard &g) {
      return perturbed_hadamard(g.theta);
    }
    ComplexMatrix operator()(const PauliX &) {
      return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
    }
    ComplexMatrix operator()(const PauliZ &) {
      return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
    }
    ComplexMatrix operator()(const ControlledPhase &g) {
      const Complex d[4] = {1.0, 1.0, 1.0, std::polar(1.0, g.phi)};
      return ComplexMatrix::diagonal(d);
    }
    ComplexMatrix operator()(const PermutationGate &g) {
      const std::size_t dim = g.map().size();
      ComplexMatrix m(dim, dim);
      for (std::size_t k = 0; k < dim; ++k)
        m(g.map()[k], k) = 1.0;
      return m;
    }
    ComplexMatrix operator()(const DiagonalPhaseGate &g) {
      std::vector<Complex> d(g.signs().begin(), g.signs().end());
      return ComplexMatrix::diagonal(d);
    }
    ComplexMatrix operator()(const RawUnitary &g) { return g.matrix(); }
  };
  return std::visit(Visitor{}, gate);
}

Circuit::Circuit(unsigned n) : n_(n) {
  if (n == 0)
    throw ArgumentError("Circuit: need at least one qubit");
  if (n > kMaxQubits)
    throw SizeError("Circuit: more than 12 qubits (" + std::to_string(n) + ")");
}

Circuit &Circuit::add(Gate gate) {
  const std::vector<int> targets = gate_targets(gate);
  check_distinct(targets, "Circuit::add");
  for (int t : targets)
    if (static_cast<unsigned>(t) >= n_)
      throw ArgumentError("Circuit::add: target " + std::to_string(t) +
                          " outside " + std::to_string(n_) + " qubits");
  ops_.push_back(std::move(gate));
  return *this;
}

Circuit &Circuit::append(const Circuit &other, int offset) {
  struct Shift {
    int offset;
    Gate operator()(PerturbedHadamard g) {
      g.qubit += offset;
      return g;
    }
    Gate operator()(PauliX g) {
      g.qubit += offset;
      return g;
    }
    Gate operator()(PauliZ g) {
      g.qubit += offset;
      return g;
    }
    Gate operator()(ControlledPhase g) {
      g.control += offset;
      g.target += offset;
      return g;
    }
    std::vector<int> shifted(const std::vector<int> &t) {
      std::vector<int> out(t);
      for (int &q : out)
        q += offset;
      return out;
    }
    Gate operator()(const PermutationGate &g) {
      return PermutationGate(shifted(g.targets()), g.map());
    }
    Gate operator()(const DiagonalPhaseGate &g) {
      return DiagonalPhaseGate(shifted(g.targets()), g.signs());
    }
    Gate operator()(const RawUnitary &g) {
      return RawUnitary(shifted(g.targets()), g.matrix());
    }
  };
  for (const Gate &g : other.ops())
    add(offset == 0 ? g : std::visit(Shift{offset}, g));
  return *this;
}

Circuit walsh_layer(std::span<const double> thetas) {
  if (thetas.empty())
    throw ArgumentError("walsh_layer: empty angle list");
  Circuit c(static_cast<unsigned>(thetas.size()));
  for (std::size_t q = 0; q < thetas.size(); ++q)
    c.add(PerturbedHadamard{thetas[q], static_cast<int>(q)});
  return c;
}

Circuit qft_circuit(unsigned m, std::span<const double> phase_perturbations) {
  const std::vector<double> exact(m, std::numbers::pi / 4);
  return qft_circuit(m, exact, phase_perturbations);
}

Circuit qft_circuit(unsigned m, std::span<const double> hadamard_thetas,
                    std::span<const double> phase_perturbations) {
  if (m == 0)
    throw ArgumentError("qft_circuit: need at least one qubit");
  if (hadamard_thetas.size() != m)
    throw ArgumentError("qft_circuit: expected " + std::to_string(m) +
                        " Hadamard angles, got " +
                        std::to_string(hadamard_thetas.size()));
  if (phase_perturbations.size() != qft_phase_count(m))
    throw ArgumentError("qft_circuit: expected " +
                        std::to_string(qft_phase_count(m)) +
                        " phase perturbations, got " +
                        std::to_string(phase_perturbations.size()));
  Circuit c(m);
  std::size_t next = 0;
  for (unsigned j = 0; j < m; ++j) {
    c.add(PerturbedHadamard{hadamard_thetas[j], static_cast<int>(j)});
    for (unsigned d = 1; j + d < m; ++d) {
      const double angle =
          std::numbers::pi / static_cast<double>(std::uint64_t{1} << d) +
          phase_perturbations[next++];
      c.add(ControlledPhase{angle, static_cast<int>(j + d), static_cast<int>(j)});
    }
  }
  if (m > 1) {
    std::vector<int> targets(m);
    std::vector<std::uint64_t> map(std::size_t{1} << m);
    for (unsigned q = 0; q < m; ++q)
      targets[q] = static_cast<int>(q);
    for (std::uint64_t k = 0; k < map.size(); ++k)
      map[k] = reverse_bits(k, m);
    c.add(PermutationGate(std::move(targets), std::move(map)));
  }
  return c;
}

void apply_gate(const Gate &gate, unsigned n, kernels::RowBlock x,
                std::vector<Complex> &scratch) {
  namespace kp = kernels::parallel;
  struct Visitor {
    unsigned n;
    kernels::RowBlock x;
    std::vector<Complex> &scratch;

    void operator()(const PerturbedHadamard &g) {
      const double c = std::cos(g.theta), s = std::sin(g.theta);
      const Complex m[4] = {c, s, s, -c};
      kp::apply_1q(x, n, g.qubit, m);
    }
    void operator()(const PauliX &g) {
      const Complex m[4] = {0.0, 1.0, 1.0, 0.0};
      kp::apply_1q(x, n, g.qubit, m);
    }
    void operator()(const PauliZ &g) {
      const int t[1] = {g.qubit};
      const Complex d[2] = {1.0, -1.0};
      kp::apply_diagonal(x, n, t, d);
    }
    void operator()(const ControlledPhase &g) {
      const int t[2] = {g.control, g.target};
      const Complex d[4] = {1.0, 1.0, 1.0, std::polar(1.0, g.phi)};
      kp::apply_diagonal(x, n, t, d);
    }
    void operator()(const PermutationGate &g) {
      scratch.assign(x.data.begin(), x.data.end());
      kp::apply_permutation({scratch, x.rows, x.cols}, x, n, g.targets(),
                            g.map());
    }
    void operator()(const DiagonalPhaseGate &g) {
      std::vector<Complex> d(g.signs().begin(), g.signs().end());
      kp::apply_diagonal(x, n, g.targets(), d);
    }
    void operator()(const RawUnitary &g) {
      kp::apply_dense(x, n, g.targets(), g.matrix().data());
    }
  };
  std::visit(Visitor{n, x, scratch}, gate);
}

void apply_circuit(const Circuit &c, ComplexMatrix &m) {
  if (m.rows() != c.dim())
    throw ArgumentError("apply_circuit: block has " + std::to_string(m.rows()) +
                        " rows, circuit needs " + std::to_string(c.dim()));
  std::vector<Complex> scratch;
  for (const Gate &g : c.ops())
    apply_gate(g, c.num_qubits(), m.block(), scratch);
}

ComplexMatrix circuit_unitary(const Circuit &c) {
  ComplexMatrix u = ComplexMatrix::identity(c.dim());
  apply_circuit(c, u);
  return u;
}

StateVector circuit_apply(const Circuit &c, const StateVector &psi) {
  if (psi.dim() != c.dim())
    throw ArgumentError("circuit_apply: state dimension " +
                        std::to_string(psi.dim()) + " != circuit dimension " +
                        std::to_string(c.dim()));
  ComplexMatrix column(c.dim(), 1,
                       std::vector<Complex>(psi.amplitudes().begin(),
                                            psi.amplitudes().end()));
  apply_circuit(c, column);
  return StateVector(std::vector<Complex>(column.data().begin(),
                                          column.data().end()));
}

} // namespace qinterf
