#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qinterf/linalg.hpp"

namespace qinterf {

// Trace-preserving operator-sum channel rho -> sum_l E_l rho E_l^dagger.
class KrausChannel {
public:
  // Checks shapes and completeness sum_l E_l^dagger E_l = 1 within kStateTol.
  // Completeness is checked exactly up to dim 64 and by probe vectors above.
  explicit KrausChannel(std::vector<ComplexMatrix> ops);
  // As above with a caller-chosen completeness tolerance.
  KrausChannel(std::vector<ComplexMatrix> ops, double tol);

  std::size_t dim() const { return ops_.front().rows(); }
  std::size_t size() const { return ops_.size(); }
  const std::vector<ComplexMatrix> &ops() const { return ops_; }
  const ComplexMatrix &operator[](std::size_t l) const { return ops_[l]; }

  // max |sum E^dagger E - 1| over entries. O(N^3 L).
  double completeness_deviation() const;

private:
  std::vector<ComplexMatrix> ops_;
};

enum class ErrorKind { BitFlip, PhaseFlip };

const char *to_string(ErrorKind kind);

// Pauli errors with probability p on each qubit in `affected`.
struct ErrorModel {
  ErrorKind kind = ErrorKind::BitFlip;
  double p = 0.0;
  std::vector<int> affected;

  void validate(unsigned n) const;
};

inline constexpr std::size_t kMaxFlippedQubits = 20;

// One Kraus term of a Pauli layer: weight * sigma^{mask}, where `mask` marks
// the flipped qubits in basis-index bit positions and weight = c_l^2.
struct PauliTerm {
  std::uint64_t mask;
  double weight;
};

// Terms in binary order of the error subset (bit b of the term index set
// <=> affected[b] flipped). Zero-weight terms are dropped, so p = 0 and
// p = 1 give a single term.
std::vector<PauliTerm> pauli_layer_terms(unsigned n, const ErrorModel &model);

// {sqrt(1-p) I, sqrt(p) sigma}; sigma_x for bit flips, sigma_z for phase flips.
KrausChannel pauli_error_kraus(ErrorKind kind, double p);

// Tensor products over the affected qubits, identity elsewhere.
KrausChannel layered_error_channel(unsigned n, const ErrorModel &model);

// {post E_l pre}.
KrausChannel sandwich(const KrausChannel &ch, const ComplexMatrix &pre,
                      const ComplexMatrix &post);

DensityMatrix apply_channel(const KrausChannel &ch, const DensityMatrix &rho);

// post * (Pauli error layer) * pre kept in factored form. `pre` is absent
// when it is the identity. This is the shape of every decoherence channel
// the algorithms build, and the interference module has a fast path for it.
class PauliSandwich {
public:
  PauliSandwich(unsigned n, ErrorModel model, std::optional<ComplexMatrix> pre,
                ComplexMatrix post);

  unsigned num_qubits() const { return n_; }
  std::size_t dim() const { return post_.rows(); }
  const ErrorModel &model() const { return model_; }
  const std::optional<ComplexMatrix> &pre() const { return pre_; }
  const ComplexMatrix &post() const { return post_; }
  const std::vector<PauliTerm> &terms() const { return terms_; }
  std::size_t kraus_count() const { return terms_.size(); }

  KrausChannel materialize() const;
  // Diagonal of the output state for input |index><index|.
  std::vector<double> output_probabilities(std::uint64_t index) const;
  // Full output state for input |index><index|.
  DensityMatrix output_state(std::uint64_t index) const;

private:
  // Pure ensemble members E_l |index>, scaled by c_l.
  std::vector<std::vector<Complex>> output_ensemble(std::uint64_t index) const;

  unsigned n_;
  ErrorModel model_;
  std::optional<ComplexMatrix> pre_;
  ComplexMatrix post_;
  std::vector<PauliTerm> terms_;
};

// sigma^{mask} * m (rows permuted for bit flips, rows signed for phase flips).
ComplexMatrix pauli_string_times(ErrorKind kind, std::uint64_t mask,
                                 const ComplexMatrix &m);
// m * sigma^{mask}.
ComplexMatrix times_pauli_string(const ComplexMatrix &m, ErrorKind kind,
                                 std::uint64_t mask);

} // namespace qinterf
