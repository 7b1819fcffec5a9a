#pragma once

#include <span>
#include <vector>

#include "qinterf/channels.hpp"
#include "qinterf/linalg.hpp"

namespace qinterf {

// Interference value I and its logarithm n_I = log2(I) in i-bits.
struct InterferenceReport {
  double value;
  double ibits;
};

// log2(value); values in [-1e-9, 0] count as 0 and give -infinity.
double ibits(double value);
InterferenceReport make_report(double value);

// I = N - sum_{i,k} |U_ik|^4.
InterferenceReport interference_unitary(const ComplexMatrix &u);

// I = sum_{i,k,m} |sum_l E_l[i,k] conj(E_l[i,m])|^2
//     - sum_{i,k} (sum_l |E_l[i,k]|^2)^2,
// first term evaluated per row through the L x L Gram matrix of the stacked
// Kraus rows. Throws ValidationError if completeness is off by more than
// kUnitaryTol.
InterferenceReport interference_kraus(const KrausChannel &ch);

// Same measure for post * (Pauli layer) * pre without materializing the
// 2^{n_f} Kraus operators. Cost is O(N^2 log L) without `pre` and
// O(N^3 + N^2 L log L) with it.
InterferenceReport interference_kraus(const PauliSandwich &ch);
// The same channel shape evaluated at every error probability in `ps`; the
// model's own p is ignored. The p-independent O(N^3) work is shared.
std::vector<InterferenceReport>
interference_kraus_over_p(const PauliSandwich &ch, std::span<const double> ps);

// Literal triple sum, O(N^3 L). Reference for tests and verification.
double interference_kraus_naive(const KrausChannel &ch);

inline constexpr std::size_t kMaxSuperoperatorDim = 64;

// Propagator rho'_{ij} = sum_{kl} P_{ij,kl} rho_{kl}, stored as an
// N^2 x N^2 matrix with row (i,j) -> i*N + j and column (k,l) -> k*N + l.
class Superoperator {
public:
  explicit Superoperator(ComplexMatrix entries);

  std::size_t dim() const { return dim_; }
  const ComplexMatrix &matrix() const { return entries_; }
  const Complex &operator()(std::size_t i, std::size_t j, std::size_t k,
                            std::size_t l) const {
    return entries_(i * dim_ + j, k * dim_ + l);
  }
  ComplexMatrix apply(const ComplexMatrix &rho) const;

private:
  std::size_t dim_;
  ComplexMatrix entries_;
};

// P_{ij,kl} = sum_l E_l[i,k] conj(E_l[j,l]).
Superoperator superoperator_from_kraus(const KrausChannel &ch);

// I = sum_{i,k,l} |P_{ii,kl}|^2 - sum_{i,k} |P_{ii,kk}|^2.
InterferenceReport interference_superoperator(const Superoperator &p);

} // namespace qinterf
