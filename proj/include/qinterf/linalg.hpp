#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "qinterf/kernels.hpp"

namespace qinterf {

// Largest supported Hilbert-space dimension (12 qubits).
inline constexpr std::size_t kMaxDim = std::size_t{1} << 12;
inline constexpr unsigned kMaxQubits = 12;

// Tolerance for state normalization, trace and Hermiticity checks.
inline constexpr double kStateTol = 1e-9;
// Tolerance for accepting caller-supplied unitaries and Kraus sets.
inline constexpr double kUnitaryTol = 1e-6;

bool is_power_of_two(std::size_t x);
// log2 of a power of two.
unsigned log2_exact(std::size_t x);

// Dense row-major complex matrix.
class ComplexMatrix {
public:
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols,
                std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex &operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  const Complex &operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }
  std::span<const Complex> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  kernels::RowBlock block() { return {data_, rows_, cols_}; }
  kernels::ConstRowBlock block() const { return {data_, rows_, cols_}; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  // Largest |a_ij - b_ij|; shapes must agree.
  double max_abs_diff(const ComplexMatrix &other) const;

  ComplexMatrix &operator*=(Complex s);
  ComplexMatrix &operator+=(const ComplexMatrix &other);

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);

// Normalized pure state on 2^n amplitudes.
class StateVector {
public:
  explicit StateVector(std::vector<Complex> amplitudes);
  static StateVector basis(std::size_t dim, std::uint64_t index);

  std::size_t dim() const { return amps_.size(); }
  unsigned num_qubits() const { return log2_exact(amps_.size()); }
  std::span<const Complex> amplitudes() const { return amps_; }
  const Complex &operator[](std::size_t i) const { return amps_[i]; }
  std::vector<double> probabilities() const;

private:
  std::vector<Complex> amps_;
};

// Hermitian, unit-trace density matrix. Positivity is not checked on
// construction (it costs an eigendecomposition); see min_eigenvalue().
class DensityMatrix {
public:
  explicit DensityMatrix(ComplexMatrix rho);
  static DensityMatrix pure(const StateVector &psi);
  static DensityMatrix basis(std::size_t dim, std::uint64_t index);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return rho_.rows(); }
  const ComplexMatrix &matrix() const { return rho_; }
  const Complex &operator()(std::size_t r, std::size_t c) const {
    return rho_(r, c);
  }
  // Diagonal in the computational basis.
  std::vector<double> probabilities() const;
  double min_eigenvalue() const;

private:
  ComplexMatrix rho_;
};

// Kronecker product; result dimensions capped at kMaxDim.
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

// 2^n x 2^n operator acting as `gate` on `targets`, identity elsewhere.
ComplexMatrix embed_local(const ComplexMatrix &gate,
                          std::span<const int> targets, unsigned n);

// U rho U^dagger; throws ValidationError if u deviates from unitary by more
// than kUnitaryTol.
DensityMatrix evolve_density(const DensityMatrix &rho, const ComplexMatrix &u);

// max |U^dagger U - 1| over entries. O(N^3).
double unitarity_deviation(const ComplexMatrix &u);
bool check_unitary(const ComplexMatrix &u, double tol);

// O(N^2) screen for large operators: unit row and column norms plus one
// probe vector x with |U^dagger U x - x| small.
bool quick_unitary_check(const ComplexMatrix &u, double tol);

// Hermitian lowest eigenvalue (Eigen backed).
double min_hermitian_eigenvalue(const ComplexMatrix &h);

} // namespace qinterf
