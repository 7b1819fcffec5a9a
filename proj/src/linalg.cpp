#include "qinterf/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "qinterf/errors.hpp"

namespace qinterf {

bool is_power_of_two(std::size_t x) { return std::has_single_bit(x); }

unsigned log2_exact(std::size_t x) {
  return static_cast<unsigned>(std::countr_zero(x));
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0)
    throw ShapeError("ComplexMatrix: dimensions must be at least 1");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0)
    throw ShapeError("ComplexMatrix: dimensions must be at least 1");
  if (data_.size() != rows * cols)
    throw ShapeError("ComplexMatrix: entry count " +
                     std::to_string(data_.size()) + " != rows*cols");
  for (const Complex &z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ValidationError("ComplexMatrix: non-finite entry");
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0)
    throw ShapeError("ComplexMatrix: dimensions must be at least 1");
  data_.reserve(rows_ * cols_);
  for (const auto &r : rows) {
    if (r.size() != cols_)
      throw ShapeError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i)
    m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t{};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
    t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix &other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw ShapeError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex s) {
  for (Complex &z : data_)
    z *= s;
  return *this;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw ShapeError("matrix add: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.cols() != b.rows())
    throw ShapeError("matrix product: inner dimensions differ");
  ComplexMatrix c(a.rows(), b.cols());
  kernels::parallel::matmul(a.data(), b.data(), c.data(), a.rows(), a.cols(),
                            b.cols());
  return c;
}

ComplexMatrix operator*(Complex s, ComplexMatrix a) {
  a *= s;
  return a;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
  a += b;
  return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
  a += Complex{-1.0} * b;
  return a;
}

StateVector::StateVector(std::vector<Complex> amplitudes)
    : amps_(std::move(amplitudes)) {
  if (!is_power_of_two(amps_.size()))
    throw ShapeError("StateVector: dimension must be a power of two");
  if (amps_.size() > kMaxDim)
    throw SizeError("StateVector: dimension exceeds 2^12");
  double norm = 0.0;
  for (const Complex &z : amps_)
    norm += std::norm(z);
  if (std::abs(norm - 1.0) > kStateTol)
    throw ValidationError("StateVector: norm^2 = " + std::to_string(norm));
}

StateVector StateVector::basis(std::size_t dim, std::uint64_t index) {
  if (index >= dim)
    throw ArgumentError("StateVector::basis: index out of range");
  std::vector<Complex> amps(dim);
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  std::transform(amps_.begin(), amps_.end(), p.begin(),
                 [](const Complex &z) { return std::norm(z); });
  return p;
}

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (!rho_.is_square())
    throw ShapeError("DensityMatrix: not square");
  if (rho_.rows() > kMaxDim)
    throw SizeError("DensityMatrix: dimension exceeds 2^12");
  const std::size_t n = rho_.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (std::abs(rho_(i, j) - std::conj(rho_(j, i))) > kStateTol)
        throw ValidationError("DensityMatrix: not Hermitian");
  const Complex tr = rho_.trace();
  if (std::abs(tr - 1.0) > kStateTol)
    throw ValidationError("DensityMatrix: trace = " +
                          std::to_string(tr.real()));
}

DensityMatrix DensityMatrix::pure(const StateVector &psi) {
  const std::size_t n = psi.dim();
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = psi[i] * std::conj(psi[j]);
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::basis(std::size_t dim, std::uint64_t index) {
  return pure(StateVector::basis(dim, index));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  ComplexMatrix m = ComplexMatrix::identity(dim);
  m *= 1.0 / static_cast<double>(dim);
  return DensityMatrix(std::move(m));
}

std::vector<double> DensityMatrix::probabilities() const {
  std::vector<double> p(dim());
  for (std::size_t i = 0; i < dim(); ++i)
    p[i] = rho_(i, i).real();
  return p;
}

double DensityMatrix::min_eigenvalue() const {
  return min_hermitian_eigenvalue(rho_);
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  if (rows > kMaxDim || cols > kMaxDim)
    throw SizeError("kron: result exceeds 2^12 per dimension");
  ComplexMatrix out(rows, cols);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix embed_local(const ComplexMatrix &gate,
                          std::span<const int> targets, unsigned n) {
  if (!gate.is_square() || !is_power_of_two(gate.rows()))
    throw ShapeError("embed_local: gate must be square 2^k x 2^k");
  if (gate.rows() != (std::size_t{1} << targets.size()))
    throw ShapeError("embed_local: gate size does not match target count");
  if (n > kMaxQubits)
    throw SizeError("embed_local: more than 12 qubits");
  for (std::size_t a = 0; a < targets.size(); ++a) {
    if (targets[a] < 0 || static_cast<unsigned>(targets[a]) >= n)
      throw ArgumentError("embed_local: target out of range");
    for (std::size_t b = a + 1; b < targets.size(); ++b)
      if (targets[a] == targets[b])
        throw ArgumentError("embed_local: duplicate target");
  }
  ComplexMatrix out = ComplexMatrix::identity(std::size_t{1} << n);
  kernels::parallel::apply_dense(out.block(), n, targets, gate.data());
  return out;
}

namespace {

void require_unitary(const ComplexMatrix &u, const char *where) {
  if (!u.is_square())
    throw ShapeError(std::string(where) + ": operator not square");
  const bool ok = u.rows() <= 256 ? check_unitary(u, kUnitaryTol)
                                  : quick_unitary_check(u, kUnitaryTol);
  if (!ok)
    throw ValidationError(std::string(where) + ": operator is not unitary");
}

} // namespace

DensityMatrix evolve_density(const DensityMatrix &rho, const ComplexMatrix &u) {
  require_unitary(u, "evolve_density");
  if (u.rows() != rho.dim())
    throw ArgumentError("evolve_density: dimension mismatch");
  return DensityMatrix(u * rho.matrix() * u.adjoint());
}

double unitarity_deviation(const ComplexMatrix &u) {
  if (!u.is_square())
    throw ShapeError("unitarity_deviation: not square");
  const ComplexMatrix g = u.adjoint() * u;
  double dev = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      dev = std::max(dev, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return dev;
}

bool check_unitary(const ComplexMatrix &u, double tol) {
  return unitarity_deviation(u) <= tol;
}

bool quick_unitary_check(const ComplexMatrix &u, double tol) {
  if (!u.is_square())
    return false;
  const std::size_t n = u.rows();
  std::vector<double> col_norm(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row_norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double m = std::norm(u(i, k));
      row_norm += m;
      col_norm[k] += m;
    }
    if (std::abs(row_norm - 1.0) > tol)
      return false;
  }
  for (double c : col_norm)
    if (std::abs(c - 1.0) > tol)
      return false;
  // Fixed probe with incommensurate phases.
  std::vector<Complex> x(n), ux(n, Complex{}), back(n, Complex{});
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k)
    x[k] = std::polar(scale, 0.7548776662466927 * static_cast<double>(k * k + 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      ux[i] += u(i, k) * x[k];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      back[k] += std::conj(u(i, k)) * ux[i];
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(back[k] - x[k]) > tol)
      return false;
  return true;
}

double min_hermitian_eigenvalue(const ComplexMatrix &h) {
  if (!h.is_square())
    throw ShapeError("min_hermitian_eigenvalue: not square");
  const auto n = static_cast<Eigen::Index>(h.rows());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

} // namespace qinterf
