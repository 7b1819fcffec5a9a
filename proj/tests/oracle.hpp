#pragma once

// Naive dense reference linear algebra used only by the tests. Deliberately
// independent of the library kernels.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "qinterf/linalg.hpp"

namespace oracle {

using C = std::complex<double>;

struct Mat {
  std::size_t n = 0;
  std::vector<C> a;

  explicit Mat(std::size_t dim = 0) : n(dim), a(dim * dim) {}
  C &operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  C operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  static Mat eye(std::size_t dim) {
    Mat m(dim);
    for (std::size_t i = 0; i < dim; ++i)
      m(i, i) = 1.0;
    return m;
  }
};

inline Mat mul(const Mat &x, const Mat &y) {
  Mat z(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k)
      for (std::size_t j = 0; j < x.n; ++j)
        z(i, j) += x(i, k) * y(k, j);
  return z;
}

inline Mat kron(const Mat &x, const Mat &y) {
  Mat z(x.n * y.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j)
      for (std::size_t k = 0; k < y.n; ++k)
        for (std::size_t l = 0; l < y.n; ++l)
          z(i * y.n + k, j * y.n + l) = x(i, j) * y(k, l);
  return z;
}

inline Mat h_theta(double t) {
  Mat m(2);
  m(0, 0) = std::cos(t);
  m(0, 1) = std::sin(t);
  m(1, 0) = std::sin(t);
  m(1, 1) = -std::cos(t);
  return m;
}

inline Mat pauli_x() {
  Mat m(2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

inline Mat pauli_z() {
  Mat m(2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

// Single-qubit matrices listed for qubit 0 (most significant) first.
inline Mat tensor(const std::vector<Mat> &factors) {
  Mat out = Mat::eye(1);
  for (const Mat &f : factors)
    out = kron(out, f);
  return out;
}

inline Mat reflection(std::size_t dim, std::size_t index) {
  Mat m = Mat::eye(dim);
  m(index, index) = -1.0;
  return m;
}

inline qinterf::ComplexMatrix to_matrix(const Mat &m) {
  return qinterf::ComplexMatrix(m.n, m.n, m.a);
}

inline Mat from_matrix(const qinterf::ComplexMatrix &m) {
  Mat out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(i, j) = m(i, j);
  return out;
}

inline double interference(const Mat &u) {
  double s = 0.0;
  for (const C &z : u.a)
    s += std::pow(std::norm(z), 2);
  return static_cast<double>(u.n) - s;
}

inline double max_diff(const Mat &x, const qinterf::ComplexMatrix &y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j)
      d = std::max(d, std::abs(x(i, j) - y(i, j)));
  return d;
}

// Gram-Schmidt on a complex Gaussian matrix: a unitary good enough for tests.
inline Mat random_unitary(std::size_t dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  std::vector<std::vector<C>> cols(dim, std::vector<C>(dim));
  for (auto &c : cols)
    for (auto &z : c)
      z = {g(rng), g(rng)};
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      C dot{};
      for (std::size_t i = 0; i < dim; ++i)
        dot += std::conj(cols[j][i]) * cols[k][i];
      for (std::size_t i = 0; i < dim; ++i)
        cols[k][i] -= dot * cols[j][i];
    }
    double norm = 0.0;
    for (const C &z : cols[k])
      norm += std::norm(z);
    norm = std::sqrt(norm);
    for (C &z : cols[k])
      z /= norm;
  }
  Mat u(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k)
      u(i, k) = cols[k][i];
  return u;
}

// Literal Kraus-form triple sum.
inline double kraus_interference(const std::vector<Mat> &ops) {
  const std::size_t n = ops.front().n;
  double first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      double diag = 0.0;
      for (const Mat &e : ops)
        diag += std::norm(e(i, k));
      second += diag * diag;
      for (std::size_t m = 0; m < n; ++m) {
        C s{};
        for (const Mat &e : ops)
          s += e(i, k) * std::conj(e(i, m));
        first += std::norm(s);
      }
    }
  }
  return first - second;
}

} // namespace oracle
