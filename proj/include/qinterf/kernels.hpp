#pragma once

// Dense row-block kernels. Every kernel has a plain serial reference in
// kernels::serial and an OpenMP version in kernels::parallel with the same
// signature. The parallel reductions store one partial per row and sum them
// in row order afterwards, so their result does not depend on the thread
// count.
//
// Gate kernels act on the row index of a (rows x cols) row-major block whose
// rows are the 2^n computational basis states. A state vector is the cols == 1
// case; a full operator U is updated to G*U by treating U as a row block.
// Qubit 0 is the most significant bit of the row index.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace qinterf {

using Complex = std::complex<double>;

// Bit position of qubit `q` inside an n-qubit basis index.
constexpr unsigned qubit_shift(unsigned q, unsigned n) { return n - 1 - q; }

// Local index of `row` restricted to `targets` (targets[0] is the most
// significant local bit).
std::uint64_t gather_bits(std::uint64_t row, std::span<const int> targets,
                          unsigned n);

// `row` with the target bits overwritten by `local`.
std::uint64_t scatter_bits(std::uint64_t row, std::uint64_t local,
                           std::span<const int> targets, unsigned n);

namespace kernels {

struct RowBlock {
  std::span<Complex> data;
  std::size_t rows;
  std::size_t cols;
};

struct ConstRowBlock {
  std::span<const Complex> data;
  std::size_t rows;
  std::size_t cols;
};

namespace serial {

// c (m x n) = a (m x k) * b (k x n)
void matmul(std::span<const Complex> a, std::span<const Complex> b,
            std::span<Complex> c, std::size_t m, std::size_t k, std::size_t n);

// 2x2 gate {g00, g01, g10, g11} on one qubit.
void apply_1q(RowBlock x, unsigned n, int qubit, const Complex (&g)[4]);

// Dense 2^k x 2^k gate on `targets`.
void apply_dense(RowBlock x, unsigned n, std::span<const int> targets,
                 std::span<const Complex> gate);

// Diagonal gate: row r is scaled by diag[local index of r on targets].
void apply_diagonal(RowBlock x, unsigned n, std::span<const int> targets,
                    std::span<const Complex> diag);

// Basis permutation: row r of `in` is written to row map(r) of `out`.
void apply_permutation(ConstRowBlock in, RowBlock out, unsigned n,
                       std::span<const int> targets,
                       std::span<const std::uint64_t> map);

double sum_abs4(ConstRowBlock x);

// Kraus first term sum_{i,k,m} |sum_l E_l[i,k] conj(E_l[i,m])|^2 through the
// per-row Gram matrix G_i = V_i V_i^dagger (V_i stacks row i of every op).
double kraus_first_term_gram(std::span<const Complex *const> ops,
                             std::size_t dim);

// Kraus second term sum_{i,k} (sum_l |E_l[i,k]|^2)^2.
double kraus_second_term(std::span<const Complex *const> ops, std::size_t dim);

// Literal triple sum of the first term, O(N^3 L). Test oracle only.
double kraus_first_term_naive(std::span<const Complex *const> ops,
                              std::size_t dim);

} // namespace serial

namespace parallel {

void matmul(std::span<const Complex> a, std::span<const Complex> b,
            std::span<Complex> c, std::size_t m, std::size_t k, std::size_t n);
void apply_1q(RowBlock x, unsigned n, int qubit, const Complex (&g)[4]);
void apply_dense(RowBlock x, unsigned n, std::span<const int> targets,
                 std::span<const Complex> gate);
void apply_diagonal(RowBlock x, unsigned n, std::span<const int> targets,
                    std::span<const Complex> diag);
void apply_permutation(ConstRowBlock in, RowBlock out, unsigned n,
                       std::span<const int> targets,
                       std::span<const std::uint64_t> map);
double sum_abs4(ConstRowBlock x);
double kraus_first_term_gram(std::span<const Complex *const> ops,
                             std::size_t dim);
double kraus_second_term(std::span<const Complex *const> ops, std::size_t dim);

} // namespace parallel

} // namespace kernels

// Worker count used by the parallel kernels and the sweep harness.
void set_num_threads(int threads);
int num_threads();
// True while executing inside an outer parallel region.
bool in_parallel_region();

} // namespace qinterf
