#include "qinterf/kernels.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qinterf {

std::uint64_t gather_bits(std::uint64_t row, std::span<const int> targets,
                          unsigned n) {
  std::uint64_t local = 0;
  for (int t : targets)
    local = (local << 1) | ((row >> qubit_shift(t, n)) & 1u);
  return local;
}

std::uint64_t scatter_bits(std::uint64_t row, std::uint64_t local,
                           std::span<const int> targets, unsigned n) {
  const std::size_t k = targets.size();
  for (std::size_t b = 0; b < k; ++b) {
    const unsigned shift = qubit_shift(targets[b], n);
    const std::uint64_t bit = (local >> (k - 1 - b)) & 1u;
    row = (row & ~(std::uint64_t{1} << shift)) | (bit << shift);
  }
  return row;
}

void set_num_threads(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(1, threads));
#else
  (void)threads;
#endif
}

int num_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool in_parallel_region() {
#ifdef _OPENMP
  return omp_in_parallel() != 0;
#else
  return false;
#endif
}

namespace kernels {
namespace {

// Below this many complex multiply-adds a kernel stays on one thread.
constexpr std::size_t kParallelWork = std::size_t{1} << 14;

// Inserts a zero bit at `shift` into `p`.
inline std::uint64_t insert_zero(std::uint64_t p, unsigned shift) {
  const std::uint64_t low = p & ((std::uint64_t{1} << shift) - 1);
  return ((p >> shift) << (shift + 1)) | low;
}

// Row index of the group `g` base (all target bits zero) for sorted shifts.
inline std::uint64_t group_base(std::uint64_t g,
                                std::span<const unsigned> sorted_shifts) {
  for (unsigned s : sorted_shifts)
    g = insert_zero(g, s);
  return g;
}

struct DenseLayout {
  std::vector<unsigned> sorted_shifts;
  std::vector<std::uint64_t> offsets; // row offset of each local index
};

DenseLayout dense_layout(std::span<const int> targets, unsigned n) {
  DenseLayout layout;
  const std::size_t k = targets.size();
  for (int t : targets)
    layout.sorted_shifts.push_back(qubit_shift(t, n));
  std::sort(layout.sorted_shifts.begin(), layout.sorted_shifts.end());
  layout.offsets.resize(std::size_t{1} << k);
  for (std::uint64_t local = 0; local < layout.offsets.size(); ++local)
    layout.offsets[local] = scatter_bits(0, local, targets, n);
  return layout;
}

inline void dense_group(RowBlock x, const DenseLayout &layout,
                        std::uint64_t base, std::span<const Complex> gate,
                        std::vector<Complex> &tmp) {
  const std::size_t dim = layout.offsets.size();
  for (std::size_t c = 0; c < x.cols; ++c) {
    for (std::size_t a = 0; a < dim; ++a)
      tmp[a] = x.data[(base + layout.offsets[a]) * x.cols + c];
    for (std::size_t a = 0; a < dim; ++a) {
      Complex acc{};
      const Complex *grow = gate.data() + a * dim;
      for (std::size_t b = 0; b < dim; ++b)
        acc += grow[b] * tmp[b];
      x.data[(base + layout.offsets[a]) * x.cols + c] = acc;
    }
  }
}

inline double row_gram_term(std::span<const Complex *const> ops,
                            std::size_t dim, std::size_t i) {
  const std::size_t count = ops.size();
  double diag = 0.0;
  double off = 0.0;
  for (std::size_t a = 0; a < count; ++a) {
    const Complex *va = ops[a] + i * dim;
    for (std::size_t b = a; b < count; ++b) {
      const Complex *vb = ops[b] + i * dim;
      Complex g{};
      for (std::size_t k = 0; k < dim; ++k)
        g += va[k] * std::conj(vb[k]);
      if (a == b)
        diag += std::norm(g);
      else
        off += std::norm(g);
    }
  }
  return diag + 2.0 * off;
}

inline double row_second_term(std::span<const Complex *const> ops,
                              std::size_t dim, std::size_t i) {
  double acc = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double q = 0.0;
    for (const Complex *op : ops)
      q += std::norm(op[i * dim + k]);
    acc += q * q;
  }
  return acc;
}

inline double row_abs4(ConstRowBlock x, std::size_t r) {
  double acc = 0.0;
  for (std::size_t c = 0; c < x.cols; ++c) {
    const double m = std::norm(x.data[r * x.cols + c]);
    acc += m * m;
  }
  return acc;
}

} // namespace

namespace serial {

void matmul(std::span<const Complex> a, std::span<const Complex> b,
            std::span<Complex> c, std::size_t m, std::size_t k,
            std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{};
      for (std::size_t p = 0; p < k; ++p)
        acc += a[i * k + p] * b[p * n + j];
      c[i * n + j] = acc;
    }
}

void apply_1q(RowBlock x, unsigned n, int qubit, const Complex (&g)[4]) {
  const std::uint64_t mask = std::uint64_t{1} << qubit_shift(qubit, n);
  for (std::uint64_t r0 = 0; r0 < x.rows; ++r0) {
    if (r0 & mask)
      continue;
    const std::uint64_t r1 = r0 | mask;
    for (std::size_t c = 0; c < x.cols; ++c) {
      const Complex a = x.data[r0 * x.cols + c];
      const Complex b = x.data[r1 * x.cols + c];
      x.data[r0 * x.cols + c] = g[0] * a + g[1] * b;
      x.data[r1 * x.cols + c] = g[2] * a + g[3] * b;
    }
  }
}

void apply_dense(RowBlock x, unsigned n, std::span<const int> targets,
                 std::span<const Complex> gate) {
  const std::size_t dim = std::size_t{1} << targets.size();
  std::vector<Complex> in(dim), out(dim);
  std::vector<bool> done(x.rows, false);
  for (std::uint64_t r = 0; r < x.rows; ++r) {
    if (done[r])
      continue;
    const std::uint64_t base = scatter_bits(r, 0, targets, n);
    for (std::size_t c = 0; c < x.cols; ++c) {
      for (std::uint64_t l = 0; l < dim; ++l)
        in[l] = x.data[scatter_bits(base, l, targets, n) * x.cols + c];
      for (std::uint64_t a = 0; a < dim; ++a) {
        out[a] = 0.0;
        for (std::uint64_t b = 0; b < dim; ++b)
          out[a] += gate[a * dim + b] * in[b];
      }
      for (std::uint64_t l = 0; l < dim; ++l)
        x.data[scatter_bits(base, l, targets, n) * x.cols + c] = out[l];
    }
    for (std::uint64_t l = 0; l < dim; ++l)
      done[scatter_bits(base, l, targets, n)] = true;
  }
}

void apply_diagonal(RowBlock x, unsigned n, std::span<const int> targets,
                    std::span<const Complex> diag) {
  for (std::uint64_t r = 0; r < x.rows; ++r) {
    const Complex d = diag[gather_bits(r, targets, n)];
    for (std::size_t c = 0; c < x.cols; ++c)
      x.data[r * x.cols + c] *= d;
  }
}

void apply_permutation(ConstRowBlock in, RowBlock out, unsigned n,
                       std::span<const int> targets,
                       std::span<const std::uint64_t> map) {
  for (std::uint64_t r = 0; r < in.rows; ++r) {
    const std::uint64_t dst =
        scatter_bits(r, map[gather_bits(r, targets, n)], targets, n);
    for (std::size_t c = 0; c < in.cols; ++c)
      out.data[dst * out.cols + c] = in.data[r * in.cols + c];
  }
}

double sum_abs4(ConstRowBlock x) {
  double acc = 0.0;
  for (const Complex &z : x.data) {
    const double m = std::norm(z);
    acc += m * m;
  }
  return acc;
}

double kraus_first_term_gram(std::span<const Complex *const> ops,
                             std::size_t dim) {
  const std::size_t count = ops.size();
  std::vector<Complex> gram(count * count);
  double total = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t a = 0; a < count; ++a)
      for (std::size_t b = 0; b < count; ++b) {
        Complex g{};
        for (std::size_t k = 0; k < dim; ++k)
          g += ops[a][i * dim + k] * std::conj(ops[b][i * dim + k]);
        gram[a * count + b] = g;
      }
    // trace(G^2) = sum |G_ab|^2 for Hermitian G
    for (const Complex &g : gram)
      total += std::norm(g);
  }
  return total;
}

double kraus_second_term(std::span<const Complex *const> ops,
                         std::size_t dim) {
  double total = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k) {
      double q = 0.0;
      for (const Complex *op : ops)
        q += std::norm(op[i * dim + k]);
      total += q * q;
    }
  return total;
}

double kraus_first_term_naive(std::span<const Complex *const> ops,
                              std::size_t dim) {
  double total = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t m = 0; m < dim; ++m) {
        Complex s{};
        for (const Complex *op : ops)
          s += op[i * dim + k] * std::conj(op[i * dim + m]);
        total += std::norm(s);
      }
  return total;
}

} // namespace serial

namespace parallel {

void matmul(std::span<const Complex> a, std::span<const Complex> b,
            std::span<Complex> c, std::size_t m, std::size_t k,
            std::size_t n) {
  const auto rows = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static) if (m * k * n > kParallelWork)
  for (std::int64_t i = 0; i < rows; ++i) {
    Complex *crow = c.data() + i * n;
    std::fill(crow, crow + n, Complex{});
    for (std::size_t p = 0; p < k; ++p) {
      const Complex aip = a[i * k + p];
      if (aip == Complex{})
        continue;
      // Plain real arithmetic so the loop vectorizes (no __muldc3 calls).
      const double ar = aip.real(), ai = aip.imag();
      const double *brow = reinterpret_cast<const double *>(b.data() + p * n);
      double *cr = reinterpret_cast<double *>(crow);
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[2 * j], bi = brow[2 * j + 1];
        cr[2 * j] += ar * br - ai * bi;
        cr[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void apply_1q(RowBlock x, unsigned n, int qubit, const Complex (&g)[4]) {
  const unsigned shift = qubit_shift(qubit, n);
  const std::uint64_t mask = std::uint64_t{1} << shift;
  const auto pairs = static_cast<std::int64_t>(x.rows / 2);
  const Complex g0 = g[0], g1 = g[1], g2 = g[2], g3 = g[3];
#pragma omp parallel for schedule(static) if (x.rows * x.cols > kParallelWork)
  for (std::int64_t p = 0; p < pairs; ++p) {
    const std::uint64_t r0 = insert_zero(static_cast<std::uint64_t>(p), shift);
    double *row0 = reinterpret_cast<double *>(x.data.data() + r0 * x.cols);
    double *row1 = reinterpret_cast<double *>(x.data.data() + (r0 | mask) * x.cols);
    for (std::size_t c = 0; c < 2 * x.cols; c += 2) {
      const double ar = row0[c], ai = row0[c + 1];
      const double br = row1[c], bi = row1[c + 1];
      row0[c] = (g0.real() * ar - g0.imag() * ai) + (g1.real() * br - g1.imag() * bi);
      row0[c + 1] = (g0.real() * ai + g0.imag() * ar) + (g1.real() * bi + g1.imag() * br);
      row1[c] = (g2.real() * ar - g2.imag() * ai) + (g3.real() * br - g3.imag() * bi);
      row1[c + 1] = (g2.real() * ai + g2.imag() * ar) + (g3.real() * bi + g3.imag() * br);
    }
  }
}

void apply_dense(RowBlock x, unsigned n, std::span<const int> targets,
                 std::span<const Complex> gate) {
  const DenseLayout layout = dense_layout(targets, n);
  const std::size_t dim = layout.offsets.size();
  const auto groups = static_cast<std::int64_t>(x.rows / dim);
#pragma omp parallel if (x.rows * x.cols * dim > kParallelWork)
  {
    std::vector<Complex> tmp(dim);
#pragma omp for schedule(static)
    for (std::int64_t g = 0; g < groups; ++g)
      dense_group(x, layout,
                  group_base(static_cast<std::uint64_t>(g),
                             layout.sorted_shifts),
                  gate, tmp);
  }
}

void apply_diagonal(RowBlock x, unsigned n, std::span<const int> targets,
                    std::span<const Complex> diag) {
  const auto rows = static_cast<std::int64_t>(x.rows);
#pragma omp parallel for schedule(static) if (x.rows * x.cols > kParallelWork)
  for (std::int64_t r = 0; r < rows; ++r) {
    const Complex d = diag[gather_bits(static_cast<std::uint64_t>(r), targets, n)];
    if (d == Complex{1.0, 0.0})
      continue;
    Complex *row = x.data.data() + r * x.cols;
    for (std::size_t c = 0; c < x.cols; ++c)
      row[c] *= d;
  }
}

void apply_permutation(ConstRowBlock in, RowBlock out, unsigned n,
                       std::span<const int> targets,
                       std::span<const std::uint64_t> map) {
  const auto rows = static_cast<std::int64_t>(in.rows);
#pragma omp parallel for schedule(static) if (in.rows * in.cols > kParallelWork)
  for (std::int64_t r = 0; r < rows; ++r) {
    const auto src = static_cast<std::uint64_t>(r);
    const std::uint64_t dst =
        scatter_bits(src, map[gather_bits(src, targets, n)], targets, n);
    std::copy_n(in.data.data() + src * in.cols, in.cols,
                out.data.data() + dst * out.cols);
  }
}

double sum_abs4(ConstRowBlock x) {
  std::vector<double> partial(x.rows);
  const auto rows = static_cast<std::int64_t>(x.rows);
#pragma omp parallel for schedule(static) if (x.rows * x.cols > kParallelWork)
  for (std::int64_t r = 0; r < rows; ++r)
    partial[r] = row_abs4(x, static_cast<std::size_t>(r));
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

double kraus_first_term_gram(std::span<const Complex *const> ops,
                             std::size_t dim) {
  std::vector<double> partial(dim);
  const auto rows = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static) if (dim * dim * ops.size() * ops.size() > kParallelWork)
  for (std::int64_t i = 0; i < rows; ++i)
    partial[i] = row_gram_term(ops, dim, static_cast<std::size_t>(i));
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

double kraus_second_term(std::span<const Complex *const> ops,
                         std::size_t dim) {
  std::vector<double> partial(dim);
  const auto rows = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static) if (dim * dim * ops.size() > kParallelWork)
  for (std::int64_t i = 0; i < rows; ++i)
    partial[i] = row_second_term(ops, dim, static_cast<std::size_t>(i));
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

} // namespace parallel
} // namespace kernels
} // namespace qinterf
