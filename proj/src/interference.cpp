#include "qinterf/interference.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "qinterf/errors.hpp"
#include "qinterf/kernels.hpp"

namespace qinterf {
namespace {

constexpr double kNegativeSlack = 1e-9;

std::vector<const Complex *> op_pointers(const KrausChannel &ch) {
  std::vector<const Complex *> ptrs;
  ptrs.reserve(ch.size());
  for (const ComplexMatrix &e : ch.ops())
    ptrs.push_back(e.data().data());
  return ptrs;
}

void require_complete(const KrausChannel &ch) {
  // Channels are validated at construction with a caller-chosen tolerance;
  // the measure itself needs kUnitaryTol.
  KrausChannel(ch.ops(), kUnitaryTol);
}

// In-place unnormalized Walsh-Hadamard transform, length a power of two.
template <typename T> void wht(std::span<T> v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1)
    for (std::size_t i = 0; i < v.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const T a = v[j];
        const T b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
}

// Splits a basis index into (rest, pattern) where pattern collects the bits
// of `affected_mask` (low to high) and rest the remaining bits.
struct BitSplit {
  std::vector<std::uint32_t> pattern; // per basis index
  std::vector<std::uint32_t> rest;
  std::size_t patterns;               // 2^{n_f}
  std::size_t rests;                  // N / 2^{n_f}
};

BitSplit split_bits(std::size_t dim, std::uint64_t affected_mask) {
  BitSplit s;
  s.patterns = std::size_t{1} << std::popcount(affected_mask);
  s.rests = dim / s.patterns;
  s.pattern.resize(dim);
  s.rest.resize(dim);
  for (std::uint64_t j = 0; j < dim; ++j) {
    std::uint32_t t = 0, u = 0;
    unsigned tb = 0, ub = 0;
    for (std::uint64_t bit = 0; (std::uint64_t{1} << bit) < dim; ++bit) {
      const std::uint32_t v = (j >> bit) & 1u;
      if ((affected_mask >> bit) & 1u)
        t |= v << tb++;
      else
        u |= v << ub++;
    }
    s.pattern[j] = t;
    s.rest[j] = u;
  }
  return s;
}

// Per-pattern product weights: factor `zero` for a clear bit, `one` for a
// set bit.
std::vector<double> product_weights(std::size_t patterns, double zero,
                                    double one) {
  std::vector<double> w(patterns);
  for (std::size_t s = 0; s < patterns; ++s) {
    double v = 1.0;
    for (std::size_t b = 0; (std::size_t{1} << b) < patterns; ++b)
      v *= ((s >> b) & 1u) ? one : zero;
    w[s] = v;
  }
  return w;
}

// Normalized Hadamard on every qubit set in `mask`, applied to the rows.
void hadamard_rows(ComplexMatrix &m, std::uint64_t mask, unsigned n) {
  const double r = std::numbers::sqrt2 / 2;
  const Complex h[4] = {r, r, r, -r};
  for (unsigned q = 0; q < n; ++q)
    if ((mask >> qubit_shift(q, n)) & 1u)
      kernels::parallel::apply_1q(m.block(), n, static_cast<int>(q), h);
}

// m * H_mask (H symmetric, so this is (H m^T)^T).
ComplexMatrix hadamard_cols(const ComplexMatrix &m, std::uint64_t mask,
                            unsigned n) {
  ComplexMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k)
      t(k, i) = m(i, k);
  hadamard_rows(t, mask, n);
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k)
      out(i, k) = t(k, i);
  return out;
}

} // namespace

double ibits(double value) {
  if (value < -kNegativeSlack)
    throw ArgumentError("ibits: negative interference " + std::to_string(value));
  if (value <= 0.0)
    return -std::numeric_limits<double>::infinity();
  return std::log2(value);
}

InterferenceReport make_report(double value) {
  if (value < -kNegativeSlack)
    throw ValidationError("interference evaluated to " + std::to_string(value));
  if (value < 0.0)
    value = 0.0;
  return {value, ibits(value)};
}

InterferenceReport interference_unitary(const ComplexMatrix &u) {
  if (!u.is_square())
    throw ShapeError("interference_unitary: matrix not square");
  const bool ok = u.rows() <= 256 ? check_unitary(u, kUnitaryTol)
                                  : quick_unitary_check(u, kUnitaryTol);
  if (!ok)
    throw ValidationError("interference_unitary: matrix is not unitary");
  const double quartic = kernels::parallel::sum_abs4(u.block());
  return make_report(static_cast<double>(u.rows()) - quartic);
}

InterferenceReport interference_kraus(const KrausChannel &ch) {
  require_complete(ch);
  const auto ptrs = op_pointers(ch);
  const double first = kernels::parallel::kraus_first_term_gram(ptrs, ch.dim());
  const double second = kernels::parallel::kraus_second_term(ptrs, ch.dim());
  return make_report(first - second);
}

double interference_kraus_naive(const KrausChannel &ch) {
  const auto ptrs = op_pointers(ch);
  return kernels::serial::kraus_first_term_naive(ptrs, ch.dim()) -
         kernels::serial::kraus_second_term(ptrs, ch.dim());
}

// Kraus operators E_l = c_l A S_l B with S_l a Pauli string on the affected
// qubits. Bit-flip strings are turned into phase-flip strings by
// X_M = H Z_M H, so A' = A H_aff and B' = H_aff B.
//
// First term. G_i[l,l'] = c_l c_l' a'_i Z_{l xor l'} a'_i^dagger, hence
//   T1 = sum_i sum_s g_i(s)^2 w(s),  g_i = WHT(h_i),
//   h_i(t) = sum_{j : pattern(j) = t} |A'_ij|^2,
//   w(s) = prod_b ((1-p)^2 + p^2 | 2p(1-p)).
// B drops out because it is unitary.
//
// Second term. Q_ik = sum_l c_l^2 |(A' Z_l B')_ik|^2 with
//   (A' Z_l B')_ik = WHT_t(Y_i(t, k))(l),
//   Y_i(t, k) = sum_{j : pattern(j) = t} A'_ij B'_jk.
// Without B the phase-flip case is Q = |A|^2 and the bit-flip case is an XOR
// convolution of |A_i|^2 with the error distribution.
InterferenceReport interference_kraus(const PauliSandwich &ch) {
  const double p = ch.model().p;
  return interference_kraus_over_p(ch, std::span<const double>(&p, 1)).front();
}

std::vector<InterferenceReport>
interference_kraus_over_p(const PauliSandwich &ch, std::span<const double> ps) {
  const unsigned n = ch.num_qubits();
  const std::size_t dim = ch.dim();
  const ErrorModel &model = ch.model();
  for (double p : ps)
    if (!(p >= 0.0 && p <= 1.0))
      throw ArgumentError("interference_kraus_over_p: p outside [0, 1]");
  std::uint64_t affected_mask = 0;
  for (int q : model.affected)
    affected_mask |= std::uint64_t{1} << qubit_shift(q, n);

  const bool bitflip = model.kind == ErrorKind::BitFlip;
  const BitSplit split = split_bits(dim, affected_mask);
  const std::size_t patterns = split.patterns;
  const std::size_t np = ps.size();

  const ComplexMatrix &a = ch.post();
  const ComplexMatrix a_prime =
      bitflip ? hadamard_cols(a, affected_mask, n) : a;
  // Per p: w for the first term, c_l^2 and its WHT for the second.
  std::vector<std::vector<double>> w(np), c2(np), c2_hat(np);
  for (std::size_t x = 0; x < np; ++x) {
    const double p = ps[x];
    w[x] = product_weights(patterns, (1 - p) * (1 - p) + p * p, 2 * p * (1 - p));
    c2[x] = product_weights(patterns, 1 - p, p);
    c2_hat[x] = product_weights(patterns, 1.0, 1 - 2 * p);
  }

  std::optional<ComplexMatrix> b_prime;
  if (ch.pre()) {
    b_prime = *ch.pre();
    if (bitflip)
      hadamard_rows(*b_prime, affected_mask, n);
  }

  // partial[i * np + x]: row i at ps[x].
  std::vector<double> partial(dim * np);
  const auto rows = static_cast<std::int64_t>(dim);
#pragma omp parallel if (dim >= 64)
  {
    std::vector<double> h(patterns);
    std::vector<Complex> y;
    std::vector<Complex> col(patterns);
    std::vector<double> mags(patterns);
    std::vector<double> grouped;
    std::vector<double> t2(np);
    if (b_prime)
      y.resize(patterns * dim);
#pragma omp for schedule(static)
    for (std::int64_t ii = 0; ii < rows; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      const auto arow = a_prime.row(i);

      std::fill(h.begin(), h.end(), 0.0);
      for (std::size_t j = 0; j < dim; ++j)
        h[split.pattern[j]] += std::norm(arow[j]);
      wht(std::span<double>(h));

      std::fill(t2.begin(), t2.end(), 0.0);
      if (b_prime) {
        std::fill(y.begin(), y.end(), Complex{});
        for (std::size_t j = 0; j < dim; ++j) {
          const Complex aij = arow[j];
          if (aij == Complex{})
            continue;
          Complex *yt = y.data() + split.pattern[j] * dim;
          const auto brow = b_prime->row(j);
          for (std::size_t k = 0; k < dim; ++k)
            yt[k] += aij * brow[k];
        }
        for (std::size_t k = 0; k < dim; ++k) {
          for (std::size_t t = 0; t < patterns; ++t)
            col[t] = y[t * dim + k];
          wht(std::span<Complex>(col));
          for (std::size_t l = 0; l < patterns; ++l)
            mags[l] = std::norm(col[l]);
          for (std::size_t x = 0; x < np; ++x) {
            double qik = 0.0;
            for (std::size_t l = 0; l < patterns; ++l)
              qik += c2[x][l] * mags[l];
            t2[x] += qik * qik;
          }
        }
      } else if (!bitflip) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          const double m = std::norm(a(i, k));
          s += m * m;
        }
        std::fill(t2.begin(), t2.end(), s);
      } else {
        const auto orow = a.row(i);
        // Group |A_ik|^2 by the unaffected bits, then convolve over the
        // affected pattern with the error distribution.
        grouped.resize(2 * dim);
        double *base = grouped.data();
        double *conv = grouped.data() + dim;
        for (std::size_t k = 0; k < dim; ++k)
          base[split.rest[k] * patterns + split.pattern[k]] = std::norm(orow[k]);
        for (std::size_t u = 0; u < split.rests; ++u)
          wht(std::span<double>(base + u * patterns, patterns));
        for (std::size_t x = 0; x < np; ++x) {
          for (std::size_t u = 0; u < split.rests; ++u) {
            std::span<double> g(conv + u * patterns, patterns);
            for (std::size_t t = 0; t < patterns; ++t)
              g[t] = base[u * patterns + t] * c2_hat[x][t];
            wht(g);
            for (std::size_t t = 0; t < patterns; ++t) {
              const double qik = g[t] / static_cast<double>(patterns);
              t2[x] += qik * qik;
            }
          }
        }
      }
      for (std::size_t x = 0; x < np; ++x) {
        double t1 = 0.0;
        for (std::size_t s = 0; s < patterns; ++s)
          t1 += h[s] * h[s] * w[x][s];
        partial[i * np + x] = t1 - t2[x];
      }
    }
  }
  std::vector<InterferenceReport> out;
  out.reserve(np);
  for (std::size_t x = 0; x < np; ++x) {
    double total = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      total += partial[i * np + x];
    out.push_back(make_report(total));
  }
  return out;
}

Superoperator::Superoperator(ComplexMatrix entries)
    : dim_(0), entries_(std::move(entries)) {
  if (!entries_.is_square())
    throw ShapeError("Superoperator: matrix not square");
  const auto root = static_cast<std::size_t>(
      std::llround(std::sqrt(static_cast<double>(entries_.rows()))));
  if (root * root != entries_.rows())
    throw ShapeError("Superoperator: size is not N^2");
  if (root > kMaxSuperoperatorDim)
    throw SizeError("Superoperator: N exceeds 64");
  dim_ = root;
}

ComplexMatrix Superoperator::apply(const ComplexMatrix &rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_)
    throw ArgumentError("Superoperator::apply: dimension mismatch");
  ComplexMatrix vec(dim_ * dim_, 1,
                    std::vector<Complex>(rho.data().begin(), rho.data().end()));
  const ComplexMatrix out = entries_ * vec;
  return ComplexMatrix(dim_, dim_,
                       std::vector<Complex>(out.data().begin(), out.data().end()));
}

Superoperator superoperator_from_kraus(const KrausChannel &ch) {
  const std::size_t n = ch.dim();
  if (n > kMaxSuperoperatorDim)
    throw SizeError("superoperator_from_kraus: N exceeds 64");
  ComplexMatrix p(n * n, n * n);
  for (const ComplexMatrix &e : ch.ops())
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex eik = e(i, k);
          if (eik == Complex{})
            continue;
          for (std::size_t l = 0; l < n; ++l)
            p(i * n + j, k * n + l) += eik * std::conj(e(j, l));
        }
  return Superoperator(std::move(p));
}

InterferenceReport interference_superoperator(const Superoperator &p) {
  const std::size_t n = p.dim();
  double first = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = 0; l < n; ++l)
        first += std::norm(p(i, i, k, l));
      second += std::norm(p(i, i, k, k));
    }
  return make_report(first - second);
}

} // namespace qinterf
