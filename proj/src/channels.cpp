#include "qinterf/channels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qinterf/errors.hpp"

namespace qinterf {
namespace {

// Materialized channels above this many stored entries are refused.
constexpr std::size_t kMaxChannelEntries = std::size_t{1} << 27;

double probe_completeness_deviation(const std::vector<ComplexMatrix> &ops) {
  const std::size_t n = ops.front().rows();
  double worst = 0.0;
  for (int probe = 0; probe < 2; ++probe) {
    std::vector<Complex> x(n), acc(n, Complex{});
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k)
      x[k] = std::polar(scale, (0.5698402909980532 + probe) *
                                   static_cast<double>(k * k + 3 * k + 1));
    std::vector<Complex> ex(n);
    for (const ComplexMatrix &e : ops) {
      std::fill(ex.begin(), ex.end(), Complex{});
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          ex[i] += e(i, k) * x[k];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          acc[k] += std::conj(e(i, k)) * ex[i];
    }
    for (std::size_t k = 0; k < n; ++k)
      worst = std::max(worst, std::abs(acc[k] - x[k]) *
                                  std::sqrt(static_cast<double>(n)));
  }
  return worst;
}

double exact_completeness_deviation(const std::vector<ComplexMatrix> &ops) {
  const std::size_t n = ops.front().rows();
  ComplexMatrix sum(n, n);
  for (const ComplexMatrix &e : ops)
    sum += e.adjoint() * e;
  return sum.max_abs_diff(ComplexMatrix::identity(n));
}

} // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops)
    : KrausChannel(std::move(ops), kStateTol) {}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops, double tol)
    : ops_(std::move(ops)) {
  if (ops_.empty())
    throw ArgumentError("KrausChannel: no operators");
  const std::size_t n = ops_.front().rows();
  for (const ComplexMatrix &e : ops_)
    if (e.rows() != n || e.cols() != n)
      throw ShapeError("KrausChannel: operators must all be N x N");
  if (n > kMaxDim)
    throw SizeError("KrausChannel: dimension exceeds 2^12");
  const double dev = n <= 64 ? exact_completeness_deviation(ops_)
                             : probe_completeness_deviation(ops_);
  if (dev > tol)
    throw ValidationError("KrausChannel: completeness violated by " +
                          std::to_string(dev));
}

double KrausChannel::completeness_deviation() const {
  return exact_completeness_deviation(ops_);
}

const char *to_string(ErrorKind kind) {
  return kind == ErrorKind::BitFlip ? "bitflip" : "phaseflip";
}

void ErrorModel::validate(unsigned n) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw ArgumentError("ErrorModel: p must lie in [0, 1], got " +
                        std::to_string(p));
  if (affected.size() > kMaxFlippedQubits)
    throw SizeError("ErrorModel: more than 20 affected qubits");
  for (std::size_t a = 0; a < affected.size(); ++a) {
    if (affected[a] < 0 || static_cast<unsigned>(affected[a]) >= n)
      throw ArgumentError("ErrorModel: affected qubit " +
                          std::to_string(affected[a]) + " outside register");
    for (std::size_t b = a + 1; b < affected.size(); ++b)
      if (affected[a] == affected[b])
        throw ArgumentError("ErrorModel: duplicate affected qubit");
  }
}

std::vector<PauliTerm> pauli_layer_terms(unsigned n, const ErrorModel &model) {
  model.validate(n);
  const std::size_t nf = model.affected.size();
  const double p = model.p;
  std::vector<PauliTerm> terms;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << nf); ++subset) {
    double weight = 1.0;
    std::uint64_t mask = 0;
    for (std::size_t b = 0; b < nf; ++b) {
      if ((subset >> b) & 1u) {
        weight *= p;
        mask |= std::uint64_t{1} << qubit_shift(model.affected[b], n);
      } else {
        weight *= 1.0 - p;
      }
    }
    if (weight > 0.0)
      terms.push_back({mask, weight});
  }
  return terms;
}

KrausChannel pauli_error_kraus(ErrorKind kind, double p) {
  ErrorModel model{kind, p, {0}};
  return layered_error_channel(1, model);
}

ComplexMatrix pauli_string_times(ErrorKind kind, std::uint64_t mask,
                                 const ComplexMatrix &m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.rows(); ++j) {
    if (kind == ErrorKind::BitFlip) {
      const auto src = m.row(j ^ mask);
      std::copy(src.begin(), src.end(), out.data().begin() + j * m.cols());
    } else {
      const double s = (std::popcount(j & mask) & 1) ? -1.0 : 1.0;
      const auto src = m.row(j);
      std::transform(src.begin(), src.end(),
                     out.data().begin() + j * m.cols(),
                     [s](const Complex &z) { return s * z; });
    }
  }
  return out;
}

ComplexMatrix times_pauli_string(const ComplexMatrix &m, ErrorKind kind,
                                 std::uint64_t mask) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) {
      if (kind == ErrorKind::BitFlip)
        out(i, k) = m(i, k ^ mask);
      else
        out(i, k) = (std::popcount(k & mask) & 1) ? -m(i, k) : m(i, k);
    }
  return out;
}

KrausChannel layered_error_channel(unsigned n, const ErrorModel &model) {
  if (n > kMaxQubits)
    throw SizeError("layered_error_channel: more than 12 qubits");
  const std::vector<PauliTerm> terms = pauli_layer_terms(n, model);
  const std::size_t dim = std::size_t{1} << n;
  if (terms.size() * dim * dim > kMaxChannelEntries)
    throw SizeError("layered_error_channel: channel too large to materialize");
  const ComplexMatrix id = ComplexMatrix::identity(dim);
  std::vector<ComplexMatrix> ops;
  ops.reserve(terms.size());
  for (const PauliTerm &t : terms) {
    ComplexMatrix e = pauli_string_times(model.kind, t.mask, id);
    e *= std::sqrt(t.weight);
    ops.push_back(std::move(e));
  }
  return KrausChannel(std::move(ops));
}

KrausChannel sandwich(const KrausChannel &ch, const ComplexMatrix &pre,
                      const ComplexMatrix &post) {
  if (pre.rows() != ch.dim() || pre.cols() != ch.dim() ||
      post.rows() != ch.dim() || post.cols() != ch.dim())
    throw ArgumentError("sandwich: dimension mismatch");
  std::vector<ComplexMatrix> ops;
  ops.reserve(ch.size());
  for (const ComplexMatrix &e : ch.ops())
    ops.push_back(post * e * pre);
  return KrausChannel(std::move(ops));
}

DensityMatrix apply_channel(const KrausChannel &ch, const DensityMatrix &rho) {
  if (ch.dim() != rho.dim())
    throw ArgumentError("apply_channel: dimension mismatch");
  ComplexMatrix out(rho.dim(), rho.dim());
  for (const ComplexMatrix &e : ch.ops())
    out += e * rho.matrix() * e.adjoint();
  return DensityMatrix(std::move(out));
}

PauliSandwich::PauliSandwich(unsigned n, ErrorModel model,
                             std::optional<ComplexMatrix> pre,
                             ComplexMatrix post)
    : n_(n), model_(std::move(model)), pre_(std::move(pre)),
      post_(std::move(post)) {
  if (n > kMaxQubits)
    throw SizeError("PauliSandwich: more than 12 qubits");
  const std::size_t dim = std::size_t{1} << n;
  if (post_.rows() != dim || post_.cols() != dim ||
      (pre_ && (pre_->rows() != dim || pre_->cols() != dim)))
    throw ArgumentError("PauliSandwich: dimension mismatch");
  terms_ = pauli_layer_terms(n, model_);
}

KrausChannel PauliSandwich::materialize() const {
  const std::size_t dim = post_.rows();
  if (terms_.size() * dim * dim > kMaxChannelEntries)
    throw SizeError("PauliSandwich: channel too large to materialize");
  std::vector<ComplexMatrix> ops;
  ops.reserve(terms_.size());
  for (const PauliTerm &t : terms_) {
    ComplexMatrix left = times_pauli_string(post_, model_.kind, t.mask);
    ComplexMatrix e = pre_ ? left * *pre_ : std::move(left);
    e *= std::sqrt(t.weight);
    ops.push_back(std::move(e));
  }
  return KrausChannel(std::move(ops));
}

std::vector<std::vector<Complex>>
PauliSandwich::output_ensemble(std::uint64_t index) const {
  const std::size_t dim = post_.rows();
  if (index >= dim)
    throw ArgumentError("PauliSandwich: input index out of range");
  std::vector<Complex> b(dim, Complex{});
  if (pre_)
    for (std::size_t j = 0; j < dim; ++j)
      b[j] = (*pre_)(j, index);
  else
    b[index] = 1.0;

  std::vector<std::vector<Complex>> members;
  members.reserve(terms_.size());
  std::vector<Complex> sb(dim);
  for (const PauliTerm &t : terms_) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (model_.kind == ErrorKind::BitFlip)
        sb[j] = b[j ^ t.mask];
      else
        sb[j] = (std::popcount(j & t.mask) & 1) ? -b[j] : b[j];
    }
    const double c = std::sqrt(t.weight);
    std::vector<Complex> out(dim, Complex{});
    for (std::size_t i = 0; i < dim; ++i) {
      Complex acc{};
      const auto row = post_.row(i);
      for (std::size_t j = 0; j < dim; ++j)
        acc += row[j] * sb[j];
      out[i] = c * acc;
    }
    members.push_back(std::move(out));
  }
  return members;
}

std::vector<double> PauliSandwich::output_probabilities(std::uint64_t index) const {
  const auto members = output_ensemble(index);
  std::vector<double> probs(post_.rows(), 0.0);
  for (const auto &psi : members)
    for (std::size_t i = 0; i < psi.size(); ++i)
      probs[i] += std::norm(psi[i]);
  return probs;
}

DensityMatrix PauliSandwich::output_state(std::uint64_t index) const {
  const auto members = output_ensemble(index);
  const std::size_t dim = post_.rows();
  ComplexMatrix rho(dim, dim);
  for (const auto &psi : members)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        rho(i, j) += psi[i] * std::conj(psi[j]);
  return DensityMatrix(std::move(rho));
}

} // namespace qinterf
