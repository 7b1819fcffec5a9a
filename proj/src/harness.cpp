#include "qinterf/harness.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "qinterf/errors.hpp"
#include "qinterf/interference.hpp"

namespace qinterf {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;

struct Sample {
  double pa = kNotComputed;
  double au = kNotComputed;
  double success = kNotComputed;
};

// Runs f(0..count-1) on `threads` workers. Results must be index-addressed by
// the caller; the first exception (by task index) is rethrown.
template <typename F> void for_each_task(std::size_t count, int threads, F &&f) {
  std::vector<std::exception_ptr> errors(count);
  const auto total = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (std::int64_t t = 0; t < total; ++t) {
    try {
      f(static_cast<std::size_t>(t));
    } catch (...) {
      errors[static_cast<std::size_t>(t)] = std::current_exception();
    }
  }
  for (const std::exception_ptr &e : errors)
    if (e)
      std::rethrow_exception(e);
}

void require_grid(const std::vector<double> &grid, const char *what) {
  if (grid.empty())
    throw ArgumentError(std::string(what) + " grid is empty");
  for (double v : grid)
    if (!std::isfinite(v))
      throw ArgumentError(std::string(what) + " grid has a non-finite value");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw ArgumentError(std::string(what) + " grid must be strictly increasing");
}

// Fixed algorithm data shared by every task of a sweep.
struct Context {
  AlgorithmVariant algorithm;
  std::vector<std::uint64_t> alphas;
  std::vector<double> shor_ideal;
  OutputSelection outputs;

  bool is_grover() const { return std::holds_alternative<GroverSpec>(algorithm); }
  const GroverSpec &grover() const { return std::get<GroverSpec>(algorithm); }
  const ShorSpec &shor() const { return std::get<ShorSpec>(algorithm); }
};

Context make_context(const ExperimentSpec &spec) {
  spec.validate();
  Context ctx{spec.algorithm, {}, {}, spec.outputs};
  if (ctx.is_grover()) {
    const GroverSpec &g = ctx.grover();
    if (spec.average_over_alpha) {
      ctx.alphas.resize(g.dim());
      std::iota(ctx.alphas.begin(), ctx.alphas.end(), std::uint64_t{0});
    } else {
      ctx.alphas = {g.alpha};
    }
  } else {
    const ShorSpec &s = ctx.shor();
    ctx.alphas = {0};
    if (spec.outputs.success)
      ctx.shor_ideal =
          circuit_apply(build_shor(s, ShorAngles::exact(s)).full,
                        StateVector::basis(s.dim(), 0))
              .probabilities();
  }
  return ctx;
}

GroverSpec with_alpha(const GroverSpec &g, std::uint64_t alpha) {
  GroverSpec out = g;
  out.alpha = alpha;
  return out;
}

double success_of(const Context &ctx, std::uint64_t alpha,
                  std::span<const double> probs) {
  return ctx.is_grover() ? grover_success(probs, alpha)
                         : shor_success(ctx.shor_ideal, probs);
}

Sample evaluate_circuit(const Context &ctx, const SplitCircuit &sc,
                        std::uint64_t alpha) {
  Sample s;
  if (ctx.outputs.au)
    s.au = interference_unitary(circuit_unitary(sc.rest)).value;
  if (ctx.outputs.pa) {
    const ComplexMatrix full = circuit_unitary(sc.full);
    s.pa = interference_unitary(full).value;
    if (ctx.outputs.success) {
      std::vector<double> probs(full.rows());
      for (std::size_t i = 0; i < full.rows(); ++i)
        probs[i] = std::norm(full(i, 0));
      s.success = success_of(ctx, alpha, probs);
    }
  } else if (ctx.outputs.success) {
    const StateVector out =
        circuit_apply(sc.full, StateVector::basis(sc.full.dim(), 0));
    s.success = success_of(ctx, alpha, out.probabilities());
  }
  return s;
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample standard deviation / sqrt(count); 0 for a single value.
double standard_error(std::span<const double> v) {
  if (v.size() < 2)
    return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v)
    ss += (x - m) * (x - m);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return sd / std::sqrt(static_cast<double>(v.size()));
}

Sample average(std::span<const Sample> samples) {
  Sample out;
  if (samples.empty())
    return out;
  out.pa = out.au = out.success = 0.0;
  for (const Sample &s : samples) {
    out.pa += s.pa;
    out.au += s.au;
    out.success += s.success;
  }
  const auto count = static_cast<double>(samples.size());
  out.pa /= count;
  out.au /= count;
  out.success /= count;
  return out;
}

void fill_measures(ResultRow &row, const Sample &mean, const OutputSelection &sel) {
  if (sel.pa) {
    row.interference_pa = make_report(mean.pa).value;
    row.ibits_pa = ibits(row.interference_pa);
  }
  if (sel.au) {
    row.interference_au = make_report(mean.au).value;
    row.ibits_au = ibits(row.interference_au);
  }
  if (sel.success)
    row.success = std::clamp(mean.success, 0.0, 1.0);
}

std::vector<double> grover_angles_random(const GroverSpec &g,
                                         const RandomAngleSampler &sampler,
                                         double eps, std::size_t grid,
                                         std::size_t realization) {
  std::vector<double> thetas(g.hadamard_count());
  for (std::size_t d = 0; d < thetas.size(); ++d)
    thetas[d] = sampler.around(kQuarterPi, eps, grid, realization, d);
  return thetas;
}

ShorAngles shor_angles_random(const ShorSpec &s, const RandomAngleSampler &sampler,
                              double eps, std::size_t grid,
                              std::size_t realization) {
  const unsigned m = s.first_register();
  ShorAngles a;
  std::uint64_t d = 0;
  for (unsigned q = 0; q < m; ++q)
    a.initial.push_back(sampler.around(kQuarterPi, eps, grid, realization, d++));
  for (unsigned q = 0; q < m; ++q)
    a.qft_hadamards.push_back(sampler.around(kQuarterPi, eps, grid, realization, d++));
  for (std::size_t c = 0; c < qft_phase_count(m); ++c)
    a.qft_phases.push_back(sampler.around(0.0, eps, grid, realization, d++));
  return a;
}

// |post S_l pre |0>|^2 for every Pauli pattern l over `affected`, including
// terms whose weight vanishes at some p.
std::vector<std::vector<double>>
pattern_probabilities(const AlgorithmUnitaries &u, ErrorKind kind,
                      const std::vector<int> &affected) {
  const std::size_t dim = u.rest.rows();
  const unsigned n = log2_exact(dim);
  std::vector<Complex> b(dim), sb(dim);
  for (std::size_t j = 0; j < dim; ++j)
    b[j] = u.walsh(j, 0);
  const std::size_t patterns = std::size_t{1} << affected.size();
  std::vector<std::vector<double>> out(patterns, std::vector<double>(dim));
  for (std::size_t l = 0; l < patterns; ++l) {
    std::uint64_t mask = 0;
    for (std::size_t bit = 0; bit < affected.size(); ++bit)
      if ((l >> bit) & 1u)
        mask |= std::uint64_t{1} << qubit_shift(affected[bit], n);
    for (std::size_t j = 0; j < dim; ++j) {
      if (kind == ErrorKind::BitFlip)
        sb[j] = b[j ^ mask];
      else
        sb[j] = (std::popcount(j & mask) & 1) ? -b[j] : b[j];
    }
    for (std::size_t i = 0; i < dim; ++i) {
      Complex acc{};
      const auto row = u.rest.row(i);
      for (std::size_t j = 0; j < dim; ++j)
        acc += row[j] * sb[j];
      out[l][i] = std::norm(acc);
    }
  }
  return out;
}

std::string format_real(double v) {
  if (std::isnan(v))
    return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double parse_real(const std::string &field) {
  if (field.empty())
    return kNotComputed;
  char *end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size())
    throw ArgumentError("parse_results_csv: bad number '" + field + "'");
  return v;
}

std::uint64_t parse_unsigned(const std::string &field) {
  char *end = nullptr;
  const std::uint64_t v = std::strtoull(field.c_str(), &end, 10);
  if (field.empty() || end != field.c_str() + field.size())
    throw ArgumentError("parse_results_csv: bad integer '" + field + "'");
  return v;
}

nlohmann::ordered_json real_json(double v) {
  if (!std::isfinite(v))
    return nullptr;
  return v;
}

double json_real(const nlohmann::json &j) {
  return j.is_null() ? kNotComputed : j.get<double>();
}

// ibits serialized as null with a zero interference was -infinity.
double restore_ibits(double ibits_value, double interference) {
  if (std::isnan(ibits_value) && interference == 0.0)
    return -std::numeric_limits<double>::infinity();
  return ibits_value;
}

} // namespace

void ExperimentSpec::validate() const {
  if (parallel < 1)
    throw ArgumentError("parallel must be at least 1");
  std::visit([](const auto &a) { a.validate(); }, algorithm);
  if (average_over_alpha && !std::holds_alternative<GroverSpec>(algorithm))
    throw ArgumentError("averaging over the marked item applies to Grover only");
  if (!outputs.pa && !outputs.au && !outputs.success)
    throw ArgumentError("no output selected");
  std::visit(
      [&](const auto &f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SystematicErrors>) {
          require_grid(f.thetas, "theta");
        } else if constexpr (std::is_same_v<T, RandomErrors>) {
          require_grid(f.epsilons, "epsilon");
          if (f.epsilons.front() < 0.0)
            throw ArgumentError("epsilon grid must be non-negative");
          if (f.realizations < 1)
            throw ArgumentError("need at least one realization");
        } else {
          require_grid(f.ps, "p");
          if (f.ps.front() < 0.0 || f.ps.back() > 1.0)
            throw ArgumentError("p grid must lie in [0, 1]");
          if (f.nfs.empty())
            throw ArgumentError("n_f list is empty");
          const auto layer = initial_layer_qubits(algorithm).size();
          for (unsigned nf : f.nfs) {
            if (nf > kMaxFlippedQubits)
              throw SizeError("n_f = " + std::to_string(nf) +
                              " gives too many Kraus operators");
            if (nf > layer)
              throw ArgumentError("n_f = " + std::to_string(nf) + " exceeds the " +
                                  std::to_string(layer) +
                                  " qubits of the initial layer");
          }
        }
      },
      errors);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomAngleSampler::RandomAngleSampler(std::uint64_t master_seed,
                                       std::uint64_t experiment_id)
    : key_(splitmix64(splitmix64(master_seed) ^ experiment_id)) {}

std::uint64_t RandomAngleSampler::stream(std::uint64_t grid_index,
                                         std::uint64_t realization) const {
  return splitmix64(splitmix64(key_ ^ grid_index) ^ realization);
}

double RandomAngleSampler::uniform(std::uint64_t grid_index,
                                   std::uint64_t realization,
                                   std::uint64_t draw) const {
  const std::uint64_t bits = splitmix64(stream(grid_index, realization) ^
                                        splitmix64(draw));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double RandomAngleSampler::around(double center, double width,
                                  std::uint64_t grid_index,
                                  std::uint64_t realization,
                                  std::uint64_t draw) const {
  return center + width * (uniform(grid_index, realization, draw) - 0.5);
}

std::vector<double> linspace(double start, double stop, std::size_t points) {
  if (points == 0)
    throw ArgumentError("linspace: need at least one point");
  if (points == 1)
    return {start};
  std::vector<double> out(points);
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    out[i] = start + step * static_cast<double>(i);
  out.back() = stop;
  return out;
}

std::vector<double> default_theta_grid() {
  return linspace(0.0, std::numbers::pi / 2, 65);
}
std::vector<double> default_epsilon_grid() {
  return linspace(0.0, std::numbers::pi, 33);
}
std::vector<double> default_p_grid() { return linspace(0.0, 1.0, 21); }

ShorSpec default_shor_spec(unsigned L) {
  switch (L) {
  case 2:
    return ShorSpec::make(3, 2);
  case 3:
    return ShorSpec::make(7, 3);
  case 4:
    return ShorSpec::make(15, 7);
  default:
    throw ArgumentError("no default modulus for L = " + std::to_string(L) +
                        "; pass R and a");
  }
}

std::size_t default_realizations(const AlgorithmVariant &algorithm) {
  if (const auto *g = std::get_if<GroverSpec>(&algorithm))
    return g->n <= 4 ? 1000 : 100;
  const unsigned L = std::get<ShorSpec>(algorithm).L;
  return L <= 2 ? 5000 : L == 3 ? 1000 : 100;
}

unsigned algorithm_qubits(const AlgorithmVariant &algorithm) {
  if (const auto *g = std::get_if<GroverSpec>(&algorithm))
    return g->n;
  return std::get<ShorSpec>(algorithm).num_qubits();
}

std::vector<int> initial_layer_qubits(const AlgorithmVariant &algorithm) {
  const unsigned count = std::holds_alternative<GroverSpec>(algorithm)
                             ? std::get<GroverSpec>(algorithm).n
                             : std::get<ShorSpec>(algorithm).first_register();
  std::vector<int> q(count);
  std::iota(q.begin(), q.end(), 0);
  return q;
}

std::vector<std::vector<int>> affected_subsets(const std::vector<int> &qubits,
                                               unsigned nf, SubsetPolicy policy) {
  if (nf > qubits.size())
    throw ArgumentError("affected_subsets: n_f larger than the register");
  if (policy == SubsetPolicy::Prefix)
    return {std::vector<int>(qubits.begin(), qubits.begin() + nf)};
  std::vector<std::vector<int>> out;
  std::vector<std::size_t> idx(nf);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const std::size_t m = qubits.size();
  while (true) {
    std::vector<int> subset;
    for (std::size_t i : idx)
      subset.push_back(qubits[i]);
    out.push_back(std::move(subset));
    std::size_t pos = nf;
    while (pos > 0 && idx[pos - 1] == m - nf + pos - 1)
      --pos;
    if (pos == 0)
      break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < nf; ++i)
      idx[i] = idx[i - 1] + 1;
  }
  return out;
}

std::vector<ResultRow> run_systematic_sweep(const ExperimentSpec &spec) {
  const auto *fam = std::get_if<SystematicErrors>(&spec.errors);
  if (!fam)
    throw ArgumentError("run_systematic_sweep: not a systematic experiment");
  const Context ctx = make_context(spec);
  const std::size_t na = ctx.alphas.size();
  std::vector<Sample> samples(fam->thetas.size() * na);

  for_each_task(samples.size(), spec.parallel, [&](std::size_t t) {
    const double theta = fam->thetas[t / na];
    const std::uint64_t alpha = ctx.alphas[t % na];
    if (ctx.is_grover()) {
      const GroverSpec g = with_alpha(ctx.grover(), alpha);
      const std::vector<double> thetas(g.hadamard_count(), theta);
      samples[t] = evaluate_circuit(ctx, build_grover(g, thetas), alpha);
    } else {
      samples[t] = evaluate_circuit(
          ctx, build_shor(ctx.shor(), ShorAngles::uniform(ctx.shor(), theta)), 0);
    }
  });

  std::vector<ResultRow> rows;
  for (std::size_t g = 0; g < fam->thetas.size(); ++g) {
    ResultRow row;
    row.sweep_value = fam->thetas[g];
    row.n = algorithm_qubits(spec.algorithm);
    row.n_samples = na;
    row.seed = spec.master_seed;
    fill_measures(row, average(std::span(samples).subspan(g * na, na)), spec.outputs);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ResultRow> run_random_sweep(const ExperimentSpec &spec) {
  const auto *fam = std::get_if<RandomErrors>(&spec.errors);
  if (!fam)
    throw ArgumentError("run_random_sweep: not a random-error experiment");
  const Context ctx = make_context(spec);
  const RandomAngleSampler sampler(
      spec.master_seed,
      static_cast<std::uint64_t>(ctx.is_grover() ? ExperimentId::GroverRandom
                                                 : ExperimentId::ShorRandom));
  const std::size_t nr = fam->realizations;
  std::vector<Sample> samples(fam->epsilons.size() * nr);

  for_each_task(samples.size(), spec.parallel, [&](std::size_t t) {
    const std::size_t g = t / nr;
    const std::size_t r = t % nr;
    const double eps = fam->epsilons[g];
    if (ctx.is_grover()) {
      const std::vector<double> thetas =
          grover_angles_random(ctx.grover(), sampler, eps, g, r);
      std::vector<Sample> per_alpha;
      per_alpha.reserve(ctx.alphas.size());
      for (std::uint64_t alpha : ctx.alphas)
        per_alpha.push_back(evaluate_circuit(
            ctx, build_grover(with_alpha(ctx.grover(), alpha), thetas), alpha));
      samples[t] = average(per_alpha);
    } else {
      samples[t] = evaluate_circuit(
          ctx,
          build_shor(ctx.shor(), shor_angles_random(ctx.shor(), sampler, eps, g, r)),
          0);
    }
  });

  std::vector<ResultRow> rows;
  for (std::size_t g = 0; g < fam->epsilons.size(); ++g) {
    const std::span<const Sample> block = std::span(samples).subspan(g * nr, nr);
    ResultRow row;
    row.sweep_value = fam->epsilons[g];
    row.n = algorithm_qubits(spec.algorithm);
    row.n_samples = nr;
    row.seed = spec.master_seed;
    fill_measures(row, average(block), spec.outputs);
    if (spec.outputs.success) {
      std::vector<double> s;
      for (const Sample &x : block)
        s.push_back(x.success);
      row.success_stderr = standard_error(s);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<ResultRow> run_decoherence_sweep(const ExperimentSpec &spec) {
  const auto *fam = std::get_if<DecoherenceErrors>(&spec.errors);
  if (!fam)
    throw ArgumentError("run_decoherence_sweep: not a decoherence experiment");
  const Context ctx = make_context(spec);
  const std::vector<int> layer = initial_layer_qubits(spec.algorithm);
  const unsigned n = algorithm_qubits(spec.algorithm);
  const std::size_t np = fam->ps.size();

  // (n_f index, subset) work items; the same list for every alpha.
  struct Item {
    std::size_t nf_index;
    std::vector<int> affected;
  };
  std::vector<Item> items;
  std::vector<std::size_t> subsets_per_nf(fam->nfs.size(), 0);
  for (std::size_t f = 0; f < fam->nfs.size(); ++f)
    for (auto &subset : affected_subsets(layer, fam->nfs[f], fam->policy)) {
      items.push_back({f, std::move(subset)});
      ++subsets_per_nf[f];
    }

  // results[(a * items + item) * np + x]
  std::vector<Sample> results(ctx.alphas.size() * items.size() * np);
  for (std::size_t a = 0; a < ctx.alphas.size(); ++a) {
    const std::uint64_t alpha = ctx.alphas[a];
    const SplitCircuit sc =
        ctx.is_grover()
            ? build_grover(with_alpha(ctx.grover(), alpha),
                           std::vector<double>(ctx.grover().hadamard_count(),
                                               kQuarterPi))
            : build_shor(ctx.shor(), ShorAngles::exact(ctx.shor()));
    const AlgorithmUnitaries u = algorithm_unitaries(sc, layer);

    for_each_task(items.size(), spec.parallel, [&](std::size_t it) {
      const ErrorModel model{fam->kind, fam->ps.front(), items[it].affected};
      const AlgorithmChannels ch = decoherence_channels(u, model);
      Sample *out = results.data() + (a * items.size() + it) * np;
      if (ctx.outputs.pa) {
        const auto reps = interference_kraus_over_p(ch.potentially_available, fam->ps);
        for (std::size_t x = 0; x < np; ++x)
          out[x].pa = reps[x].value;
      }
      if (ctx.outputs.au) {
        const auto reps = interference_kraus_over_p(ch.actually_used, fam->ps);
        for (std::size_t x = 0; x < np; ++x)
          out[x].au = reps[x].value;
      }
      if (ctx.outputs.success) {
        const auto per_pattern =
            pattern_probabilities(u, fam->kind, items[it].affected);
        const std::size_t dim = u.rest.rows();
        for (std::size_t x = 0; x < np; ++x) {
          const double p = fam->ps[x];
          std::vector<double> probs(dim, 0.0);
          for (std::size_t l = 0; l < per_pattern.size(); ++l) {
            const int flips = std::popcount(l);
            const int keeps = static_cast<int>(items[it].affected.size()) - flips;
            const double w = std::pow(p, flips) * std::pow(1.0 - p, keeps);
            if (w == 0.0)
              continue;
            for (std::size_t i = 0; i < dim; ++i)
              probs[i] += w * per_pattern[l][i];
          }
          out[x].success = success_of(ctx, alpha, probs);
        }
      }
    });
  }

  std::vector<ResultRow> rows;
  std::size_t first_item = 0;
  for (std::size_t f = 0; f < fam->nfs.size(); ++f) {
    const std::size_t count = subsets_per_nf[f];
    for (std::size_t x = 0; x < np; ++x) {
      std::vector<Sample> block;
      for (std::size_t a = 0; a < ctx.alphas.size(); ++a)
        for (std::size_t it = first_item; it < first_item + count; ++it)
          block.push_back(results[(a * items.size() + it) * np + x]);
      ResultRow row;
      row.sweep_value = fam->ps[x];
      row.n = n;
      row.n_f = fam->nfs[f];
      row.n_samples = block.size();
      row.seed = spec.master_seed;
      fill_measures(row, average(block), spec.outputs);
      rows.push_back(row);
    }
    first_item += count;
  }
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec &spec) {
  if (std::holds_alternative<SystematicErrors>(spec.errors))
    return run_systematic_sweep(spec);
  if (std::holds_alternative<RandomErrors>(spec.errors))
    return run_random_sweep(spec);
  return run_decoherence_sweep(spec);
}

ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2);
  Eigen::MatrixXcd z(dim, dim);
  for (Eigen::Index r = 0; r < z.rows(); ++r)
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
      const double re = normal(engine);
      const double im = normal(engine);
      z(r, c) = {re, im};
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd &rr = qr.matrixQR();
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    const Complex d = rr(c, c);
    const double mag = std::abs(d);
    q.col(c) *= mag > 0.0 ? d / mag : Complex{1.0};
  }
  ComplexMatrix out(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      out(r, c) = q(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return out;
}

CueStatistics cue_baseline(unsigned n, std::size_t samples, std::uint64_t seed) {
  if (n > 8)
    throw SizeError("cue_baseline: at most 8 qubits");
  if (n < 1)
    throw ArgumentError("cue_baseline: need at least one qubit");
  if (samples < 10)
    throw ArgumentError("cue_baseline: need at least 10 samples");
  const RandomAngleSampler sampler(seed, static_cast<std::uint64_t>(ExperimentId::Cue));
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> values(samples);
  for_each_task(samples, 1, [&](std::size_t s) {
    values[s] = interference_unitary(haar_unitary(dim, sampler.stream(0, s))).value;
  });
  CueStatistics stats{n, samples, mean_of(values), 0.0, seed};
  double ss = 0.0;
  for (double v : values)
    ss += (v - stats.mean) * (v - stats.mean);
  stats.stddev = std::sqrt(ss / static_cast<double>(samples - 1));
  return stats;
}

std::string format_results(const std::vector<ResultRow> &rows, OutputFormat format) {
  std::ostringstream out;
  write_results(rows, out, format);
  return out.str();
}

void write_results(const std::vector<ResultRow> &rows, std::ostream &out,
                   OutputFormat format) {
  if (format == OutputFormat::Csv) {
    out << kCsvHeader << '\n';
    for (const ResultRow &r : rows) {
      out << format_real(r.sweep_value) << ',' << r.n << ','
          << (r.n_f ? std::to_string(*r.n_f) : std::string()) << ','
          << format_real(r.interference_pa) << ',' << format_real(r.interference_au)
          << ',' << format_real(r.ibits_pa) << ',' << format_real(r.ibits_au) << ','
          << format_real(r.success) << ',' << format_real(r.success_stderr) << ','
          << r.n_samples << ',' << r.seed << '\n';
    }
    return;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ResultRow &r : rows) {
    nlohmann::ordered_json j;
    j["sweep_value"] = real_json(r.sweep_value);
    j["n"] = r.n;
    j["n_f"] = r.n_f ? nlohmann::ordered_json(*r.n_f) : nlohmann::ordered_json(nullptr);
    j["interference_pa"] = real_json(r.interference_pa);
    j["interference_au"] = real_json(r.interference_au);
    j["ibits_pa"] = real_json(r.ibits_pa);
    j["ibits_au"] = real_json(r.ibits_au);
    j["success"] = real_json(r.success);
    j["success_stderr"] = real_json(r.success_stderr);
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

void write_results(const std::vector<ResultRow> &rows,
                   const std::filesystem::path &path, OutputFormat format) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
    throw IoError(path.string(), "cannot open for writing");
  write_results(rows, file, format);
  file.flush();
  if (!file)
    throw IoError(path.string(), "write failed");
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw ArgumentError("parse_results_csv: missing or wrong header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ','))
      f.push_back(field);
    if (!line.empty() && line.back() == ',')
      f.emplace_back();
    if (f.size() != 11)
      throw ArgumentError("parse_results_csv: expected 11 fields");
    ResultRow r;
    r.sweep_value = parse_real(f[0]);
    r.n = static_cast<unsigned>(parse_unsigned(f[1]));
    if (!f[2].empty())
      r.n_f = static_cast<unsigned>(parse_unsigned(f[2]));
    r.interference_pa = parse_real(f[3]);
    r.interference_au = parse_real(f[4]);
    r.ibits_pa = parse_real(f[5]);
    r.ibits_au = parse_real(f[6]);
    r.success = parse_real(f[7]);
    r.success_stderr = parse_real(f[8]);
    r.n_samples = parse_unsigned(f[9]);
    r.seed = parse_unsigned(f[10]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<ResultRow> parse_results_json(std::string_view text) {
  const nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array())
    throw ArgumentError("parse_results_json: expected an array");
  std::vector<ResultRow> rows;
  for (const auto &j : arr) {
    ResultRow r;
    r.sweep_value = json_real(j.at("sweep_value"));
    r.n = j.at("n").get<unsigned>();
    if (!j.at("n_f").is_null())
      r.n_f = j.at("n_f").get<unsigned>();
    r.interference_pa = json_real(j.at("interference_pa"));
    r.interference_au = json_real(j.at("interference_au"));
    r.ibits_pa = restore_ibits(json_real(j.at("ibits_pa")), r.interference_pa);
    r.ibits_au = restore_ibits(json_real(j.at("ibits_au")), r.interference_au);
    r.success = json_real(j.at("success"));
    r.success_stderr = json_real(j.at("success_stderr"));
    r.n_samples = j.at("n_samples").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    rows.push_back(r);
  }
  return rows;
}

std::string format_cue(const CueStatistics &stats, OutputFormat format) {
  if (format == OutputFormat::Csv)
    return "n,samples,mean,stddev,seed\n" + std::to_string(stats.n) + "," +
           std::to_string(stats.samples) + "," + format_real(stats.mean) + "," +
           format_real(stats.stddev) + "," + std::to_string(stats.seed) + "\n";
  nlohmann::ordered_json j;
  j["n"] = stats.n;
  j["samples"] = stats.samples;
  j["mean"] = stats.mean;
  j["stddev"] = stats.stddev;
  j["seed"] = stats.seed;
  return j.dump(2) + "\n";
}

} // namespace qinterf
