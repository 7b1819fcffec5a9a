#include "qinterf/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qinterf/algorithms.hpp"
#include "qinterf/harness.hpp"
#include "qinterf/interference.hpp"

namespace qinterf {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;

// Pinned tolerances.
constexpr double kWalshTol = 1e-9;
constexpr double kOracleTol = 1e-9;
constexpr double kSingleKrausTol = 1e-12;
constexpr double kGroverSuccessTol = 1e-9;
constexpr double kAuBandLow = 3.0;
constexpr double kAuBandHigh = 4.5;
constexpr double kFirstIterationRel = 0.05;
constexpr double kArgmaxTol = 1e-9;
constexpr double kVanishTol = 1e-9;
constexpr double kBitflipSuccessTol = 1e-9;
constexpr double kVanishedKrausTol = 1e-6;
constexpr double kFiniteAu = 0.1;
constexpr double kPhaseflipTarget = 0.0025;
constexpr double kPhaseflipTol = 0.001;
constexpr double kClassicalSuccess = 1.0 / 16;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kRegisterTol = 1e-9;
constexpr double kShorGrowth = 4.0;
constexpr double kShorSuccessTol = 1e-9;
constexpr double kResidualPa = 1e-4;
constexpr double kCueLow = 60.0;
constexpr double kCueHigh = 63.0;
constexpr double kParallelTol = 1e-12;

// Collects failed checks; the first few end up in the report line.
class Checks {
public:
  void require(bool ok, const std::string &what) {
    ++count_;
    if (!ok)
      failures_.push_back(what);
  }
  void note(const std::string &s) { notes_.push_back(s); }
  bool passed() const { return failures_.empty(); }
  std::string detail() const {
    std::ostringstream out;
    if (failures_.empty()) {
      out << count_ << " checks";
    } else {
      out << failures_.size() << "/" << count_ << " checks failed: ";
      for (std::size_t i = 0; i < std::min<std::size_t>(6, failures_.size()); ++i)
        out << (i ? "; " : "") << failures_[i];
      if (failures_.size() > 6)
        out << "; ...";
    }
    for (const std::string &n : notes_)
      out << " [" << n << "]";
    return out.str();
  }

private:
  std::size_t count_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(const char *f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char *f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char *f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<double> exact_grover_thetas(const GroverSpec &g) {
  return std::vector<double>(g.hadamard_count(), kQuarterPi);
}

// Random channel: the N columns of an (L N)-dimensional Haar unitary split
// into L blocks of N rows.
KrausChannel random_channel(std::size_t dim, std::size_t ops, std::uint64_t seed) {
  const ComplexMatrix u = haar_unitary(dim * ops, seed);
  std::vector<ComplexMatrix> kraus;
  for (std::size_t l = 0; l < ops; ++l) {
    ComplexMatrix e(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t k = 0; k < dim; ++k)
        e(i, k) = u(l * dim + i, k);
    kraus.push_back(std::move(e));
  }
  return KrausChannel(std::move(kraus));
}

ExperimentSpec decoherence_spec(AlgorithmVariant algo, ErrorKind kind,
                                std::vector<unsigned> nfs, SubsetPolicy policy,
                                const AcceptanceOptions &opt) {
  ExperimentSpec spec;
  spec.algorithm = std::move(algo);
  spec.errors = DecoherenceErrors{kind, default_p_grid(), std::move(nfs), policy};
  spec.master_seed = opt.seed;
  spec.parallel = opt.parallel;
  return spec;
}

GroverSpec grover(unsigned n, std::uint64_t alpha) {
  GroverSpec g;
  g.n = n;
  g.alpha = alpha;
  return g;
}

const ResultRow &row_at(const std::vector<ResultRow> &rows, unsigned nf, double p) {
  for (const ResultRow &r : rows)
    if (r.n_f && *r.n_f == nf && std::abs(r.sweep_value - p) < 1e-12)
      return r;
  throw std::logic_error("acceptance: missing row");
}

void walsh_hadamard(Checks &c, const AcceptanceOptions &) {
  for (unsigned n = 1; n <= 10; ++n) {
    const std::vector<double> thetas(n, kQuarterPi);
    const double value = interference_unitary(circuit_unitary(walsh_layer(thetas))).value;
    const double expected = std::ldexp(1.0, static_cast<int>(n)) - 1.0;
    c.require(std::abs(value - expected) <= kWalshTol,
              fmt("n=%g: I=%.12g", n, value));
  }
}

void cross_oracle(Checks &c, const AcceptanceOptions &opt) {
  const RandomAngleSampler seeds(opt.seed, 0xC2055);
  double worst_eq = 0.0, worst_naive = 0.0, worst_single = 0.0;
  for (std::size_t t = 0; t < 50; ++t) {
    const std::size_t dim = std::size_t{2} << (t % 4);
    const std::size_t ops = 1 + (t / 4) % 8;
    const KrausChannel ch = random_channel(dim, ops, seeds.stream(t, 0));
    const double gram = interference_kraus(ch).value;
    const double naive = interference_kraus_naive(ch);
    const double super = interference_superoperator(superoperator_from_kraus(ch)).value;
    worst_eq = std::max(worst_eq, std::abs(super - gram));
    worst_naive = std::max(worst_naive, std::abs(gram - naive));
    if (ops == 1) {
      const double unitary = interference_unitary(ch[0]).value;
      worst_single = std::max(worst_single, std::abs(gram - unitary));
    }
  }
  c.require(worst_eq <= kOracleTol, fmt("superoperator vs Kraus %.3g", worst_eq));
  c.require(worst_naive <= kOracleTol, fmt("Gram vs naive %.3g", worst_naive));
  c.require(worst_single <= kSingleKrausTol, fmt("single Kraus vs unitary %.3g", worst_single));
  c.note(fmt("max diffs %.2g %.2g %.2g", worst_eq, worst_naive, worst_single));
}

void exact_grover(Checks &c, const AcceptanceOptions &) {
  double worst = 0.0;
  for (unsigned n = 4; n <= 8; ++n) {
    const double closed = grover_exact_success(n);
    for (std::uint64_t alpha = 0; alpha < (std::uint64_t{1} << n); ++alpha) {
      const GroverSpec g = grover(n, alpha);
      const SplitCircuit sc = build_grover(g, exact_grover_thetas(g));
      const StateVector out = circuit_apply(sc.full, StateVector::basis(g.dim(), 0));
      worst = std::max(worst, std::abs(out.probabilities()[alpha] - closed));
    }
  }
  c.require(worst <= kGroverSuccessTol, fmt("success deviation %.3g", worst));

  const GroverSpec g4 = grover(4, 2);
  const double au = interference_unitary(
                        circuit_unitary(build_grover(g4, exact_grover_thetas(g4)).rest))
                        .value;
  c.require(au >= kAuBandLow && au <= kAuBandHigh,
            fmt("n=4 actually-used I=%.6g outside [%g, %g]", au, kAuBandLow, kAuBandHigh));
  c.note(fmt("n=4 final I_au=%.6g", au));

  GroverSpec g1 = g4;
  g1.k_override = 1;
  const double first = interference_unitary(
                           circuit_unitary(build_grover(g1, exact_grover_thetas(g1)).rest))
                           .value;
  const double target = 8.0 - 24.0 / 16.0;
  c.require(std::abs(first - target) <= kFirstIterationRel * target,
            fmt("first iteration I=%.6g vs %.6g", first, target));
  c.note(fmt("k=1 I_au=%.6g", first));
}

void systematic_shape(Checks &c, const AcceptanceOptions &opt) {
  std::vector<AlgorithmVariant> algos = {grover(4, 0), grover(5, 0), grover(6, 0),
                                         default_shor_spec(2), default_shor_spec(3)};
  const std::vector<double> grid = default_theta_grid();
  const std::size_t mid = grid.size() / 2;
  for (const AlgorithmVariant &algo : algos) {
    ExperimentSpec spec;
    spec.algorithm = algo;
    spec.errors = SystematicErrors{grid};
    spec.master_seed = opt.seed;
    spec.parallel = opt.parallel;
    spec.outputs.au = false;
    spec.average_over_alpha = std::holds_alternative<GroverSpec>(algo);
    const std::vector<ResultRow> rows = run_systematic_sweep(spec);
    const std::string tag = std::holds_alternative<GroverSpec>(algo)
                                ? "Grover n=" + std::to_string(rows[0].n)
                                : "Shor L=" + std::to_string(std::get<ShorSpec>(algo).L);
    double max_s = 0.0, max_i = 0.0;
    std::size_t arg_i = 0;
    for (std::size_t g = 0; g < rows.size(); ++g) {
      max_s = std::max(max_s, rows[g].success);
      if (rows[g].interference_pa > max_i) {
        max_i = rows[g].interference_pa;
        arg_i = g;
      }
    }
    c.require(max_s - rows[mid].success <= kArgmaxTol,
              tag + fmt(": S max %.12g above S(pi/4)=%.12g", max_s, rows[mid].success));
    c.require(max_i - rows[mid].interference_pa <= kArgmaxTol,
              tag + fmt(": I_pa max %.10g at theta=%.6g above I_pa(pi/4)=%.10g", max_i,
                        grid[arg_i], rows[mid].interference_pa));
    c.require(std::abs(rows.front().interference_pa) <= kVanishTol,
              tag + fmt(": I_pa(0)=%.3g", rows.front().interference_pa));
    c.require(std::abs(rows.back().interference_pa) <= kVanishTol,
              tag + fmt(": I_pa(pi/2)=%.3g", rows.back().interference_pa));
  }
}

void grover_bitflip(Checks &c, const AcceptanceOptions &opt) {
  const auto rows = run_decoherence_sweep(decoherence_spec(
      grover(4, 2), ErrorKind::BitFlip, {1, 2, 3, 4}, SubsetPolicy::Prefix, opt));
  const double s0 = row_at(rows, 1, 0.0).success;
  double worst = 0.0;
  for (const ResultRow &r : rows)
    worst = std::max(worst, std::abs(r.success - s0));
  c.require(worst <= kBitflipSuccessTol, fmt("success drift %.3g", worst));
  const ResultRow &half = row_at(rows, 4, 0.5);
  c.require(half.interference_pa <= kVanishedKrausTol,
            fmt("I_pa(0.5, 4)=%.3g", half.interference_pa));
  c.require(half.interference_au > kFiniteAu, fmt("I_au(0.5, 4)=%.3g", half.interference_au));
}

void grover_phaseflip(Checks &c, const AcceptanceOptions &opt) {
  const auto rows = run_decoherence_sweep(decoherence_spec(
      grover(4, 2), ErrorKind::PhaseFlip, {4}, SubsetPolicy::Prefix, opt));
  const double s1 = rows.back().success;
  c.require(std::abs(s1 - kPhaseflipTarget) <= kPhaseflipTol, fmt("S(1)=%.6g", s1));
  c.require(s1 < kClassicalSuccess, fmt("S(1)=%.6g not below 1/16", s1));
  for (std::size_t i = 1; i < rows.size() && rows[i].sweep_value <= 0.5 + 1e-12; ++i)
    c.require(rows[i].success <= rows[i - 1].success + kMonotoneSlack,
              fmt("S rises at p=%.3g", rows[i].sweep_value));
  c.note(fmt("S(p=1)=%.6g", s1));
}

void exact_shor(Checks &c, const AcceptanceOptions &) {
  const ShorSpec s2 = default_shor_spec(2);
  const SplitCircuit sc = build_shor(s2, ShorAngles::exact(s2));
  const std::vector<double> probs =
      circuit_apply(sc.full, StateVector::basis(s2.dim(), 0)).probabilities();
  const std::vector<double> reg = register_marginal(probs, s2.num_qubits(), s2.first_register());
  double worst = 0.0;
  for (std::size_t x = 0; x < reg.size(); ++x) {
    const double expected = (x == 0 || x == 8) ? 0.5 : 0.0;
    worst = std::max(worst, std::abs(reg[x] - expected));
  }
  c.require(worst <= kRegisterTol, fmt("register-1 deviation %.3g", worst));
  c.require(shor_success(probs, probs) == 1.0, "self-success is not exactly 1");

  const ShorSpec s3 = default_shor_spec(3);
  const double au2 = interference_unitary(circuit_unitary(sc.rest)).value;
  const double au3 = interference_unitary(
                         circuit_unitary(build_shor(s3, ShorAngles::exact(s3)).rest))
                         .value;
  c.require(au3 / au2 > kShorGrowth, fmt("I_au ratio %.6g", au3 / au2));
  c.note(fmt("I_au L=2 %.6g, L=3 %.6g", au2, au3));
}

void shor_bitflip(Checks &c, const AcceptanceOptions &opt) {
  for (unsigned L : {2u, 3u}) {
    const auto rows = run_decoherence_sweep(decoherence_spec(
        default_shor_spec(L), ErrorKind::BitFlip, {1, 2, 3, 4}, SubsetPolicy::All, opt));
    double worst = 0.0;
    for (const ResultRow &r : rows)
      worst = std::max(worst, std::abs(r.success - 1.0));
    c.require(worst <= kShorSuccessTol, fmt("L=%g: success deviation %.3g", L, worst));
    for (unsigned nf = 1; nf <= 4; ++nf) {
      double min_pa = INFINITY, min_au = INFINITY;
      for (const ResultRow &r : rows)
        if (r.n_f && *r.n_f == nf) {
          min_pa = std::min(min_pa, r.interference_pa);
          min_au = std::min(min_au, r.interference_au);
        }
      c.require(min_pa > 0.0 && min_au > 0.0,
                fmt("L=%g n_f=%g: min I_pa=%.3g", L, nf, min_pa) +
                    fmt(" min I_au=%.3g", min_au));
    }
  }
}

void shor_phaseflip(Checks &c, const AcceptanceOptions &opt) {
  const auto rows = run_decoherence_sweep(decoherence_spec(
      default_shor_spec(2), ErrorKind::PhaseFlip, {4}, SubsetPolicy::All, opt));
  const ResultRow &half = row_at(rows, 4, 0.5);
  c.require(half.interference_au <= kVanishedKrausTol,
            fmt("I_au(0.5)=%.3g", half.interference_au));
  c.require(half.interference_pa > kResidualPa, fmt("I_pa(0.5)=%.3g", half.interference_pa));
  for (std::size_t i = 1; i < rows.size() && rows[i].sweep_value <= 0.5 + 1e-12; ++i)
    c.require(rows[i].success < rows[i - 1].success,
              fmt("S not decreasing at p=%.3g", rows[i].sweep_value));
  c.note(fmt("I_pa(0.5)=%.6g", half.interference_pa));
}

void random_anticorrelation(Checks &c, const AcceptanceOptions &opt) {
  ExperimentSpec spec;
  spec.algorithm = grover(5, 0);
  spec.errors = RandomErrors{{0.0, 2.0}, 100};
  spec.average_over_alpha = true;
  spec.master_seed = opt.seed;
  spec.parallel = opt.parallel;
  const auto rows = run_random_sweep(spec);
  const double N = 32.0;
  c.require(rows[1].interference_au > 0.5 * N,
            fmt("mean I_au(eps=2)=%.6g", rows[1].interference_au));
  c.require(rows[1].success < 0.5 * rows[0].success,
            fmt("mean S(eps=2)=%.6g vs S(0)=%.6g", rows[1].success, rows[0].success));
  c.note(fmt("I_au=%.4g S=%.4g S0=%.4g", rows[1].interference_au, rows[1].success,
             rows[0].success));
}

void cue(Checks &c, const AcceptanceOptions &opt) {
  const CueStatistics stats = cue_baseline(6, 100, opt.seed);
  c.require(stats.mean >= kCueLow && stats.mean <= kCueHigh, fmt("mean %.6g", stats.mean));
  c.note(fmt("mean %.6g sd %.4g", stats.mean, stats.stddev));
}

// Small sweeps from each family, rerun at several thread counts.
std::vector<std::string> determinism_outputs(const AcceptanceOptions &opt, int threads,
                                             std::vector<std::vector<ResultRow>> &rows) {
  std::vector<ExperimentSpec> specs;
  ExperimentSpec rnd;
  rnd.algorithm = grover(4, 1);
  rnd.errors = RandomErrors{linspace(0.0, std::numbers::pi, 5), 24};
  specs.push_back(rnd);
  ExperimentSpec shor_rnd;
  shor_rnd.algorithm = default_shor_spec(2);
  shor_rnd.errors = RandomErrors{{0.0, 1.0}, 12};
  specs.push_back(shor_rnd);
  specs.push_back(decoherence_spec(default_shor_spec(2), ErrorKind::PhaseFlip, {1, 2, 3},
                                   SubsetPolicy::All, opt));
  ExperimentSpec sys;
  sys.algorithm = grover(5, 0);
  sys.errors = SystematicErrors{linspace(0.0, std::numbers::pi / 2, 9)};
  sys.average_over_alpha = true;
  specs.push_back(sys);

  std::vector<std::string> out;
  rows.clear();
  for (ExperimentSpec &s : specs) {
    s.master_seed = opt.seed;
    s.parallel = threads;
    rows.push_back(run_experiment(s));
    out.push_back(format_results(rows.back(), OutputFormat::Csv));
  }
  return out;
}

double max_field_diff(const ResultRow &a, const ResultRow &b) {
  auto d = [](double x, double y) {
    if (std::isnan(x) && std::isnan(y))
      return 0.0;
    if (x == y)
      return 0.0;
    return std::abs(x - y);
  };
  return std::max({d(a.sweep_value, b.sweep_value), d(a.interference_pa, b.interference_pa),
                   d(a.interference_au, b.interference_au), d(a.ibits_pa, b.ibits_pa),
                   d(a.ibits_au, b.ibits_au), d(a.success, b.success),
                   d(a.success_stderr, b.success_stderr)});
}

void determinism(Checks &c, const AcceptanceOptions &opt) {
  std::vector<std::vector<ResultRow>> reference;
  std::vector<std::string> reference_csv;
  for (int threads : {1, 2, 8}) {
    std::vector<std::vector<ResultRow>> first, second;
    const auto a = determinism_outputs(opt, threads, first);
    const auto b = determinism_outputs(opt, threads, second);
    c.require(a == b, "CSV differs between repeated runs at " + std::to_string(threads) +
                          " threads");
    if (reference.empty()) {
      reference = first;
      reference_csv = a;
      continue;
    }
    double worst = 0.0;
    for (std::size_t s = 0; s < first.size(); ++s)
      for (std::size_t r = 0; r < first[s].size(); ++r)
        worst = std::max(worst, max_field_diff(first[s][r], reference[s][r]));
    c.require(worst <= kParallelTol,
              fmt("values differ by %.3g at %g threads", worst, threads));
    c.note(std::to_string(threads) + " threads: " +
           (a == reference_csv ? "byte-identical" : fmt("max diff %.2g", worst)));
  }
}

struct Criterion {
  int id;
  const char *name;
  double limit_seconds;
  void (*run)(Checks &, const AcceptanceOptions &);
};

constexpr Criterion kCriteria[] = {
    {1, "walsh-hadamard-interference", 5, walsh_hadamard},
    {2, "cross-oracle-equivalence", 30, cross_oracle},
    {3, "exact-grover", 120, exact_grover},
    {4, "systematic-sweep-shape", 600, systematic_shape},
    {5, "grover-bitflip-immunity", 300, grover_bitflip},
    {6, "grover-phaseflip-destruction", 300, grover_phaseflip},
    {7, "exact-shor", 60, exact_shor},
    {8, "shor-bitflip-first-register", 1800, shor_bitflip},
    {9, "shor-phaseflip", 600, shor_phaseflip},
    {10, "random-error-anticorrelation", 900, random_anticorrelation},
    {11, "cue-baseline", 60, cue},
    {12, "determinism", 600, determinism},
};

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &options,
                                            std::ostream &out) {
  std::vector<CriterionResult> results;
  for (const Criterion &crit : kCriteria) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), crit.id) == options.only.end())
      continue;
    CriterionResult r;
    r.id = crit.id;
    r.name = crit.name;
    r.limit_seconds = crit.limit_seconds;
    Checks checks;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      crit.run(checks, options);
    } catch (const std::exception &e) {
      checks.require(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.limit_seconds)
      checks.require(false, fmt("runtime %.1f s over %.0f s", r.seconds, r.limit_seconds));
    r.passed = checks.passed();
    r.detail = checks.detail();
    char head[128];
    std::snprintf(head, sizeof head, "%s %2d %-30s %8.2fs/%-5.0fs ",
                  r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                  r.limit_seconds);
    out << head << r.detail << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

} // namespace qinterf
