// qinterf: interference sweeps for Grover and Shor under gate errors.
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qinterf/acceptance.hpp"
#include "qinterf/errors.hpp"
#include "qinterf/harness.hpp"

namespace {

using namespace qinterf;

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kArgument = 2,
  kSize = 3,
  kIo = 4,
};

constexpr std::uint64_t kDefaultSeed = 1;

struct Flags {
  std::optional<unsigned> n;
  std::optional<unsigned> L;
  std::optional<std::uint64_t> R;
  std::optional<std::uint64_t> a;
  std::optional<std::string> alpha;
  std::optional<std::string> grid;
  std::optional<std::size_t> realizations;
  std::string error_kind = "bitflip";
  std::string nf = "all";
  std::optional<std::string> subset_policy;
  std::optional<std::uint64_t> seed;
  std::string out = "-";
  std::string format = "csv";
  std::string measure = "both";
  int parallel = 1;
};

// Accepts a number, "pi", "pi/k" or "k*pi".
double parse_angle(const std::string &s) {
  if (s == "pi")
    return std::numbers::pi;
  if (s.rfind("pi/", 0) == 0)
    return std::numbers::pi / std::stod(s.substr(3));
  if (s.size() > 3 && s.compare(s.size() - 3, 3, "*pi") == 0)
    return std::stod(s.substr(0, s.size() - 3)) * std::numbers::pi;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size())
    throw std::invalid_argument(s);
  return v;
}

std::vector<double> parse_grid(const std::string &text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ArgumentError("--grid expects start:stop:points, got '" + text + "'");
  try {
    const double start = parse_angle(text.substr(0, c1));
    const double stop = parse_angle(text.substr(c1 + 1, c2 - c1 - 1));
    const long points = std::stol(text.substr(c2 + 1));
    if (points < 1)
      throw ArgumentError("--grid needs at least one point");
    return linspace(start, stop, static_cast<std::size_t>(points));
  } catch (const std::logic_error &) {
    throw ArgumentError("--grid: cannot parse '" + text + "'");
  }
}

std::vector<unsigned> parse_nf(const std::string &text, unsigned layer) {
  std::vector<unsigned> out;
  try {
    if (text == "all") {
      for (unsigned k = 1; k <= layer; ++k)
        out.push_back(k);
    } else if (const auto dash = text.find('-'); dash != std::string::npos) {
      const unsigned lo = static_cast<unsigned>(std::stoul(text.substr(0, dash)));
      const unsigned hi = static_cast<unsigned>(std::stoul(text.substr(dash + 1)));
      if (lo > hi)
        throw ArgumentError("--nf range is empty");
      for (unsigned k = lo; k <= hi; ++k)
        out.push_back(k);
    } else {
      std::size_t used = 0;
      out.push_back(static_cast<unsigned>(std::stoul(text, &used)));
      if (used != text.size())
        throw std::invalid_argument(text);
    }
  } catch (const std::logic_error &e) {
    if (dynamic_cast<const ArgumentError *>(&e))
      throw;
    throw ArgumentError("--nf expects an integer, lo-hi or all, got '" + text + "'");
  }
  return out;
}

OutputFormat parse_format(const std::string &s) {
  return s == "json" ? OutputFormat::Json : OutputFormat::Csv;
}

AlgorithmVariant grover_from(const Flags &f, bool alpha_all_default, bool &average) {
  GroverSpec g;
  g.n = f.n.value_or(4);
  const std::string alpha = f.alpha.value_or(alpha_all_default ? "all" : "0");
  if (alpha == "all") {
    average = true;
  } else {
    try {
      std::size_t used = 0;
      g.alpha = std::stoull(alpha, &used);
      if (used != alpha.size())
        throw std::invalid_argument(alpha);
    } catch (const std::logic_error &) {
      throw ArgumentError("--alpha expects an integer or all, got '" + alpha + "'");
    }
  }
  g.validate();
  return g;
}

AlgorithmVariant shor_from(const Flags &f) {
  if (f.alpha)
    throw ArgumentError("--alpha applies to Grover only");
  if (!f.R) {
    if (f.a)
      throw ArgumentError("--a needs --R");
    return default_shor_spec(f.L.value_or(2));
  }
  ShorSpec s = ShorSpec::make(*f.R, f.a.value_or(2));
  if (f.L && *f.L != s.L)
    throw ArgumentError("--L " + std::to_string(*f.L) + " does not match R = " +
                        std::to_string(*f.R) + " (L = " + std::to_string(s.L) + ")");
  return s;
}

int run_sweep(const std::string &command, const Flags &f) {
  const bool grover = command.rfind("grover", 0) == 0;
  const std::string family = command.substr(command.find('-') + 1);
  if (grover && (f.L || f.R || f.a))
    throw ArgumentError("--L/--R/--a apply to Shor only");
  if (!grover && f.n)
    throw ArgumentError("--n applies to Grover only");

  ExperimentSpec spec;
  bool average = false;
  spec.algorithm = grover ? grover_from(f, family != "decoherence", average) : shor_from(f);
  spec.average_over_alpha = average;
  spec.master_seed = f.seed.value_or(kDefaultSeed);
  spec.parallel = f.parallel;
  spec.outputs.pa = f.measure != "au";
  spec.outputs.au = f.measure != "pa";

  if (family == "systematic") {
    spec.errors = SystematicErrors{f.grid ? parse_grid(*f.grid) : default_theta_grid()};
  } else if (family == "random") {
    spec.errors =
        RandomErrors{f.grid ? parse_grid(*f.grid) : default_epsilon_grid(),
                     f.realizations.value_or(default_realizations(spec.algorithm))};
  } else {
    DecoherenceErrors d;
    d.kind = f.error_kind == "phaseflip" ? ErrorKind::PhaseFlip : ErrorKind::BitFlip;
    d.ps = f.grid ? parse_grid(*f.grid) : default_p_grid();
    d.nfs = parse_nf(f.nf, static_cast<unsigned>(initial_layer_qubits(spec.algorithm).size()));
    const std::string policy = f.subset_policy.value_or(grover ? "prefix" : "all");
    d.policy = policy == "all" ? SubsetPolicy::All : SubsetPolicy::Prefix;
    spec.errors = d;
  }

  const std::vector<ResultRow> rows = run_experiment(spec);
  if (f.out == "-")
    write_results(rows, std::cout, parse_format(f.format));
  else
    write_results(rows, std::filesystem::path(f.out), parse_format(f.format));
  return kOk;
}

int run_cue(const Flags &f) {
  const CueStatistics stats =
      cue_baseline(f.n.value_or(6), f.realizations.value_or(100),
                   f.seed.value_or(kDefaultSeed));
  const std::string text = format_cue(stats, parse_format(f.format));
  if (f.out == "-") {
    std::cout << text;
    return kOk;
  }
  std::ofstream file(f.out, std::ios::binary | std::ios::trunc);
  if (!(file << text))
    throw IoError(f.out, "cannot write");
  return kOk;
}

int run_verify(const Flags &f) {
  AcceptanceOptions options;
  options.seed = f.seed.value_or(options.seed);
  options.parallel = f.parallel;
  const auto results = run_acceptance(options, std::cout);
  std::size_t passed = 0;
  for (const auto &r : results)
    passed += r.passed ? 1 : 0;
  std::cout << passed << "/" << results.size() << " acceptance criteria passed\n";
  return passed == results.size() ? kOk : kFailure;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Interference sweeps for Grover and Shor circuits under gate "
               "errors and decoherence"};
  app.set_config("--config", "", "key = value file mirroring the flag names");
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("--n", f.n, "Grover qubits (cue-baseline: qubits)");
  app.add_option("--L", f.L, "Shor: register length L (default modulus per L)");
  app.add_option("--R", f.R, "Shor: modulus");
  app.add_option("--a", f.a, "Shor: base coprime to R");
  app.add_option("--alpha", f.alpha, "Grover marked item, or 'all' to average");
  app.add_option("--grid", f.grid, "sweep grid start:stop:points (pi, pi/k accepted)");
  app.add_option("--realizations", f.realizations,
                 "random realizations (cue-baseline: samples)");
  app.add_option("--error-kind", f.error_kind)
      ->check(CLI::IsMember({"bitflip", "phaseflip"}));
  app.add_option("--nf", f.nf, "affected qubits: k, lo-hi or all");
  app.add_option("--subset-policy", f.subset_policy)
      ->check(CLI::IsMember({"all", "prefix"}));
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--out", f.out, "output path, - for stdout");
  app.add_option("--format", f.format)->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--measure", f.measure)->check(CLI::IsMember({"pa", "au", "both"}));
  app.add_option("--parallel", f.parallel, "worker threads")->check(CLI::PositiveNumber);

  for (const char *name :
       {"grover-systematic", "grover-random", "grover-decoherence", "shor-systematic",
        "shor-random", "shor-decoherence"})
    app.add_subcommand(name, std::string("sweep: ") + name);
  app.add_subcommand("cue-baseline", "interference of Haar-random unitaries");
  app.add_subcommand("verify", "run the acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError &e) {
    std::cerr << e.what() << '\n';
    return kIo;
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kArgument;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "verify")
      return run_verify(f);
    if (command == "cue-baseline")
      return run_cue(f);
    return run_sweep(command, f);
  } catch (const SizeError &e) {
    std::cerr << "size limit: " << e.what() << '\n';
    return kSize;
  } catch (const IoError &e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const ArgumentError &e) {
    std::cerr << "argument error: " << e.what() << '\n';
    return kArgument;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
