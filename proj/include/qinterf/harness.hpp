#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qinterf/algorithms.hpp"
#include "qinterf/channels.hpp"

namespace qinterf {

using AlgorithmVariant = std::variant<GroverSpec, ShorSpec>;

// Every Hadamard angle set to each theta of the grid.
struct SystematicErrors {
  std::vector<double> thetas;
};

// Angles uniform in [pi/4 - eps/2, pi/4 + eps/2], QFT phase offsets uniform
// in [-eps/2, eps/2].
struct RandomErrors {
  std::vector<double> epsilons;
  std::size_t realizations = 1;
};

enum class SubsetPolicy { All, Prefix };

// Pauli errors after the initial layer, for every (p, n_f) pair.
struct DecoherenceErrors {
  ErrorKind kind = ErrorKind::BitFlip;
  std::vector<double> ps;
  std::vector<unsigned> nfs;
  SubsetPolicy policy = SubsetPolicy::Prefix;
};

using ErrorFamily = std::variant<SystematicErrors, RandomErrors, DecoherenceErrors>;

struct OutputSelection {
  bool pa = true;
  bool au = true;
  bool success = true;
};

struct ExperimentSpec {
  AlgorithmVariant algorithm = GroverSpec{};
  ErrorFamily errors = SystematicErrors{};
  bool average_over_alpha = false; // Grover only
  std::uint64_t master_seed = 0;
  OutputSelection outputs;
  int parallel = 1; // worker threads for the task loop

  void validate() const;
};

inline constexpr double kNotComputed = std::numeric_limits<double>::quiet_NaN();

// Fields that were not requested hold NaN. ibits of a zero interference is
// -infinity.
struct ResultRow {
  double sweep_value = 0.0;
  unsigned n = 0;
  std::optional<unsigned> n_f;
  double interference_pa = kNotComputed;
  double interference_au = kNotComputed;
  double ibits_pa = kNotComputed;
  double ibits_au = kNotComputed;
  double success = kNotComputed;
  double success_stderr = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based uniform draws: the value for (grid index, realization, draw)
// depends only on those indices, the master seed and the experiment id.
class RandomAngleSampler {
public:
  RandomAngleSampler(std::uint64_t master_seed, std::uint64_t experiment_id);

  std::uint64_t stream(std::uint64_t grid_index, std::uint64_t realization) const;
  // Uniform on [0, 1).
  double uniform(std::uint64_t grid_index, std::uint64_t realization,
                 std::uint64_t draw) const;
  // Uniform on [center - width/2, center + width/2].
  double around(double center, double width, std::uint64_t grid_index,
                std::uint64_t realization, std::uint64_t draw) const;

private:
  std::uint64_t key_;
};

enum class ExperimentId : std::uint64_t {
  GroverRandom = 1,
  ShorRandom = 2,
  Cue = 3,
};

std::vector<double> linspace(double start, double stop, std::size_t points);
std::vector<double> default_theta_grid();   // [0, pi/2], 65 points
std::vector<double> default_epsilon_grid(); // [0, pi], 33 points
std::vector<double> default_p_grid();       // [0, 1], 21 points
// R = 3, 7, 15 with a = 2, 3, 7 for L = 2, 3, 4.
ShorSpec default_shor_spec(unsigned L);
std::size_t default_realizations(const AlgorithmVariant &algorithm);

unsigned algorithm_qubits(const AlgorithmVariant &algorithm);
// Qubits touched by the initial Hadamard layer.
std::vector<int> initial_layer_qubits(const AlgorithmVariant &algorithm);

// n_f-element subsets of `qubits`, lexicographic; Prefix gives just the first.
std::vector<std::vector<int>> affected_subsets(const std::vector<int> &qubits,
                                               unsigned nf, SubsetPolicy policy);

std::vector<ResultRow> run_systematic_sweep(const ExperimentSpec &spec);
std::vector<ResultRow> run_random_sweep(const ExperimentSpec &spec);
std::vector<ResultRow> run_decoherence_sweep(const ExperimentSpec &spec);
std::vector<ResultRow> run_experiment(const ExperimentSpec &spec);

struct CueStatistics {
  unsigned n = 0;
  std::size_t samples = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::uint64_t seed = 0;
};

// Haar unitary by QR of a complex Gaussian matrix with the phases of R's
// diagonal divided out.
ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed);
CueStatistics cue_baseline(unsigned n, std::size_t samples, std::uint64_t seed);

enum class OutputFormat { Csv, Json };

inline constexpr std::string_view kCsvHeader =
    "sweep_value,n,n_f,interference_pa,interference_au,ibits_pa,ibits_au,"
    "success,success_stderr,n_samples,seed";

std::string format_results(const std::vector<ResultRow> &rows, OutputFormat format);
void write_results(const std::vector<ResultRow> &rows, std::ostream &out,
                   OutputFormat format);
// Throws IoError naming the path when the file cannot be written.
void write_results(const std::vector<ResultRow> &rows,
                   const std::filesystem::path &path, OutputFormat format);

std::vector<ResultRow> parse_results_csv(std::string_view text);
std::vector<ResultRow> parse_results_json(std::string_view text);

std::string format_cue(const CueStatistics &stats, OutputFormat format);

} // namespace qinterf
