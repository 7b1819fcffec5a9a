#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "qinterf/errors.hpp"
#include "qinterf/harness.hpp"

using namespace qinterf;

namespace {

constexpr double kQuarter = std::numbers::pi / 4;

ExperimentSpec grover(unsigned n, ErrorFamily errors, bool average = false) {
  ExperimentSpec s;
  s.algorithm = GroverSpec{n, 0, std::nullopt};
  s.errors = std::move(errors);
  s.average_over_alpha = average;
  s.master_seed = 11;
  return s;
}

bool same(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

bool same_rows(const std::vector<ResultRow> &a, const std::vector<ResultRow> &b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const ResultRow &x = a[i], &y = b[i];
    if (!same(x.sweep_value, y.sweep_value) || x.n != y.n || x.n_f != y.n_f ||
        !same(x.interference_pa, y.interference_pa) ||
        !same(x.interference_au, y.interference_au) || !same(x.ibits_pa, y.ibits_pa) ||
        !same(x.ibits_au, y.ibits_au) || !same(x.success, y.success) ||
        !same(x.success_stderr, y.success_stderr) || x.n_samples != y.n_samples ||
        x.seed != y.seed)
      return false;
  }
  return true;
}

} // namespace

TEST(Sampler, CounterBasedAndInRange) {
  const RandomAngleSampler s(5, 1);
  EXPECT_EQ(s.uniform(3, 4, 5), s.uniform(3, 4, 5));
  EXPECT_NE(s.uniform(3, 4, 5), s.uniform(3, 4, 6));
  EXPECT_NE(s.uniform(3, 4, 5), RandomAngleSampler(5, 2).uniform(3, 4, 5));
  EXPECT_NE(s.uniform(3, 4, 5), RandomAngleSampler(6, 1).uniform(3, 4, 5));
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (std::uint64_t d = 0; d < 20000; ++d) {
    const double u = s.uniform(0, 0, d);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
    const double a = s.around(kQuarter, 0.5, 1, 2, d);
    ASSERT_GE(a, kQuarter - 0.25);
    ASSERT_LE(a, kQuarter + 0.25);
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 20000, 0.5, 0.01);
  EXPECT_EQ(s.around(1.0, 0.0, 0, 0, 0), 1.0);
}

TEST(Grids, LinspaceAndDefaults) {
  const auto g = linspace(0.0, 1.0, 5);
  EXPECT_EQ(g, (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(linspace(2.0, 3.0, 1), std::vector<double>{2.0});
  EXPECT_THROW(linspace(0.0, 1.0, 0), ArgumentError);
  EXPECT_EQ(default_theta_grid().size(), 65u);
  EXPECT_DOUBLE_EQ(default_theta_grid()[32], kQuarter);
  EXPECT_EQ(default_epsilon_grid().size(), 33u);
  EXPECT_EQ(default_p_grid().size(), 21u);
  EXPECT_EQ(default_shor_spec(3).R, 7u);
  EXPECT_EQ(default_shor_spec(4).a, 7u);
  EXPECT_THROW(default_shor_spec(5), ArgumentError);
}

TEST(Subsets, LexicographicAndPrefix) {
  const std::vector<int> q = {0, 1, 2, 3};
  const auto all = affected_subsets(q, 2, SubsetPolicy::All);
  ASSERT_EQ(all.size(), 6u);
  EXPECT_EQ(all.front(), (std::vector<int>{0, 1}));
  EXPECT_EQ(all[1], (std::vector<int>{0, 2}));
  EXPECT_EQ(all.back(), (std::vector<int>{2, 3}));
  EXPECT_EQ(affected_subsets(q, 2, SubsetPolicy::Prefix),
            (std::vector<std::vector<int>>{{0, 1}}));
  EXPECT_EQ(affected_subsets(q, 0, SubsetPolicy::All).size(), 1u);
  EXPECT_THROW(affected_subsets(q, 5, SubsetPolicy::All), ArgumentError);
}

TEST(Sweeps, SystematicGroverAtQuarterPi) {
  const auto rows = run_experiment(grover(4, SystematicErrors{{0.0, kQuarter}}));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[1].interference_au, 4.656615257263233, 1e-10);
  EXPECT_NEAR(rows[1].interference_pa, 13.703986108303088, 1e-10);
  EXPECT_NEAR(rows[1].ibits_pa, std::log2(rows[1].interference_pa), 1e-15);
  EXPECT_NEAR(rows[1].success, 0.9613189697265625, 1e-12);
  // theta = 0 makes every gate diagonal.
  EXPECT_NEAR(rows[0].interference_pa, 0.0, 1e-12);
  EXPECT_EQ(rows[0].ibits_pa, -std::numeric_limits<double>::infinity());
  EXPECT_FALSE(rows[0].n_f.has_value());
  EXPECT_EQ(rows[0].n, 4u);
}

TEST(Sweeps, AveragingOverAlphaAtQuarterPi) {
  const auto one = run_experiment(grover(4, SystematicErrors{{kQuarter}}));
  const auto avg = run_experiment(grover(4, SystematicErrors{{kQuarter}}, true));
  EXPECT_NEAR(avg[0].interference_pa, one[0].interference_pa, 1e-10);
  EXPECT_NEAR(avg[0].interference_au, one[0].interference_au, 1e-10);
  EXPECT_NEAR(avg[0].success, one[0].success, 1e-12);
  EXPECT_EQ(avg[0].n_samples, 16u);
}

TEST(Sweeps, ZeroEpsilonEqualsSystematic) {
  const auto sys = run_experiment(grover(4, SystematicErrors{{kQuarter}}));
  const auto rnd = run_experiment(grover(4, RandomErrors{{0.0, 0.5}, 5}));
  ASSERT_EQ(rnd.size(), 2u);
  EXPECT_NEAR(rnd[0].interference_pa, sys[0].interference_pa, 1e-10);
  EXPECT_NEAR(rnd[0].success, sys[0].success, 1e-12);
  EXPECT_NEAR(rnd[0].success_stderr, 0.0, 1e-12);
  EXPECT_GT(rnd[1].success_stderr, 0.0);
  EXPECT_EQ(rnd[1].n_samples, 5u);

  ExperimentSpec shor;
  shor.algorithm = default_shor_spec(2);
  shor.errors = RandomErrors{{0.0}, 3};
  const auto s = run_experiment(shor);
  EXPECT_NEAR(s[0].interference_au, 60.0, 1e-9);
  EXPECT_NEAR(s[0].interference_pa, 55.0, 1e-9);
  EXPECT_NEAR(s[0].success, 1.0, 1e-12);
}

TEST(Sweeps, DecoherenceRowsAndValues) {
  ExperimentSpec s = grover(4, DecoherenceErrors{ErrorKind::PhaseFlip, {0.0, 0.5}, {0, 4},
                                                 SubsetPolicy::Prefix});
  const auto rows = run_experiment(s);
  ASSERT_EQ(rows.size(), 4u);
  // n_f-major, then p.
  EXPECT_EQ(rows[0].n_f, 0u);
  EXPECT_EQ(rows[1].n_f, 0u);
  EXPECT_EQ(rows[2].n_f, 4u);
  EXPECT_EQ(rows[2].sweep_value, 0.0);
  EXPECT_EQ(rows[3].sweep_value, 0.5);
  EXPECT_NEAR(rows[1].interference_pa, 13.703986108303088, 1e-10);
  EXPECT_NEAR(rows[2].interference_pa, 13.703986108303088, 1e-10);
  EXPECT_NEAR(rows[3].interference_au, 0.0, 1e-10);
  EXPECT_NEAR(rows[3].interference_pa, 10.343, 1e-3);

  ExperimentSpec all = grover(4, DecoherenceErrors{ErrorKind::BitFlip, {0.3}, {2},
                                                   SubsetPolicy::All});
  const auto a = run_experiment(all);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].n_samples, 6u);
  EXPECT_NEAR(a[0].success, 0.9613189697265625, 1e-12);
}

TEST(Sweeps, OutputSelection) {
  ExperimentSpec s = grover(4, SystematicErrors{{kQuarter}});
  s.outputs = {true, false, false};
  const auto rows = run_experiment(s);
  EXPECT_FALSE(std::isnan(rows[0].interference_pa));
  EXPECT_TRUE(std::isnan(rows[0].interference_au));
  EXPECT_TRUE(std::isnan(rows[0].success));
}

TEST(Sweeps, Validation) {
  EXPECT_THROW(run_experiment(grover(4, SystematicErrors{{}})), ArgumentError);
  EXPECT_THROW(run_experiment(grover(4, SystematicErrors{{0.5, 0.1}})), ArgumentError);
  EXPECT_THROW(run_experiment(grover(4, RandomErrors{{0.1}, 0})), ArgumentError);
  EXPECT_THROW(run_experiment(grover(4, RandomErrors{{-0.1}, 2})), ArgumentError);
  EXPECT_THROW(run_experiment(grover(4, DecoherenceErrors{ErrorKind::BitFlip, {0.5, 1.5}, {1},
                                                          SubsetPolicy::Prefix})),
               ArgumentError);
  EXPECT_THROW(run_experiment(grover(4, DecoherenceErrors{ErrorKind::BitFlip, {0.5}, {5},
                                                          SubsetPolicy::Prefix})),
               ArgumentError);
  EXPECT_THROW(run_experiment(grover(13, SystematicErrors{{0.5}})), SizeError);
  ExperimentSpec s = grover(4, SystematicErrors{{0.5}});
  s.outputs = {false, false, false};
  EXPECT_THROW(run_experiment(s), ArgumentError);
  s = grover(4, SystematicErrors{{0.5}});
  s.parallel = 0;
  EXPECT_THROW(run_experiment(s), ArgumentError);
  ExperimentSpec shor;
  shor.algorithm = default_shor_spec(2);
  shor.average_over_alpha = true;
  EXPECT_THROW(run_experiment(shor), ArgumentError);
}

TEST(Sweeps, DeterministicAcrossThreadCounts) {
  for (ErrorFamily f :
       {ErrorFamily{RandomErrors{{0.0, 0.4, 1.0}, 6}},
        ErrorFamily{DecoherenceErrors{ErrorKind::BitFlip, {0.0, 0.2, 0.7}, {1, 2},
                                      SubsetPolicy::All}}}) {
    ExperimentSpec s = grover(3, f, true);
    s.parallel = 1;
    const auto ref = run_experiment(s);
    for (int t : {2, 8}) {
      s.parallel = t;
      EXPECT_TRUE(same_rows(ref, run_experiment(s))) << t;
    }
  }
  ExperimentSpec a = grover(4, RandomErrors{{0.5}, 4});
  ExperimentSpec b = a;
  b.master_seed = 12;
  EXPECT_NE(run_experiment(a)[0].interference_pa, run_experiment(b)[0].interference_pa);
}

TEST(Output, CsvHeaderAndFields) {
  ResultRow r;
  r.sweep_value = 0.1;
  r.n = 4;
  r.interference_pa = 0.0;
  r.ibits_pa = -std::numeric_limits<double>::infinity();
  r.success = 1.0 / 3.0;
  r.n_samples = 3;
  r.seed = 9;
  const std::string csv = format_results({r}, OutputFormat::Csv);
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_EQ(header, kCsvHeader);
  EXPECT_EQ(line, "0.1,4,,0,,-inf,,0.333333333333,0,3,9");
}

TEST(Output, CsvAndJsonRoundTrip) {
  ExperimentSpec s = grover(3, DecoherenceErrors{ErrorKind::PhaseFlip, {0.0, 0.5, 1.0}, {0, 3},
                                                 SubsetPolicy::Prefix});
  const auto rows = run_experiment(s);
  const auto back_json = parse_results_json(format_results(rows, OutputFormat::Json));
  EXPECT_TRUE(same_rows(rows, back_json));
  const auto back_csv = parse_results_csv(format_results(rows, OutputFormat::Csv));
  ASSERT_EQ(back_csv.size(), rows.size());
  auto close = [](double a, double b) {
    if (std::isnan(a) || std::isinf(a))
      return same(a, b);
    return std::abs(a - b) <= 5e-12 * std::max(1.0, std::abs(a));
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(close(rows[i].interference_pa, back_csv[i].interference_pa));
    EXPECT_TRUE(close(rows[i].interference_au, back_csv[i].interference_au));
    EXPECT_TRUE(close(rows[i].ibits_au, back_csv[i].ibits_au));
    EXPECT_TRUE(close(rows[i].success, back_csv[i].success));
    EXPECT_EQ(rows[i].n_f, back_csv[i].n_f);
    EXPECT_EQ(rows[i].seed, back_csv[i].seed);
  }
  EXPECT_THROW(parse_results_csv("a,b\n"), ArgumentError);
  EXPECT_THROW(parse_results_json("{}"), ArgumentError);
}

TEST(Output, UnwritablePathThrowsIoError) {
  EXPECT_THROW(write_results({}, std::filesystem::path("/nonexistent-dir/x/out.csv"),
                             OutputFormat::Csv),
               IoError);
  const auto tmp = std::filesystem::temp_directory_path() / "qinterf_out_test.json";
  write_results({ResultRow{}}, tmp, OutputFormat::Json);
  std::ifstream in(tmp);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(parse_results_json(buf.str()).size(), 1u);
  std::filesystem::remove(tmp);
}

TEST(Cue, HaarUnitaryAndBaseline) {
  const ComplexMatrix u = haar_unitary(16, 3);
  EXPECT_TRUE(check_unitary(u, 1e-12));
  EXPECT_EQ(u.max_abs_diff(haar_unitary(16, 3)), 0.0);
  const CueStatistics st = cue_baseline(4, 200, 7);
  // E[sum |U|^4] = 2N / (N + 1) for Haar unitaries.
  EXPECT_NEAR(st.mean, 16.0 - 32.0 / 17.0, 4 * st.stddev / std::sqrt(200.0));
  EXPECT_EQ(st.samples, 200u);
  EXPECT_THROW(cue_baseline(9, 100, 1), SizeError);
  EXPECT_THROW(cue_baseline(0, 100, 1), ArgumentError);
  EXPECT_THROW(cue_baseline(3, 5, 1), ArgumentError);
  EXPECT_FALSE(format_cue(st, OutputFormat::Csv).empty());
}
