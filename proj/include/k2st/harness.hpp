#pragma once

#include "k2st/datagen.hpp"
#include "k2st/stats.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace k2st {

enum class TestKind { MmdPerm, MmdPermJoint, Xmmd, XmmdJoint, Xssmmd };

TestKind test_kind_from_string(const std::string& s);
std::string to_string(TestKind kind);
std::string to_string(const RegressorSpec& spec);
std::string to_string(const KernelSpec& spec);

struct TestConfig {
  TestKind kind = TestKind::Xssmmd;
  KernelSpec kernel = KernelSpec::gaussian_median();
  RegressorSpec regressor;  // xssmmd only
  int permutations = 200;   // mmd-perm only
  double alpha = 0.05;
  Sided sided = Sided::One;
  std::string label;  // defaults to a descriptive name when empty

  std::string display_name() const;
};

struct ExperimentConfig {
  ScenarioSpec scenario;
  std::vector<TestConfig> tests;
  int trials = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
  bool collect_statistics = false;

  void validate() const;
};

struct TestSummary {
  std::string test_label;
  std::string kernel;
  std::string regressor;
  double rejection_rate = 0.0;
  double mc_std_error = 0.0;
  int degenerate_trials = 0;
  double wall_clock_s = 0.0;
  double ks_distance = -1.0;  // -1 when not computed
  bool ks_pass = false;
  std::vector<double> statistic_samples;  // empty unless collected
};

struct MonteCarloReport {
  ScenarioSpec scenario;
  int trials = 0;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::vector<TestSummary> results;
};

// Runs every configured test on the same generated sample per trial.
// Results are independent of worker count and execution order.
// Degenerate-variance trials count as non-rejections with a tally.
MonteCarloReport run_monte_carlo(const ExperimentConfig& config);

// One-sample Kolmogorov-Smirnov distance against the standard normal;
// pass iff distance < 1.628 / sqrt(N) (level 0.01). Requires >= 50 samples.
std::pair<double, bool> ks_normality(const std::vector<double>& stats);

// Median-of-3 wall-clock per test, alongside the power table of the
// last repetition.
MonteCarloReport bench_runtime(const ExperimentConfig& config);

enum class ReportFormat { Csv, Json };

void emit_report(const MonteCarloReport& report, ReportFormat format,
                 const std::string& path);
void write_report(const MonteCarloReport& report, ReportFormat format,
                  std::ostream& os);

// Plain-text key=value (de)serialization for scenario configs.
std::string scenario_to_kv(const ScenarioSpec& spec);
ScenarioSpec scenario_from_kv(std::istream& is);

}  // namespace k2st
