// k2st command-line driver.
//
//   k2st simulate  — Monte-Carlo power/level sweep over a synthetic scenario
//   k2st test      — run the configured tests once on CSV data
//   k2st nulldist  — dump per-trial statistics plus a KS normality check
//   k2st bench     — median-of-3 wall-clock timing of the configured tests
//
// Every option can also come from a plain key=value config file passed
// with --config; command-line flags override file values. The seed
// defaults to the K2ST_SEED environment variable when not given.

#include <CLI11.hpp>

#include "k2st/csv.hpp"
#include "k2st/harness.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace k2st;

struct CommonOpts {
  // scenario
  std::string scenario = "null-gaussian";
  int d = 10;
  double rho = 0.0;
  double eps = 0.0;
  int j = 0;
  double df = 10.0;
  std::vector<int> index_set;
  long long n1 = 100, n2 = 100, m1 = 0, m2 = 0;
  // tests
  std::string tests = "xssmmd";
  std::string regressor = "knn";
  int knn_k = 0;
  std::string kernel = "gaussian";
  std::string bandwidth = "median";
  int B = 200;
  double alpha = 0.05;
  std::string sided = "one";
  // execution
  int trials = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;
  std::string format = "csv";
};

void add_test_options(CLI::App& app, CommonOpts& o) {
  app.add_option("--tests", o.tests,
                 "comma-separated: mmd-perm,mmd-perm-joint,xmmd,xmmd-joint,xssmmd");
  app.add_option("--regressor", o.regressor, "knn|nw|zero (xssmmd only)");
  app.add_option("--knn-k", o.knn_k, "neighbor count, 0 = ceil(sqrt(n))");
  app.add_option("--kernel", o.kernel, "gaussian|linear");
  app.add_option("--bandwidth", o.bandwidth, "median|<float>");
  app.add_option("--B", o.B, "permutation count for mmd-perm");
  app.add_option("--alpha", o.alpha, "test level");
  app.add_option("--sided", o.sided, "one|two");
}

void add_scenario_options(CLI::App& app, CommonOpts& o) {
  app.add_option("--scenario", o.scenario,
                 "null-gaussian|null-t|alt-linear|joint-null|joint-alt|rho-sweep");
  app.add_option("--d", o.d, "ambient dimension");
  app.add_option("--rho", o.rho, "equicorrelation strength");
  app.add_option("--eps", o.eps, "mean-shift magnitude");
  app.add_option("--j", o.j, "number of shifted coordinates");
  app.add_option("--df", o.df, "degrees of freedom for null-t");
  app.add_option("--index-set", o.index_set,
                 "1-based projection coordinates for alt-linear")
      ->delimiter(',');
  app.add_option("--n1", o.n1, "labeled sample size, X side");
  app.add_option("--n2", o.n2, "labeled sample size, Y side");
  app.add_option("--m1", o.m1, "unlabeled covariate count, V side");
  app.add_option("--m2", o.m2, "unlabeled covariate count, W side");
}

void add_run_options(CLI::App& app, CommonOpts& o) {
  app.add_option("--trials", o.trials, "Monte-Carlo trial count");
  app.add_option("--seed", o.seed, "master RNG seed")->envname("K2ST_SEED");
  app.add_option("--workers", o.workers, "worker thread count");
  app.add_option("--out", o.out, "output path (stdout when empty)");
  app.add_option("--format", o.format, "csv|json");
}

KernelSpec make_kernel(const CommonOpts& o) {
  if (o.kernel == "linear") return KernelSpec::linear();
  if (o.kernel != "gaussian")
    throw CLI::ValidationError("--kernel", "unknown kernel '" + o.kernel + "'");
  if (o.bandwidth == "median") return KernelSpec::gaussian_median();
  return KernelSpec::gaussian(std::stod(o.bandwidth));
}

RegressorSpec make_regressor(const CommonOpts& o) {
  if (o.regressor == "knn") return RegressorSpec::knn(o.knn_k);
  if (o.regressor == "nw") return RegressorSpec::nadaraya_watson();
  if (o.regressor == "zero") return RegressorSpec::constant_zero();
  throw CLI::ValidationError("--regressor",
                             "unknown regressor '" + o.regressor + "'");
}

Sided make_sided(const CommonOpts& o) {
  if (o.sided == "one") return Sided::One;
  if (o.sided == "two") return Sided::Two;
  throw CLI::ValidationError("--sided", "expected one|two");
}

std::vector<TestConfig> make_tests(const CommonOpts& o) {
  std::vector<TestConfig> out;
  std::istringstream ss(o.tests);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    TestConfig cfg;
    cfg.kind = test_kind_from_string(name);
    cfg.kernel = make_kernel(o);
    cfg.regressor = make_regressor(o);
    cfg.permutations = o.B;
    cfg.alpha = o.alpha;
    cfg.sided = make_sided(o);
    out.push_back(cfg);
  }
  if (out.empty()) throw CLI::ValidationError("--tests", "no tests selected");
  return out;
}

ExperimentConfig make_experiment(const CommonOpts& o) {
  ExperimentConfig cfg;
  cfg.scenario.kind = scenario_kind_from_string(o.scenario);
  cfg.scenario.d = o.d;
  cfg.scenario.rho = o.rho;
  cfg.scenario.eps = o.eps;
  cfg.scenario.j = o.j;
  cfg.scenario.df = o.df;
  cfg.scenario.index_set = o.index_set;
  cfg.scenario.sizes = {o.n1, o.n2, o.m1, o.m2};
  cfg.tests = make_tests(o);
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.validate();
  return cfg;
}

ReportFormat make_format(const CommonOpts& o) {
  if (o.format == "csv") return ReportFormat::Csv;
  if (o.format == "json") return ReportFormat::Json;
  throw CLI::ValidationError("--format", "expected csv|json");
}

void deliver(const MonteCarloReport& report, const CommonOpts& o) {
  if (o.out.empty())
    write_report(report, make_format(o), std::cout);
  else
    emit_report(report, make_format(o), o.out);
}

int run_simulate(const CommonOpts& o) {
  deliver(run_monte_carlo(make_experiment(o)), o);
  return 0;
}

int run_nulldist(const CommonOpts& o) {
  auto cfg = make_experiment(o);
  cfg.collect_statistics = true;
  const auto report = run_monte_carlo(cfg);
  deliver(report, o);
  for (const auto& r : report.results) {
    if (r.ks_distance < 0) continue;
    std::cerr << r.test_label << ": ks_distance=" << r.ks_distance
              << " ks_pass=" << (r.ks_pass ? "yes" : "no") << "\n";
  }
  return 0;
}

int run_bench(const CommonOpts& o) {
  const auto report = bench_runtime(make_experiment(o));
  deliver(report, o);
  for (const auto& r : report.results)
    std::cerr << r.test_label << ": median wall_clock_s=" << r.wall_clock_s
              << "\n";
  return 0;
}

struct TestFiles {
  std::string x, v, y, w, uv, uw;
  bool header = false;
  bool standardize = false;
};

int run_test(const CommonOpts& o, const TestFiles& files) {
  DatasetPaths paths;
  paths.x = files.x;
  paths.v = files.v;
  paths.y = files.y;
  paths.w = files.w;
  if (!files.uv.empty()) paths.unlabeled_v = files.uv;
  if (!files.uw.empty()) paths.unlabeled_w = files.uw;
  const auto sample = load_csv_dataset(paths, files.header, files.standardize);

  Rng perm_rng(o.seed, 0);
  std::ostringstream body;
  for (const auto& cfg : make_tests(o)) {
    TestOutcome outcome;
    switch (cfg.kind) {
      case TestKind::Xssmmd:
        outcome = xssmmd_test(sample, cfg.kernel, cfg.regressor, cfg.alpha,
                              cfg.sided);
        break;
      case TestKind::Xmmd:
        outcome = xmmd_test(sample.labeled_x, sample.labeled_y, cfg.kernel,
                            cfg.alpha, cfg.sided);
        break;
      case TestKind::MmdPerm:
        outcome = mmd_perm_test(sample.labeled_x, sample.labeled_y, cfg.kernel,
                                cfg.permutations, cfg.alpha, perm_rng);
        break;
      case TestKind::XmmdJoint: {
        Mat jx(sample.n1(), sample.labeled_x.cols() + sample.labeled_v.cols());
        jx << sample.labeled_x, sample.labeled_v;
        Mat jy(sample.n2(), sample.labeled_y.cols() + sample.labeled_w.cols());
        jy << sample.labeled_y, sample.labeled_w;
        outcome = xmmd_test(jx, jy, cfg.kernel, cfg.alpha, cfg.sided);
        break;
      }
      case TestKind::MmdPermJoint: {
        Mat jx(sample.n1(), sample.labeled_x.cols() + sample.labeled_v.cols());
        jx << sample.labeled_x, sample.labeled_v;
        Mat jy(sample.n2(), sample.labeled_y.cols() + sample.labeled_w.cols());
        jy << sample.labeled_y, sample.labeled_w;
        outcome = mmd_perm_test(jx, jy, cfg.kernel, cfg.permutations, cfg.alpha,
                                perm_rng);
        break;
      }
    }
    if (o.format == "json") {
      body << "{\"test\":\"" << outcome.test_name << "\",\"statistic\":"
           << outcome.statistic << ",\"reject\":" << (outcome.reject ? "true" : "false");
      if (outcome.p_value) body << ",\"p_value\":" << *outcome.p_value;
      if (outcome.threshold) body << ",\"threshold\":" << *outcome.threshold;
      body << "}\n";
    } else {
      body << outcome.test_name << ",statistic=" << outcome.statistic;
      if (outcome.p_value) body << ",p_value=" << *outcome.p_value;
      if (outcome.threshold) body << ",threshold=" << *outcome.threshold;
      body << ",reject=" << (outcome.reject ? "1" : "0") << "\n";
    }
  }
  if (o.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream os(o.out);
    if (!os) throw std::runtime_error("cannot open " + o.out);
    os << body.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-supervised kernel two-sample testing toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "plain key=value config file");

  CommonOpts o;
  TestFiles files;

  auto* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo rejection rates for a synthetic scenario");
  auto* testcmd = app.add_subcommand("test", "run tests on CSV data files");
  auto* nulldist = app.add_subcommand(
      "nulldist", "per-trial statistics and a KS check against N(0,1)");
  auto* bench =
      app.add_subcommand("bench", "median-of-3 wall-clock per configured test");

  for (CLI::App* cmd : {simulate, nulldist, bench}) {
    add_scenario_options(*cmd, o);
    add_test_options(*cmd, o);
    add_run_options(*cmd, o);
  }
  add_test_options(*testcmd, o);
  add_run_options(*testcmd, o);
  testcmd->add_option("--x", files.x, "labeled X responses CSV")->required();
  testcmd->add_option("--v", files.v, "labeled V covariates CSV")->required();
  testcmd->add_option("--y", files.y, "labeled Y responses CSV")->required();
  testcmd->add_option("--w", files.w, "labeled W covariates CSV")->required();
  testcmd->add_option("--unlabeled-v", files.uv, "unlabeled V covariates CSV");
  testcmd->add_option("--unlabeled-w", files.uw, "unlabeled W covariates CSV");
  testcmd->add_flag("--header", files.header, "skip a header row in every CSV");
  testcmd->add_flag("--standardize", files.standardize,
                    "column-standardize using labeled statistics");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(o);
    if (*testcmd) return run_test(o, files);
    if (*nulldist) return run_nulldist(o);
    if (*bench) return run_bench(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
