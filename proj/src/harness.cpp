#include "k2st/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace k2st {

namespace {

using Clock = std::chrono::steady_clock;

struct TrialRecord {
  std::vector<bool> reject;
  std::vector<double> statistic;
  std::vector<bool> degenerate;
  std::vector<double> seconds;
};

Mat hcat(const Mat& a, const Mat& b) {
  Mat out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t trial) {
  // Stream slots: 0 for data generation, 1.. for per-test randomness.
  constexpr std::uint64_t kSlots = 64;
  Rng data_rng(config.seed, trial * kSlots);
  const SemiSupervisedSample sample = generate(config.scenario, data_rng);

  TrialRecord rec;
  const std::size_t ntests = config.tests.size();
  rec.reject.resize(ntests, false);
  rec.statistic.resize(ntests, 0.0);
  rec.degenerate.resize(ntests, false);
  rec.seconds.resize(ntests, 0.0);

  for (std::size_t i = 0; i < ntests; ++i) {
    const TestConfig& tc = config.tests[i];
    Rng test_rng(config.seed, trial * kSlots + 1 + i);
    const auto t0 = Clock::now();
    try {
      TestOutcome outcome;
      switch (tc.kind) {
        case TestKind::MmdPerm:
          outcome = mmd_perm_test(sample.labeled_x, sample.labeled_y, tc.kernel,
                                  tc.permutations, tc.alpha, test_rng);
          break;
        case TestKind::MmdPermJoint:
          outcome = mmd_perm_test(hcat(sample.labeled_x, sample.labeled_v),
                                  hcat(sample.labeled_y, sample.labeled_w),
                                  tc.kernel, tc.permutations, tc.alpha, test_rng);
          break;
        case TestKind::Xmmd:
          outcome = xmmd_test(sample.labeled_x, sample.labeled_y, tc.kernel,
                              tc.alpha, tc.sided);
          break;
        case TestKind::XmmdJoint:
          outcome = xmmd_test(hcat(sample.labeled_x, sample.labeled_v),
                              hcat(sample.labeled_y, sample.labeled_w),
                              tc.kernel, tc.alpha, tc.sided);
          break;
        case TestKind::Xssmmd:
          outcome = xssmmd_test(sample, tc.kernel, tc.regressor, tc.alpha,
                                tc.sided);
          break;
      }
      rec.reject[i] = outcome.reject;
      rec.statistic[i] = outcome.statistic;
    } catch (const DegenerateVariance&) {
      rec.degenerate[i] = true;
    }
    rec.seconds[i] =
        std::chrono::duration<double>(Clock::now() - t0).count();
  }
  return rec;
}

}  // namespace

TestKind test_kind_from_string(const std::string& s) {
  if (s == "mmd-perm") return TestKind::MmdPerm;
  if (s == "mmd-perm-joint") return TestKind::MmdPermJoint;
  if (s == "xmmd") return TestKind::Xmmd;
  if (s == "xmmd-joint") return TestKind::XmmdJoint;
  if (s == "xssmmd") return TestKind::Xssmmd;
  throw std::invalid_argument("unknown test kind: " + s);
}

std::string to_string(TestKind kind) {
  switch (kind) {
    case TestKind::MmdPerm: return "mmd-perm";
    case TestKind::MmdPermJoint: return "mmd-perm-joint";
    case TestKind::Xmmd: return "xmmd";
    case TestKind::XmmdJoint: return "xmmd-joint";
    case TestKind::Xssmmd: return "xssmmd";
  }
  return "unknown";
}

std::string to_string(const RegressorSpec& spec) {
  switch (spec.kind) {
    case RegressorKind::Knn:
      return spec.knn_k > 0 ? "knn" + std::to_string(spec.knn_k) : "knn";
    case RegressorKind::NadarayaWatson: return "nw";
    case RegressorKind::ConstantZero: return "zero";
  }
  return "unknown";
}

std::string to_string(const KernelSpec& spec) {
  if (spec.kind == KernelKind::Linear) return "linear";
  if (spec.bandwidth > 0.0) return "gaussian(h=" + std::to_string(spec.bandwidth) + ")";
  return "gaussian(median)";
}

std::string TestConfig::display_name() const {
  if (!label.empty()) return label;
  std::string name = to_string(kind);
  if (kind == TestKind::Xssmmd) name += "(" + to_string(regressor) + ")";
  return name;
}

void ExperimentConfig::validate() const {
  scenario.validate();
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
  if (tests.empty()) throw std::invalid_argument("config: no tests configured");
  for (const auto& t : tests) {
    if (!(t.alpha > 0.0 && t.alpha < 1.0))
      throw std::invalid_argument("config: alpha must lie in (0,1)");
  }
}

MonteCarloReport run_monte_carlo(const ExperimentConfig& config) {
  config.validate();
  const int trials = config.trials;
  std::vector<TrialRecord> records(trials);

  if (config.workers == 1) {
    for (int t = 0; t < trials; ++t) records[t] = run_trial(config, t);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int nworkers = std::min(config.workers, trials);
    for (int w = 0; w < nworkers; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const int t = next.fetch_add(1);
          if (t >= trials) return;
          records[t] = run_trial(config, t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  MonteCarloReport report;
  report.scenario = config.scenario;
  report.trials = trials;
  report.seed = config.seed;
  report.alpha = config.tests.front().alpha;

  for (std::size_t i = 0; i < config.tests.size(); ++i) {
    TestSummary s;
    s.test_label = config.tests[i].display_name();
    s.kernel = to_string(config.tests[i].kernel);
    s.regressor = config.tests[i].kind == TestKind::Xssmmd
                      ? to_string(config.tests[i].regressor)
                      : "";
    int rejects = 0;
    for (const auto& rec : records) {
      if (rec.reject[i]) ++rejects;
      if (rec.degenerate[i]) ++s.degenerate_trials;
      s.wall_clock_s += rec.seconds[i];
      if (config.collect_statistics && !rec.degenerate[i])
        s.statistic_samples.push_back(rec.statistic[i]);
    }
    s.rejection_rate = double(rejects) / trials;
    s.mc_std_error =
        std::sqrt(s.rejection_rate * (1.0 - s.rejection_rate) / trials);
    if (config.collect_statistics && s.statistic_samples.size() >= 50) {
      const auto [dist, pass] = ks_normality(s.statistic_samples);
      s.ks_distance = dist;
      s.ks_pass = pass;
    }
    report.results.push_back(std::move(s));
  }
  return report;
}

std::pair<double, bool> ks_normality(const std::vector<double>& stats) {
  if (stats.size() < 50)
    throw std::invalid_argument("ks_normality: need at least 50 statistics");
  std::vector<double> sorted = stats;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = normal_cdf(sorted[i]);
    dist = std::max(dist, std::abs((i + 1) / n - cdf));
    dist = std::max(dist, std::abs(cdf - i / n));
  }
  const double threshold = 1.628 / std::sqrt(n);
  return {dist, dist < threshold};
}

MonteCarloReport bench_runtime(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::vector<double>> timings(config.tests.size());
  MonteCarloReport last;
  for (int rep = 0; rep < 3; ++rep) {
    last = run_monte_carlo(config);
    for (std::size_t i = 0; i < last.results.size(); ++i)
      timings[i].push_back(last.results[i].wall_clock_s);
  }
  for (std::size_t i = 0; i < last.results.size(); ++i) {
    std::sort(timings[i].begin(), timings[i].end());
    last.results[i].wall_clock_s = timings[i][1];  // median of 3
  }
  return last;
}

namespace {

nlohmann::json report_json(const MonteCarloReport& r) {
  nlohmann::json j;
  j["scenario"] = to_string(r.scenario.kind);
  j["d"] = r.scenario.d;
  j["rho"] = r.scenario.rho;
  j["eps"] = r.scenario.eps;
  j["j"] = r.scenario.j;
  j["n1"] = r.scenario.sizes.n1;
  j["n2"] = r.scenario.sizes.n2;
  j["m1"] = r.scenario.sizes.m1;
  j["m2"] = r.scenario.sizes.m2;
  j["alpha"] = r.alpha;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["results"] = nlohmann::json::array();
  for (const auto& s : r.results) {
    nlohmann::json row;
    row["test"] = s.test_label;
    row["kernel"] = s.kernel;
    row["regressor"] = s.regressor;
    row["rejection_rate"] = s.rejection_rate;
    row["mc_std_error"] = s.mc_std_error;
    row["ks_distance"] = s.ks_distance;
    row["degenerate_trials"] = s.degenerate_trials;
    row["wall_clock_s"] = s.wall_clock_s;
    j["results"].push_back(row);
  }
  return j;
}

}  // namespace

void write_report(const MonteCarloReport& r, ReportFormat format,
                  std::ostream& os) {
  if (format == ReportFormat::Json) {
    os << report_json(r).dump(2) << "\n";
    return;
  }
  os << "scenario,test,kernel,regressor,n1,n2,m1,m2,alpha,trials,seed,"
        "rejection_rate,mc_std_error,ks_distance,degenerate_trials,"
        "wall_clock_s\n";
  os.precision(17);
  for (const auto& s : r.results) {
    os << to_string(r.scenario.kind) << ',' << s.test_label << ',' << s.kernel
       << ',' << s.regressor << ',' << r.scenario.sizes.n1 << ','
       << r.scenario.sizes.n2 << ',' << r.scenario.sizes.m1 << ','
       << r.scenario.sizes.m2 << ',' << r.alpha << ',' << r.trials << ','
       << r.seed << ',' << s.rejection_rate << ',' << s.mc_std_error << ','
       << s.ks_distance << ',' << s.degenerate_trials << ',' << s.wall_clock_s
       << "\n";
  }
}

void emit_report(const MonteCarloReport& r, ReportFormat format,
                 const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("emit_report: cannot open " + path);
  write_report(r, format, os);
  if (!os) throw std::runtime_error("emit_report: write failed for " + path);

  bool any_stats = false;
  for (const auto& s : r.results) any_stats |= !s.statistic_samples.empty();
  if (any_stats) {
    const std::string sidecar = path + ".stats.csv";
    std::ofstream ss(sidecar);
    if (!ss) throw std::runtime_error("emit_report: cannot open " + sidecar);
    ss.precision(17);
    ss << "test,statistic\n";
    for (const auto& s : r.results)
      for (const double v : s.statistic_samples)
        ss << s.test_label << ',' << v << "\n";
  }
}

std::string scenario_to_kv(const ScenarioSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "scenario=" << to_string(spec.kind) << "\n"
     << "d=" << spec.d << "\n"
     << "rho=" << spec.rho << "\n"
     << "eps=" << spec.eps << "\n"
     << "j=" << spec.j << "\n"
     << "df=" << spec.df << "\n"
     << "n1=" << spec.sizes.n1 << "\n"
     << "n2=" << spec.sizes.n2 << "\n"
     << "m1=" << spec.sizes.m1 << "\n"
     << "m2=" << spec.sizes.m2 << "\n";
  if (!spec.index_set.empty()) {
    os << "index-set=";
    for (std::size_t i = 0; i < spec.index_set.size(); ++i) {
      if (i) os << ';';
      os << spec.index_set[i];
    }
    os << "\n";
  }
  return os.str();
}

ScenarioSpec scenario_from_kv(std::istream& is) {
  ScenarioSpec spec;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "scenario") spec.kind = scenario_kind_from_string(val);
    else if (key == "d") spec.d = std::stoi(val);
    else if (key == "rho") spec.rho = std::stod(val);
    else if (key == "eps") spec.eps = std::stod(val);
    else if (key == "j") spec.j = std::stoi(val);
    else if (key == "df") spec.df = std::stod(val);
    else if (key == "n1") spec.sizes.n1 = std::stol(val);
    else if (key == "n2") spec.sizes.n2 = std::stol(val);
    else if (key == "m1") spec.sizes.m1 = std::stol(val);
    else if (key == "m2") spec.sizes.m2 = std::stol(val);
    else if (key == "index-set") {
      spec.index_set.clear();
      std::istringstream ss(val);
      std::string tok;
      while (std::getline(ss, tok, ';'))
        if (!tok.empty()) spec.index_set.push_back(std::stoi(tok));
    } else {
      throw std::invalid_argument("scenario_from_kv: unknown key " + key);
    }
  }
  return spec;
}

}  // namespace k2st
