// pybind11 bindings for the k2st core: kernel two-sample tests with
// optional semi-supervised covariate adjustment.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "k2st/datagen.hpp"
#include "k2st/stats.hpp"

namespace py = pybind11;
using namespace k2st;

namespace {

Sided sided_from_string(const std::string& s) {
  if (s == "one") return Sided::One;
  if (s == "two") return Sided::Two;
  throw std::invalid_argument("sided must be 'one' or 'two'");
}

KernelSpec kernel_from_args(const std::string& kind, double bandwidth,
                            double scale) {
  KernelSpec k;
  if (kind == "linear") {
    k = KernelSpec::linear();
  } else if (kind == "gaussian") {
    k = bandwidth > 0.0 ? KernelSpec::gaussian(bandwidth)
                        : KernelSpec::gaussian_median();
  } else {
    throw std::invalid_argument("kernel must be 'gaussian' or 'linear'");
  }
  k.scale = scale;
  return k;
}

RegressorSpec regressor_from_args(const std::string& kind, int knn_k,
                                  double nw_bandwidth) {
  if (kind == "knn") return RegressorSpec::knn(knn_k);
  if (kind == "nw") return RegressorSpec::nadaraya_watson(nw_bandwidth);
  if (kind == "zero") return RegressorSpec::constant_zero();
  throw std::invalid_argument("regressor must be 'knn', 'nw' or 'zero'");
}

}  // namespace

PYBIND11_MODULE(_k2st, m) {
  m.doc() = "kernel two-sample tests with semi-supervised covariate adjustment";

  py::register_exception<DegenerateVariance>(m, "DegenerateVariance",
                                             PyExc_ArithmeticError);

  py::class_<TestOutcome>(m, "TestOutcome")
      .def_readonly("test_name", &TestOutcome::test_name)
      .def_readonly("statistic", &TestOutcome::statistic)
      .def_readonly("alpha", &TestOutcome::alpha)
      .def_readonly("reject", &TestOutcome::reject)
      .def_readonly("p_value", &TestOutcome::p_value)
      .def_readonly("threshold", &TestOutcome::threshold)
      .def_readonly("diagnostics", &TestOutcome::diagnostics)
      .def("__repr__", [](const TestOutcome& o) {
        return "<TestOutcome " + o.test_name +
               " statistic=" + std::to_string(o.statistic) +
               " reject=" + (o.reject ? std::string("True") : "False") + ">";
      });

  py::class_<SemiSupervisedSample>(m, "SemiSupervisedSample")
      .def(py::init([](Mat x, Mat v, Mat y, Mat w, Mat uv, Mat uw) {
             SemiSupervisedSample s{std::move(x), std::move(v), std::move(y),
                                    std::move(w), std::move(uv), std::move(uw)};
             s.validate();
             return s;
           }),
           py::arg("labeled_x"), py::arg("labeled_v"), py::arg("labeled_y"),
           py::arg("labeled_w"), py::arg("unlabeled_v") = Mat(0, 0),
           py::arg("unlabeled_w") = Mat(0, 0))
      .def_readwrite("labeled_x", &SemiSupervisedSample::labeled_x)
      .def_readwrite("labeled_v", &SemiSupervisedSample::labeled_v)
      .def_readwrite("labeled_y", &SemiSupervisedSample::labeled_y)
      .def_readwrite("labeled_w", &SemiSupervisedSample::labeled_w)
      .def_readwrite("unlabeled_v", &SemiSupervisedSample::unlabeled_v)
      .def_readwrite("unlabeled_w", &SemiSupervisedSample::unlabeled_w);

  m.def(
      "median_heuristic", [](const Mat& pts) { return median_heuristic(pts); },
      py::arg("points"),
      "Median pairwise Euclidean distance (lower-median average for even "
      "pair counts).");

  m.def(
      "mmd2",
      [](const Mat& X, const Mat& Y, const std::string& kernel, double bandwidth,
         double scale) {
        auto k = kernel_from_args(kernel, bandwidth, scale);
        Mat pool(X.rows() + Y.rows(), X.cols());
        pool << X, Y;
        return mmd2_ustat(X, Y, resolve_bandwidth(k, pool));
      },
      py::arg("x"), py::arg("y"), py::arg("kernel") = "gaussian",
      py::arg("bandwidth") = 0.0, py::arg("scale") = 1.0,
      "Unbiased MMD^2 U-statistic (may be negative).");

  m.def(
      "mmd_perm_test",
      [](const Mat& X, const Mat& Y, const std::string& kernel, double bandwidth,
         double scale, int B, double alpha, std::uint64_t seed) {
        Rng rng(seed, 0);
        return mmd_perm_test(X, Y, kernel_from_args(kernel, bandwidth, scale), B,
                             alpha, rng);
      },
      py::arg("x"), py::arg("y"), py::arg("kernel") = "gaussian",
      py::arg("bandwidth") = 0.0, py::arg("scale") = 1.0, py::arg("B") = 200,
      py::arg("alpha") = 0.05, py::arg("seed") = 0,
      "Permutation MMD test with the add-one p-value convention.");

  m.def(
      "xmmd_test",
      [](const Mat& X, const Mat& Y, const std::string& kernel, double bandwidth,
         double scale, double alpha, const std::string& sided) {
        return xmmd_test(X, Y, kernel_from_args(kernel, bandwidth, scale), alpha,
                         sided_from_string(sided));
      },
      py::arg("x"), py::arg("y"), py::arg("kernel") = "gaussian",
      py::arg("bandwidth") = 0.0, py::arg("scale") = 1.0, py::arg("alpha") = 0.05,
      py::arg("sided") = "one",
      "Studentized cross-MMD test (sample splitting, Gaussian null).");

  m.def(
      "xssmmd_test",
      [](const SemiSupervisedSample& s, const std::string& kernel,
         double bandwidth, double scale, const std::string& regressor, int knn_k,
         double nw_bandwidth, double alpha, const std::string& sided) {
        return xssmmd_test(s, kernel_from_args(kernel, bandwidth, scale),
                           regressor_from_args(regressor, knn_k, nw_bandwidth),
                           alpha, sided_from_string(sided));
      },
      py::arg("sample"), py::arg("kernel") = "gaussian",
      py::arg("bandwidth") = 0.0, py::arg("scale") = 1.0,
      py::arg("regressor") = "knn", py::arg("knn_k") = 0,
      py::arg("nw_bandwidth") = 0.0, py::arg("alpha") = 0.05,
      py::arg("sided") = "one",
      "Semi-supervised cross-MMD test with cross-fitted covariate "
      "adjustment.");

  m.def(
      "analytic_power_linear",
      [](const Vec& mu_diff, const Mat& S11, const Mat& S12, const Mat& S22,
         int n, double alpha) {
        const auto p = analytic_power_linear(mu_diff, S11, S12, S22, n, alpha);
        py::dict out;
        out["xss"] = p.xss;
        out["xmmd"] = p.xmmd;
        out["mmd_perm"] = p.mmd_perm;
        return out;
      },
      py::arg("mu_diff"), py::arg("sigma11"), py::arg("sigma12"),
      py::arg("sigma22"), py::arg("n"), py::arg("alpha") = 0.05,
      "Closed-form asymptotic powers in the bilinear-kernel Gaussian "
      "setting.");

  m.def(
      "generate_scenario",
      [](const std::string& scenario, int d, double rho, double eps, int j,
         double df, const std::vector<int>& index_set, long long n1,
         long long n2, long long m1, long long m2, std::uint64_t seed,
         std::uint64_t stream) {
        ScenarioSpec spec;
        spec.kind = scenario_kind_from_string(scenario);
        spec.d = d;
        spec.rho = rho;
        spec.eps = eps;
        spec.j = j;
        spec.df = df;
        spec.index_set = index_set;
        spec.sizes = {n1, n2, m1, m2};
        Rng rng(seed, stream);
        return generate(spec, rng);
      },
      py::arg("scenario"), py::arg("d") = 10, py::arg("rho") = 0.0,
      py::arg("eps") = 0.0, py::arg("j") = 0, py::arg("df") = 10.0,
      py::arg("index_set") = std::vector<int>{}, py::arg("n1") = 100,
      py::arg("n2") = 100, py::arg("m1") = 0, py::arg("m2") = 0,
      py::arg("seed") = 0, py::arg("stream") = 0,
      "Draw one synthetic dataset from a named scenario.");
}
