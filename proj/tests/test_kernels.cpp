#include <doctest.h>

#include "k2st/kernels.hpp"
#include "k2st/rng.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

using namespace k2st;

namespace {

Mat points1d(std::initializer_list<double> xs) {
  Mat m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

}  // namespace

TEST_CASE("gaussian kernel basics") {
  const auto spec = KernelSpec::gaussian(1.0);
  Vec x(1), y(1);
  x << 0.0;
  y << 0.0;
  CHECK(kernel_eval(spec, x, x) == doctest::Approx(1.0));
  y << 2.0;
  // exp(-4/2)
  CHECK(kernel_eval(spec, x, y) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(kernel_eval(spec, x, y) > 0.0);
  CHECK(kernel_eval(spec, x, y) <= 1.0);
}

TEST_CASE("linear kernel is the dot product") {
  const auto spec = KernelSpec::linear();
  Vec x(2), y(2);
  x << 1, 2;
  y << 3, 4;
  CHECK(kernel_eval(spec, x, y) == doctest::Approx(11.0));
}

TEST_CASE("dimension mismatch is rejected") {
  Vec x(2), y(3);
  x.setZero();
  y.setZero();
  CHECK_THROWS_AS(kernel_eval(KernelSpec::linear(), x, y), std::invalid_argument);
}

TEST_CASE("kernel symmetry on random pairs") {
  Rng rng(7, 0);
  const auto spec = KernelSpec::gaussian(0.7);
  for (int rep = 0; rep < 50; ++rep) {
    Vec x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
    }
    CHECK(kernel_eval(spec, x, y) == doctest::Approx(kernel_eval(spec, y, x)).epsilon(1e-14));
  }
}

TEST_CASE("median heuristic") {
  CHECK(median_heuristic(points1d({0.0, 2.0})) == doctest::Approx(2.0));
  // distances {1, 3, 2} -> median 2
  CHECK(median_heuristic(points1d({0.0, 1.0, 3.0})) == doctest::Approx(2.0));
  // degenerate data falls back to 1.0
  CHECK(median_heuristic(points1d({5.0, 5.0, 5.0})) == doctest::Approx(1.0));
  CHECK_THROWS_AS(median_heuristic(points1d({1.0})), std::invalid_argument);
}

TEST_CASE("median heuristic is permutation invariant") {
  Rng rng(13, 0);
  Mat pts(8, 2);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts(i) = rng.normal();
  const double ref = median_heuristic(pts);
  Mat perm(8, 2);
  const int order[] = {3, 0, 7, 5, 1, 6, 2, 4};
  for (int i = 0; i < 8; ++i) perm.row(i) = pts.row(order[i]);
  CHECK(median_heuristic(perm) == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("gram basics") {
  const auto lin = KernelSpec::linear();
  Mat basis = Mat::Identity(3, 3);
  CHECK((gram(lin, basis, basis) - Mat::Identity(3, 3)).norm() ==
        doctest::Approx(0.0));

  const auto g = KernelSpec::gaussian(1.0);
  Mat A = points1d({0.0, 1.0});
  Mat B = points1d({2.0});
  const Mat G = gram(g, A, B);
  CHECK(G(0, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(G(1, 0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

  CHECK_THROWS_AS(gram(g, Mat(0, 1), B), std::invalid_argument);
}

TEST_CASE("gram agrees with a scalar-loop oracle") {
  Rng rng(21, 0);
  const auto spec = KernelSpec::gaussian(0.9);
  for (int rep = 0; rep < 20; ++rep) {
    Mat A(4, 2), B(3, 2);
    for (Eigen::Index i = 0; i < A.size(); ++i) A(i) = rng.normal();
    for (Eigen::Index i = 0; i < B.size(); ++i) B(i) = rng.normal();
    const Mat G = gram(spec, A, B);
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 3; ++j)
        CHECK(G(i, j) ==
              doctest::Approx(kernel_eval(spec, A.row(i), B.row(j))).epsilon(1e-12));
  }
}

TEST_CASE("gram matrices are positive semidefinite") {
  Rng rng(33, 0);
  const auto spec = KernelSpec::gaussian(1.3);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(5));
    Mat A(n, 3);
    for (Eigen::Index i = 0; i < A.size(); ++i) A(i) = rng.normal();
    const Mat G = gram(spec, A, A);
    Eigen::SelfAdjointEigenSolver<Mat> es(G);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("resolve_bandwidth applies the median heuristic once") {
  const Mat pool = points1d({0.0, 2.0});
  const auto resolved = resolve_bandwidth(KernelSpec::gaussian_median(), pool);
  CHECK(resolved.bandwidth == doctest::Approx(2.0));
  const auto fixed = resolve_bandwidth(KernelSpec::gaussian(0.5), pool);
  CHECK(fixed.bandwidth == doctest::Approx(0.5));
  CHECK(resolve_bandwidth(KernelSpec::linear(), pool).resolved());
}
