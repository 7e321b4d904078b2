#include <doctest.h>

#include "k2st/regression.hpp"
#include "k2st/rng.hpp"

using namespace k2st;

namespace {

Mat col(std::initializer_list<double> xs) {
  Mat m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vec point(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

}  // namespace

TEST_CASE("constant-zero regressor") {
  const auto reg = fit(RegressorSpec::constant_zero(), Mat(0, 1), Vec(0));
  CHECK(reg.predict(point(3.7)) == 0.0);
  CHECK(reg.predict(point(-100)) == 0.0);
}

TEST_CASE("knn single neighbor") {
  const auto reg = fit(RegressorSpec::knn(1), col({0.0}), vec({5.0}));
  CHECK(reg.predict(point(0.3)) == doctest::Approx(5.0));
}

TEST_CASE("knn two nearest neighbors") {
  const auto reg =
      fit(RegressorSpec::knn(2), col({0.0, 1.0, 10.0}), vec({1.0, 3.0, 100.0}));
  CHECK(reg.predict(point(0.4)) == doctest::Approx(2.0));
}

TEST_CASE("knn with k = n is the global mean") {
  const auto reg =
      fit(RegressorSpec::knn(4), col({0, 1, 2, 3}), vec({1, 2, 3, 10}));
  CHECK(reg.predict(point(-5)) == doctest::Approx(4.0));
  CHECK(reg.predict(point(99)) == doctest::Approx(4.0));
}

TEST_CASE("knn auto k resolves to ceil(sqrt(n))") {
  Mat cov(9, 1);
  Vec resp(9);
  for (int i = 0; i < 9; ++i) {
    cov(i, 0) = i;
    resp[i] = i;
  }
  CHECK(fit(RegressorSpec::knn(), cov, resp).resolved_k() == 3);
  CHECK_THROWS_AS(fit(RegressorSpec::knn(10), cov, resp), std::invalid_argument);
  CHECK_THROWS_AS(fit(RegressorSpec::knn(1), Mat(0, 1), Vec(0)),
                  std::invalid_argument);
}

TEST_CASE("nadaraya-watson interpolates at training points for tiny h") {
  const auto reg = fit(RegressorSpec::nadaraya_watson(1e-3),
                       col({0.0, 5.0, 10.0}), vec({1.0, -2.0, 7.0}));
  CHECK(reg.predict(point(5.0)) == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("nadaraya-watson falls back to the global mean on weight underflow") {
  const auto reg =
      fit(RegressorSpec::nadaraya_watson(1e-3), col({0.0, 1.0}), vec({2.0, 4.0}));
  // query far enough that both Gaussian weights underflow to zero
  CHECK(reg.predict(point(1e6)) == doctest::Approx(3.0));
}

TEST_CASE("response linearity of the linear smoothers") {
  Rng rng(5, 0);
  Mat cov(12, 2);
  Vec resp(12);
  for (Eigen::Index i = 0; i < cov.size(); ++i) cov(i) = rng.normal();
  for (Eigen::Index i = 0; i < 12; ++i) resp[i] = rng.normal();

  for (const auto& spec :
       {RegressorSpec::knn(3), RegressorSpec::nadaraya_watson()}) {
    const auto base = fit(spec, cov, resp);
    const double a = -2.5, b = 0.75;
    const auto scaled = fit(spec, cov, (a * resp.array() + b).matrix());
    for (int rep = 0; rep < 10; ++rep) {
      Vec q(2);
      q << rng.normal(), rng.normal();
      CHECK(scaled.predict(q) ==
            doctest::Approx(a * base.predict(q) + b).epsilon(1e-12));
    }
  }
}

TEST_CASE("training-row permutation does not change predictions") {
  Rng rng(9, 0);
  Mat cov(8, 1);
  Vec resp(8);
  for (int i = 0; i < 8; ++i) {
    cov(i, 0) = i * 1.37;
    resp[i] = rng.normal();
  }
  Mat pcov(8, 1);
  Vec presp(8);
  const int order[] = {6, 1, 4, 0, 7, 3, 5, 2};
  for (int i = 0; i < 8; ++i) {
    pcov.row(i) = cov.row(order[i]);
    presp[i] = resp[order[i]];
  }
  for (const auto& spec :
       {RegressorSpec::knn(3), RegressorSpec::nadaraya_watson()}) {
    const auto a = fit(spec, cov, resp);
    const auto b = fit(spec, pcov, presp);
    for (int rep = 0; rep < 10; ++rep) {
      const Vec q = point(rng.normal() * 5);
      CHECK(a.predict(q) == doctest::Approx(b.predict(q)).epsilon(1e-12));
    }
  }
}

TEST_CASE("crossfit_split follows the odd/even rule") {
  SUBCASE("n=4, m=0") {
    const auto f = crossfit_split(4, 0);
    CHECK(f.labeled_a == std::vector<Eigen::Index>{0, 2});
    CHECK(f.labeled_b == std::vector<Eigen::Index>{1, 3});
  }
  SUBCASE("n=2, m=2") {
    const auto f = crossfit_split(2, 2);
    CHECK(f.labeled_a == std::vector<Eigen::Index>{0});
    CHECK(f.labeled_b == std::vector<Eigen::Index>{1});
    CHECK(f.unlabeled_a == std::vector<Eigen::Index>{0});
    CHECK(f.unlabeled_b == std::vector<Eigen::Index>{1});
  }
  SUBCASE("n=5, m=0: sizes differ by one") {
    const auto f = crossfit_split(5, 0);
    CHECK(f.labeled_a == std::vector<Eigen::Index>{0, 2, 4});
    CHECK(f.labeled_b == std::vector<Eigen::Index>{1, 3});
  }
  CHECK_THROWS_AS(crossfit_split(1, 4), std::invalid_argument);
}

TEST_CASE("crossfit_split partitions both index ranges") {
  for (const auto [n, m] : {std::pair{4, 6}, {5, 5}, {7, 0}, {2, 9}}) {
    const auto f = crossfit_split(n, m);
    std::vector<bool> seen_l(n, false), seen_u(m, false);
    for (const auto i : f.labeled_a) seen_l[i] = !seen_l[i];
    for (const auto i : f.labeled_b) seen_l[i] = !seen_l[i];
    for (const auto i : f.unlabeled_a) seen_u[i] = !seen_u[i];
    for (const auto i : f.unlabeled_b) seen_u[i] = !seen_u[i];
    for (const bool b : seen_l) CHECK(b);
    for (const bool b : seen_u) CHECK(b);
  }
}
