#include "k2st/datagen.hpp"

#include <cmath>

namespace k2st {

namespace {

Mat standard_normal(Eigen::Index n, int d, Rng& rng) {
  Mat out(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) out(i, k) = rng.normal();
  return out;
}

Vec shift_vector(int d, double eps, int j) {
  Vec a = Vec::Zero(d);
  for (int i = 0; i < j && i < d; ++i) a[i] = eps;
  return a;
}

Vec map_vector(int d, const std::vector<int>& index_set) {
  Vec b = Vec::Zero(d);
  for (const int i : index_set) {
    if (i < 1 || i > d)
      throw std::invalid_argument("index_set entry out of range");
    b[i - 1] = 1.0;
  }
  return b;
}

}  // namespace

void ScenarioSpec::validate() const {
  if (d < 1) throw std::invalid_argument("scenario: d must be >= 1");
  if (rho < 0.0 || rho >= 1.0)
    throw std::invalid_argument("scenario: rho must lie in [0, 1)");
  if (kind == ScenarioKind::NullT && df < 3.0)
    throw std::invalid_argument("scenario: df must be >= 3");
  if (j > d) throw std::invalid_argument("scenario: j exceeds d");
  if (sizes.n1 < 0 || sizes.n2 < 0 || sizes.m1 < 0 || sizes.m2 < 0)
    throw std::invalid_argument("scenario: negative sample size");
}

std::string ScenarioSpec::name() const { return to_string(kind); }

Mat equicorrelated_gaussian(Eigen::Index n, int d, double rho, Rng& rng) {
  Mat z = standard_normal(n, d, rng);
  if (rho == 0.0) return z;
  // sqrt(rho 11^T + (1-rho) I) = a I + b 11^T
  const double a = std::sqrt(1.0 - rho);
  const double b = (std::sqrt(1.0 - rho + d * rho) - a) / d;
  const Vec rowsum = z.rowwise().sum();
  return a * z + b * rowsum * Vec::Ones(d).transpose();
}

SemiSupervisedSample gen_null_gaussian(int d, const Sizes& sizes, Rng& rng) {
  SemiSupervisedSample s;
  s.labeled_x = standard_normal(sizes.n1, d, rng);
  s.labeled_v = standard_normal(sizes.n1, d, rng);
  s.labeled_y = standard_normal(sizes.n2, d, rng);
  s.labeled_w = standard_normal(sizes.n2, d, rng);
  s.unlabeled_v = standard_normal(sizes.m1, d, rng);
  s.unlabeled_w = standard_normal(sizes.m2, d, rng);
  return s;
}

SemiSupervisedSample gen_null_t(double df, int d, const Sizes& sizes, Rng& rng) {
  if (df < 3.0) throw std::invalid_argument("gen_null_t: df must be >= 3");
  auto draw = [&](Eigen::Index n) {
    Mat out(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k) out(i, k) = rng.student_t(df);
    return out;
  };
  SemiSupervisedSample s;
  s.labeled_x = draw(sizes.n1);
  s.labeled_v = draw(sizes.n1);
  s.labeled_y = draw(sizes.n2);
  s.labeled_w = draw(sizes.n2);
  s.unlabeled_v = draw(sizes.m1);
  s.unlabeled_w = draw(sizes.m2);
  return s;
}

SemiSupervisedSample gen_alt_linear_map(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  const int d = spec.d;
  const Vec a = shift_vector(d, spec.eps, spec.j);
  const Vec b = map_vector(d, spec.index_set);

  // Labeled draws come first so that the labeled sample is bitwise
  // independent of the unlabeled sizes for a fixed seed.
  SemiSupervisedSample s;
  s.labeled_v = equicorrelated_gaussian(spec.sizes.n1, d, spec.rho, rng);
  s.labeled_w = equicorrelated_gaussian(spec.sizes.n2, d, spec.rho, rng);
  s.labeled_w.rowwise() += a.transpose();
  s.unlabeled_v = equicorrelated_gaussian(spec.sizes.m1, d, spec.rho, rng);
  s.unlabeled_w = equicorrelated_gaussian(spec.sizes.m2, d, spec.rho, rng);
  s.unlabeled_w.rowwise() += a.transpose();
  s.labeled_x = s.labeled_v * b;  // n1 x 1, X = V.b exactly
  s.labeled_y = s.labeled_w * b;
  return s;
}

SemiSupervisedSample gen_joint_scenario(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  const int d = spec.d;
  if (d < 4) throw std::invalid_argument("gen_joint_scenario: need d >= 4");
  const Vec shift = shift_vector(d, spec.eps, spec.j);
  const bool alt =
      spec.kind == ScenarioKind::JointAlt || spec.kind == ScenarioKind::RhoSweepAlt;

  SemiSupervisedSample s;
  if (alt) {
    // P_X != P_Y, P_V = P_W: only X is shifted; V and W are the last two
    // (unshifted) coordinates of the same realization.
    Mat x = equicorrelated_gaussian(spec.sizes.n1, d, spec.rho, rng);
    x.rowwise() += shift.transpose();
    const Mat y = equicorrelated_gaussian(spec.sizes.n2, d, spec.rho, rng);
    s.labeled_x = x;
    s.labeled_y = y;
    s.labeled_v = x.rightCols(2);
    s.labeled_w = y.rightCols(2);
    s.unlabeled_v =
        equicorrelated_gaussian(spec.sizes.m1, d, spec.rho, rng).rightCols(2);
    s.unlabeled_w =
        equicorrelated_gaussian(spec.sizes.m2, d, spec.rho, rng).rightCols(2);
  } else {
    // P_X = P_Y (both shifted), P_V != P_W: V duplicates the shifted
    // first two coordinates of the same X realization while W duplicates
    // the unshifted last two coordinates of Y, a pure auxiliary shift.
    Mat x = equicorrelated_gaussian(spec.sizes.n1, d, spec.rho, rng);
    x.rowwise() += shift.transpose();
    Mat y = equicorrelated_gaussian(spec.sizes.n2, d, spec.rho, rng);
    y.rowwise() += shift.transpose();
    s.labeled_x = x;
    s.labeled_y = y;
    s.labeled_v = x.leftCols(2);
    s.labeled_w = y.rightCols(2);
    auto draw_v = [&](Eigen::Index n) {
      Mat z = equicorrelated_gaussian(n, d, spec.rho, rng);
      z.rowwise() += shift.transpose();
      return Mat(z.leftCols(2));
    };
    auto draw_w = [&](Eigen::Index n) {
      Mat z = equicorrelated_gaussian(n, d, spec.rho, rng);
      z.rowwise() += shift.transpose();
      return Mat(z.rightCols(2));
    };
    s.unlabeled_v = draw_v(spec.sizes.m1);
    s.unlabeled_w = draw_w(spec.sizes.m2);
  }
  return s;
}

SemiSupervisedSample generate(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  switch (spec.kind) {
    case ScenarioKind::NullGaussian:
      return gen_null_gaussian(spec.d, spec.sizes, rng);
    case ScenarioKind::NullT:
      return gen_null_t(spec.df, spec.d, spec.sizes, rng);
    case ScenarioKind::AltLinearMap:
      return gen_alt_linear_map(spec, rng);
    case ScenarioKind::JointNull:
    case ScenarioKind::JointAlt:
    case ScenarioKind::RhoSweepAlt:
      return gen_joint_scenario(spec, rng);
  }
  throw std::logic_error("generate: unknown scenario kind");
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  if (s == "null-gaussian") return ScenarioKind::NullGaussian;
  if (s == "null-t") return ScenarioKind::NullT;
  if (s == "alt-linear") return ScenarioKind::AltLinearMap;
  if (s == "joint-null") return ScenarioKind::JointNull;
  if (s == "joint-alt") return ScenarioKind::JointAlt;
  if (s == "rho-sweep") return ScenarioKind::RhoSweepAlt;
  throw std::invalid_argument("unknown scenario: " + s);
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::NullGaussian: return "null-gaussian";
    case ScenarioKind::NullT: return "null-t";
    case ScenarioKind::AltLinearMap: return "alt-linear";
    case ScenarioKind::JointNull: return "joint-null";
    case ScenarioKind::JointAlt: return "joint-alt";
    case ScenarioKind::RhoSweepAlt: return "rho-sweep";
  }
  return "unknown";
}

}  // namespace k2st
