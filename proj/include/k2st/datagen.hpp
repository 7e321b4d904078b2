#pragma once

#include "k2st/rng.hpp"
#include "k2st/types.hpp"

#include <string>
#include <vector>

namespace k2st {

enum class ScenarioKind {
  NullGaussian,
  NullT,
  AltLinearMap,
  JointNull,
  JointAlt,
  RhoSweepAlt,
};

struct Sizes {
  Eigen::Index n1 = 0, n2 = 0, m1 = 0, m2 = 0;
};

// Synthetic-scenario configuration. Fields are interpreted per kind:
//   NullGaussian: d
//   NullT:        d, df
//   AltLinearMap: d, rho, eps, j, index_set
//   JointNull / JointAlt / RhoSweepAlt: d, rho, eps, j
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::NullGaussian;
  int d = 10;
  double rho = 0.0;
  double eps = 0.0;
  int j = 0;
  double df = 10.0;
  std::vector<int> index_set;  // 1-based coordinate indices
  Sizes sizes;

  void validate() const;
  std::string name() const;
};

SemiSupervisedSample gen_null_gaussian(int d, const Sizes& sizes, Rng& rng);
SemiSupervisedSample gen_null_t(double df, int d, const Sizes& sizes, Rng& rng);
SemiSupervisedSample gen_alt_linear_map(const ScenarioSpec& spec, Rng& rng);
SemiSupervisedSample gen_joint_scenario(const ScenarioSpec& spec, Rng& rng);

SemiSupervisedSample generate(const ScenarioSpec& spec, Rng& rng);

// n x d draws from N(0, rho 11^T + (1-rho) I) via the closed-form
// square root of the equicorrelation matrix.
Mat equicorrelated_gaussian(Eigen::Index n, int d, double rho, Rng& rng);

ScenarioKind scenario_kind_from_string(const std::string& s);
std::string to_string(ScenarioKind kind);

}  // namespace k2st
