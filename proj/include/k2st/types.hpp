#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace k2st {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Thrown when the studentized statistic has zero estimated variance on
// both sides, e.g. all projected values are constant.
class DegenerateVariance : public std::runtime_error {
 public:
  explicit DegenerateVariance(const std::string& what)
      : std::runtime_error(what) {}
};

enum class Sided { One, Two };

// Labeled (X,V) and (Y,W) pairs plus covariate-only pools. Rows are
// observations; labeled_x row i pairs with labeled_v row i.
struct SemiSupervisedSample {
  Mat labeled_x;    // n1 x dx
  Mat labeled_v;    // n1 x dv
  Mat labeled_y;    // n2 x dx
  Mat labeled_w;    // n2 x dw
  Mat unlabeled_v;  // m1 x dv (may have 0 rows)
  Mat unlabeled_w;  // m2 x dw (may have 0 rows)

  Eigen::Index n1() const { return labeled_x.rows(); }
  Eigen::Index n2() const { return labeled_y.rows(); }
  Eigen::Index m1() const { return unlabeled_v.rows(); }
  Eigen::Index m2() const { return unlabeled_w.rows(); }

  void validate() const {
    if (labeled_x.rows() != labeled_v.rows())
      throw std::invalid_argument("labeled_x/labeled_v row count mismatch");
    if (labeled_y.rows() != labeled_w.rows())
      throw std::invalid_argument("labeled_y/labeled_w row count mismatch");
    if (labeled_x.cols() != labeled_y.cols())
      throw std::invalid_argument("X and Y dimension mismatch");
    if (m1() > 0 && unlabeled_v.cols() != labeled_v.cols())
      throw std::invalid_argument("unlabeled_v dimension mismatch");
    if (m2() > 0 && unlabeled_w.cols() != labeled_w.cols())
      throw std::invalid_argument("unlabeled_w dimension mismatch");
  }
};

struct TestOutcome {
  std::string test_name;
  double statistic = 0.0;
  double alpha = 0.05;
  Sided sided = Sided::One;
  bool reject = false;
  std::optional<double> p_value;    // permutation test only
  std::optional<double> threshold;  // z-quantile tests
  std::map<std::string, double> diagnostics;
};

}  // namespace k2st
