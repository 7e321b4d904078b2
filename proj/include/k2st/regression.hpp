#pragma once

#include "k2st/kernels.hpp"
#include "k2st/types.hpp"

#include <vector>

namespace k2st {

enum class RegressorKind { Knn, NadarayaWatson, ConstantZero };

struct RegressorSpec {
  RegressorKind kind = RegressorKind::Knn;
  // 0 = auto: max(1, ceil(sqrt(n_train)))
  int knn_k = 0;
  // 0 = median heuristic over the training covariates
  double nw_bandwidth = 0.0;

  static RegressorSpec knn(int k = 0) { return {RegressorKind::Knn, k, 0.0}; }
  static RegressorSpec nadaraya_watson(double h = 0.0) {
    return {RegressorKind::NadarayaWatson, 0, h};
  }
  static RegressorSpec constant_zero() { return {RegressorKind::ConstantZero, 0, 0.0}; }
};

// Immutable conditional-mean predictor. KNN: unweighted mean of the k
// nearest training responses (Euclidean distance, ties broken by lower
// training index). Nadaraya-Watson: Gaussian-weighted response mean with
// a global-mean fallback when all weights underflow.
class FittedRegressor {
 public:
  double predict(const Vec& v) const;
  Vec predict_all(const Mat& vs) const;

  const RegressorSpec& spec() const { return spec_; }
  int resolved_k() const { return k_; }
  double resolved_bandwidth() const { return h_; }

 private:
  friend FittedRegressor fit(const RegressorSpec&, const Mat&, const Vec&);

  RegressorSpec spec_;
  Mat covariates_;
  Vec responses_;
  int k_ = 0;
  double h_ = 0.0;
  double response_mean_ = 0.0;
};

FittedRegressor fit(const RegressorSpec& spec, const Mat& covariates,
                    const Vec& responses);

// Odd/even cross-fitting folds over a labeled index range [0, n) and an
// unlabeled range [n, n+m), both 0-based here; "odd 1-based position"
// means index 0, 2, 4, ...
struct FoldAssignment {
  std::vector<Eigen::Index> labeled_a, labeled_b;
  std::vector<Eigen::Index> unlabeled_a, unlabeled_b;  // indices into [0, m)
};

FoldAssignment crossfit_split(Eigen::Index n_labeled, Eigen::Index m_unlabeled);

}  // namespace k2st
