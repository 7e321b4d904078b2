#include "k2st/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace k2st {

FittedRegressor fit(const RegressorSpec& spec, const Mat& covariates,
                    const Vec& responses) {
  if (covariates.rows() != responses.size())
    throw std::invalid_argument("fit: covariate/response length mismatch");

  FittedRegressor reg;
  reg.spec_ = spec;
  if (spec.kind == RegressorKind::ConstantZero) return reg;

  const Eigen::Index n = covariates.rows();
  if (n < 1) throw std::invalid_argument("fit: empty training set");
  reg.covariates_ = covariates;
  reg.responses_ = responses;
  reg.response_mean_ = responses.mean();

  if (spec.kind == RegressorKind::Knn) {
    int k = spec.knn_k;
    if (k <= 0) k = std::max<int>(1, static_cast<int>(std::ceil(std::sqrt(double(n)))));
    if (k > n) throw std::invalid_argument("fit: knn k exceeds training size");
    reg.k_ = k;
  } else {
    double h = spec.nw_bandwidth;
    if (h <= 0.0) h = n >= 2 ? median_heuristic(covariates) : 1.0;
    reg.h_ = h;
  }
  return reg;
}

double FittedRegressor::predict(const Vec& v) const {
  if (spec_.kind == RegressorKind::ConstantZero) return 0.0;
  if (v.size() != covariates_.cols())
    throw std::invalid_argument("predict: dimension mismatch");

  const Eigen::Index n = covariates_.rows();
  if (spec_.kind == RegressorKind::Knn) {
    std::vector<std::pair<double, Eigen::Index>> order(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      order[i] = {(covariates_.row(i).transpose() - v).squaredNorm(), i};
    }
    std::sort(order.begin(), order.end());
    double sum = 0.0;
    for (int i = 0; i < k_; ++i) sum += responses_[order[i].second];
    return sum / k_;
  }

  // Nadaraya-Watson
  double wsum = 0.0, rsum = 0.0;
  const double inv = -1.0 / (2.0 * h_ * h_);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w =
        std::exp(inv * (covariates_.row(i).transpose() - v).squaredNorm());
    wsum += w;
    rsum += w * responses_[i];
  }
  if (wsum <= 0.0) return response_mean_;
  return rsum / wsum;
}

Vec FittedRegressor::predict_all(const Mat& vs) const {
  Vec out(vs.rows());
  if (spec_.kind != RegressorKind::Knn) {
    for (Eigen::Index i = 0; i < vs.rows(); ++i) out[i] = predict(vs.row(i));
    return out;
  }
  if (vs.rows() == 0) return out;
  if (vs.cols() != covariates_.cols())
    throw std::invalid_argument("predict: dimension mismatch");

  // Batched kNN: one squared-distance matrix, then a partial selection per
  // query, with the same (distance, index) ordering as predict().
  const Eigen::Index n = covariates_.rows();
  const Vec t2 = covariates_.rowwise().squaredNorm();
  const Vec q2 = vs.rowwise().squaredNorm();
  Mat sq = (-2.0 * (vs * covariates_.transpose())).colwise() + q2;
  sq.rowwise() += t2.transpose();
  std::vector<std::pair<double, Eigen::Index>> best;
  best.reserve(static_cast<std::size_t>(k_) + 1);
  for (Eigen::Index r = 0; r < vs.rows(); ++r) {
    best.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::pair<double, Eigen::Index> p{sq(r, i), i};
      if (static_cast<int>(best.size()) == k_ && !(p < best.back())) continue;
      best.insert(std::upper_bound(best.begin(), best.end(), p), p);
      if (static_cast<int>(best.size()) > k_) best.pop_back();
    }
    double sum = 0.0;
    for (const auto& p : best) sum += responses_[p.second];
    out[r] = sum / k_;
  }
  return out;
}

FoldAssignment crossfit_split(Eigen::Index n_labeled, Eigen::Index m_unlabeled) {
  if (n_labeled < 2)
    throw std::invalid_argument("crossfit_split: need at least 2 labeled points");
  FoldAssignment folds;
  for (Eigen::Index i = 0; i < n_labeled; ++i) {
    ((i % 2 == 0) ? folds.labeled_a : folds.labeled_b).push_back(i);
  }
  // Unlabeled positions continue the 1-based parity rule at n_labeled + 1.
  for (Eigen::Index j = 0; j < m_unlabeled; ++j) {
    const Eigen::Index pos = n_labeled + j;  // 0-based absolute position
    ((pos % 2 == 0) ? folds.unlabeled_a : folds.unlabeled_b).push_back(j);
  }
  return folds;
}

}  // namespace k2st
