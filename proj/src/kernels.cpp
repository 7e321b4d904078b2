#include "k2st/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace k2st {

double median_heuristic(const Mat& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw std::invalid_argument("median_heuristic: need at least 2 points");
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dists.push_back((points.row(i) - points.row(j)).norm());
    }
  }
  const std::size_t k = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + k, dists.end());
  double med = dists[k];
  if (dists.size() % 2 == 0) {
    // lower-median partner for the even case
    const double lo = *std::max_element(dists.begin(), dists.begin() + k);
    med = 0.5 * (med + lo);
  }
  if (med <= 0.0) return 1.0;
  return med;
}

KernelSpec resolve_bandwidth(const KernelSpec& spec, const Mat& pool) {
  KernelSpec out = spec;
  if (spec.kind == KernelKind::Gaussian && spec.bandwidth <= 0.0) {
    out.bandwidth = median_heuristic(pool);
  }
  return out;
}

double kernel_eval(const KernelSpec& spec, const Vec& x, const Vec& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("kernel_eval: dimension mismatch");
  switch (spec.kind) {
    case KernelKind::Linear:
      return spec.scale * x.dot(y);
    case KernelKind::Gaussian: {
      if (spec.bandwidth <= 0.0)
        throw std::invalid_argument("kernel_eval: unresolved Gaussian bandwidth");
      const double sq = (x - y).squaredNorm();
      return spec.scale * std::exp(-sq / (2.0 * spec.bandwidth * spec.bandwidth));
    }
  }
  throw std::logic_error("kernel_eval: unknown kernel kind");
}

Mat gram(const KernelSpec& spec, const Mat& A, const Mat& B) {
  if (A.rows() == 0 || B.rows() == 0)
    throw std::invalid_argument("gram: empty input");
  if (A.cols() != B.cols())
    throw std::invalid_argument("gram: dimension mismatch");
  switch (spec.kind) {
    case KernelKind::Linear:
      return spec.scale * (A * B.transpose());
    case KernelKind::Gaussian: {
      if (spec.bandwidth <= 0.0)
        throw std::invalid_argument("gram: unresolved Gaussian bandwidth");
      const Vec a2 = A.rowwise().squaredNorm();
      const Vec b2 = B.rowwise().squaredNorm();
      Mat sq = (-2.0 * (A * B.transpose())).colwise() + a2;
      sq.rowwise() += b2.transpose();
      const double inv = -1.0 / (2.0 * spec.bandwidth * spec.bandwidth);
      return spec.scale * (sq.array().max(0.0) * inv).exp().matrix();
    }
  }
  throw std::logic_error("gram: unknown kernel kind");
}

}  // namespace k2st
