#pragma once

#include "k2st/types.hpp"

namespace k2st {

enum class KernelKind { Gaussian, Linear };

// Kernel configuration. For the Gaussian kernel, bandwidth == 0 means
// "resolve with the median heuristic" and bandwidth > 0 is a fixed h in
// k(x,y) = scale * exp(-||x-y||^2 / (2 h^2)). The linear kernel is
// k(x,y) = scale * <x,y> and carries no bandwidth. `scale` exists to
// express positive rescalings of the kernel; it defaults to 1.
struct KernelSpec {
  KernelKind kind = KernelKind::Gaussian;
  double bandwidth = 0.0;
  double scale = 1.0;

  bool resolved() const {
    return kind == KernelKind::Linear || bandwidth > 0.0;
  }

  static KernelSpec gaussian_median() { return {KernelKind::Gaussian, 0.0, 1.0}; }
  static KernelSpec gaussian(double h) { return {KernelKind::Gaussian, h, 1.0}; }
  static KernelSpec linear() { return {KernelKind::Linear, 0.0, 1.0}; }
};

// Median of pairwise Euclidean distances over distinct index pairs i<j.
// Falls back to 1.0 when the median distance is zero (degenerate data).
// Throws on fewer than 2 points.
double median_heuristic(const Mat& points);

// Returns a copy of `spec` with the Gaussian bandwidth fixed, using the
// median heuristic over `pool` when no fixed bandwidth was given.
KernelSpec resolve_bandwidth(const KernelSpec& spec, const Mat& pool);

double kernel_eval(const KernelSpec& spec, const Vec& x, const Vec& y);

// |A| x |B| matrix of kernel values; throws on empty input or dimension
// mismatch.
Mat gram(const KernelSpec& spec, const Mat& A, const Mat& B);

}  // namespace k2st
