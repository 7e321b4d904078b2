#pragma once

#include "k2st/kernels.hpp"
#include "k2st/regression.hpp"
#include "k2st/rng.hpp"
#include "k2st/types.hpp"

#include <functional>

namespace k2st {

// Estimated MMD witness held as reference samples plus a resolved kernel:
// f(t) = mean_i k(x_refs_i, t) - mean_j k(y_refs_j, t).
struct Witness {
  Mat x_refs;
  Mat y_refs;
  KernelSpec kernel;

  double eval(const Vec& t) const;
  Vec eval_all(const Mat& points) const;
};

Witness witness_estimate(const Mat& x_train, const Mat& y_train,
                         const KernelSpec& kernel);

// Semi-supervised mean/variance components (cross-fitted or oracle).
struct SsMoments {
  double mu = 0.0;            // mean estimate
  double var1 = 0.0;          // residual-component variance
  double var2 = 0.0;          // predicted-component variance
  double combined_var = 0.0;  // n^-1 var1 + (n+m)^-1 var2
};

// Inverse standard-normal CDF; p in (0,1).
double z_quantile(double p);
double normal_cdf(double x);

// Unbiased MMD^2 U-statistic; may be negative. Requires >= 2 points on
// each side.
double mmd2_ustat(const Mat& X, const Mat& Y, const KernelSpec& kernel);

// Permutation MMD test with the add-one p-value convention:
// p = (1 + #{permuted >= observed}) / (B + 1), reject iff p <= alpha.
TestOutcome mmd_perm_test(const Mat& X, const Mat& Y, const KernelSpec& kernel,
                          int B, double alpha, Rng& rng);

// Semi-supervised mean: n^-1 sum(f - uhat_lab) + (n+m)^-1 sum(uhat_all).
double ss_mean(const Vec& f_labeled, const Vec& uhat_labeled,
               const Vec& uhat_unlabeled);

// Divide-by-count empirical variances of the residual and predicted
// components; combined_var = n^-1 var1 + (n+m)^-1 var2.
SsMoments ss_variance(const Vec& f_labeled, const Vec& uhat_labeled,
                      const Vec& uhat_unlabeled);

// Permutation-free studentized MMD: first halves train the witness,
// second halves are projected and studentized against a normal quantile.
TestOutcome xmmd_test(const Mat& X, const Mat& Y, const KernelSpec& kernel,
                      double alpha, Sided sided = Sided::One);

// Semi-supervised extension of xmmd_test: same witness split, then
// cross-fitted conditional-mean adjustment using the covariates. When
// m1 = m2 = 0 the statistic is computed by the xMMD formula exactly.
TestOutcome xssmmd_test(const SemiSupervisedSample& sample,
                        const KernelSpec& kernel,
                        const RegressorSpec& regressor, double alpha,
                        Sided sided = Sided::One);

// Conditional mean of the projected response given a covariate point,
// with access to the fitted witness.
using CondMeanFn = std::function<double(const Witness&, const Vec&)>;

// As xssmmd_test but with the supplied exact conditional means in place
// of the cross-fitted regressor.
TestOutcome oracle_test(const SemiSupervisedSample& sample,
                        const KernelSpec& kernel, const CondMeanFn& cond_mean_x,
                        const CondMeanFn& cond_mean_y, double alpha,
                        Sided sided = Sided::One);

// Closed-form asymptotic power in the linear-kernel Gaussian setting
// with n1 = n2 = m1 = m2 = n.
struct AnalyticPower {
  double xss = 0.0;       // denominator sqrt(4 tr(S11^2) - 2 tr(S12 S22^-1 S21 S11))
  double xmmd = 0.0;      // denominator sqrt(4 tr(S11^2))
  double mmd_perm = 0.0;  // denominator sqrt(2 tr(S11^2))
};

AnalyticPower analytic_power_linear(const Vec& mu_diff, const Mat& Sigma11,
                                    const Mat& Sigma12, const Mat& Sigma22,
                                    int n, double alpha);

namespace detail {
// First-half/second-half witness split used by xmmd/xssmmd/oracle.
struct WitnessSplit {
  Eigen::Index train_x, train_y;  // row counts of the witness halves
};
WitnessSplit witness_split(Eigen::Index n1, Eigen::Index n2);
}  // namespace detail

}  // namespace k2st
