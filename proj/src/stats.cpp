#include "k2st/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace k2st {

namespace {

// Acklam's rational approximation with a Halley refinement step.
double inv_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, x;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the erfc-based CDF.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

struct Decision {
  double threshold;
  bool reject;
};

Decision decide(double stat, double alpha, Sided sided) {
  if (sided == Sided::One) {
    const double thr = z_quantile(1.0 - alpha);
    return {thr, stat > thr};
  }
  const double thr = z_quantile(1.0 - alpha / 2.0);
  return {thr, std::abs(stat) > thr};
}

// xMMD mean/variance pair on projected values: mu tilde and
// sigma tilde^2 = n^-2 sum (f_i - mu)^2.
std::pair<double, double> xmmd_moments(const Vec& f) {
  const double n = static_cast<double>(f.size());
  const double mu = f.mean();
  const double var = (f.array() - mu).square().sum() / (n * n);
  return {mu, var};
}

double ustat_from_gram(const Mat& G, const std::vector<Eigen::Index>& ids,
                       Eigen::Index n1) {
  const Eigen::Index total = static_cast<Eigen::Index>(ids.size());
  const Eigen::Index n2 = total - n1;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = i + 1; j < n1; ++j) sxx += G(ids[i], ids[j]);
  for (Eigen::Index i = n1; i < total; ++i)
    for (Eigen::Index j = i + 1; j < total; ++j) syy += G(ids[i], ids[j]);
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = n1; j < total; ++j) sxy += G(ids[i], ids[j]);
  return 2.0 * sxx / (double(n1) * (n1 - 1)) + 2.0 * syy / (double(n2) * (n2 - 1)) -
         2.0 * sxy / (double(n1) * n2);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double z_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("z_quantile: p must lie in (0,1)");
  return inv_normal_cdf(p);
}

double Witness::eval(const Vec& t) const {
  double sx = 0.0, sy = 0.0;
  for (Eigen::Index i = 0; i < x_refs.rows(); ++i)
    sx += kernel_eval(kernel, x_refs.row(i), t);
  for (Eigen::Index i = 0; i < y_refs.rows(); ++i)
    sy += kernel_eval(kernel, y_refs.row(i), t);
  return sx / x_refs.rows() - sy / y_refs.rows();
}

Vec Witness::eval_all(const Mat& points) const {
  const Mat gx = gram(kernel, x_refs, points);
  const Mat gy = gram(kernel, y_refs, points);
  return gx.colwise().mean().transpose() - gy.colwise().mean().transpose();
}

Witness witness_estimate(const Mat& x_train, const Mat& y_train,
                         const KernelSpec& kernel) {
  if (x_train.rows() == 0 || y_train.rows() == 0)
    throw std::invalid_argument("witness_estimate: empty training fold");
  if (!kernel.resolved())
    throw std::invalid_argument("witness_estimate: unresolved bandwidth");
  return Witness{x_train, y_train, kernel};
}

double mmd2_ustat(const Mat& X, const Mat& Y, const KernelSpec& kernel) {
  const Eigen::Index n1 = X.rows(), n2 = Y.rows();
  if (n1 < 2 || n2 < 2)
    throw std::invalid_argument("mmd2_ustat: need at least 2 points per side");
  const Mat gxx = gram(kernel, X, X);
  const Mat gyy = gram(kernel, Y, Y);
  const Mat gxy = gram(kernel, X, Y);
  const double sxx = gxx.sum() - gxx.trace();
  const double syy = gyy.sum() - gyy.trace();
  return sxx / (double(n1) * (n1 - 1)) + syy / (double(n2) * (n2 - 1)) -
         2.0 * gxy.mean();
}

TestOutcome mmd_perm_test(const Mat& X, const Mat& Y, const KernelSpec& kernel,
                          int B, double alpha, Rng& rng) {
  if (B < 1) throw std::invalid_argument("mmd_perm_test: B must be >= 1");
  const Eigen::Index n1 = X.rows(), n2 = Y.rows();
  if (n1 < 2 || n2 < 2)
    throw std::invalid_argument("mmd_perm_test: need at least 2 points per side");

  Mat pool(n1 + n2, X.cols());
  pool << X, Y;
  const KernelSpec resolved = resolve_bandwidth(kernel, pool);
  const Mat G = gram(resolved, pool, pool);

  std::vector<Eigen::Index> ids(n1 + n2);
  std::iota(ids.begin(), ids.end(), Eigen::Index{0});
  const double observed = ustat_from_gram(G, ids, n1);

  int count = 0;
  for (int b = 0; b < B; ++b) {
    rng.shuffle(ids);
    if (ustat_from_gram(G, ids, n1) >= observed) ++count;
  }
  const double p = (1.0 + count) / (B + 1.0);

  TestOutcome out;
  out.test_name = "mmd-perm";
  out.statistic = observed;
  out.alpha = alpha;
  out.sided = Sided::One;
  out.p_value = p;
  out.reject = p <= alpha;
  out.diagnostics["bandwidth"] = resolved.bandwidth;
  out.diagnostics["permutations"] = B;
  return out;
}

double ss_mean(const Vec& f_labeled, const Vec& uhat_labeled,
               const Vec& uhat_unlabeled) {
  const Eigen::Index n = f_labeled.size();
  if (n != uhat_labeled.size())
    throw std::invalid_argument("ss_mean: labeled length mismatch");
  if (n < 1) throw std::invalid_argument("ss_mean: empty labeled sample");
  const Eigen::Index m = uhat_unlabeled.size();
  const double resid = (f_labeled - uhat_labeled).sum() / n;
  const double pred = (uhat_labeled.sum() + uhat_unlabeled.sum()) / double(n + m);
  return resid + pred;
}

SsMoments ss_variance(const Vec& f_labeled, const Vec& uhat_labeled,
                      const Vec& uhat_unlabeled) {
  const Eigen::Index n = f_labeled.size();
  if (n != uhat_labeled.size())
    throw std::invalid_argument("ss_variance: labeled length mismatch");
  if (n < 2) throw std::invalid_argument("ss_variance: need n >= 2");
  const Eigen::Index m = uhat_unlabeled.size();

  const Vec resid = f_labeled - uhat_labeled;
  const double rmean = resid.mean();
  const double var1 = (resid.array() - rmean).square().sum() / n;

  Vec uhat_all(n + m);
  uhat_all << uhat_labeled, uhat_unlabeled;
  const double umean = uhat_all.mean();
  const double var2 = (uhat_all.array() - umean).square().sum() / double(n + m);

  SsMoments out;
  out.mu = ss_mean(f_labeled, uhat_labeled, uhat_unlabeled);
  out.var1 = var1;
  out.var2 = var2;
  out.combined_var = var1 / n + var2 / double(n + m);
  return out;
}

namespace detail {
WitnessSplit witness_split(Eigen::Index n1, Eigen::Index n2) {
  if (n1 < 4 || n2 < 4)
    throw std::invalid_argument("witness split: need at least 4 points per side");
  return {n1 / 2, n2 / 2};
}
}  // namespace detail

TestOutcome xmmd_test(const Mat& X, const Mat& Y, const KernelSpec& kernel,
                      double alpha, Sided sided) {
  const auto split = detail::witness_split(X.rows(), Y.rows());
  const Mat xt = X.bottomRows(X.rows() - split.train_x);
  const Mat yt = Y.bottomRows(Y.rows() - split.train_y);

  Mat pool(xt.rows() + yt.rows(), X.cols());
  pool << xt, yt;
  const KernelSpec resolved = resolve_bandwidth(kernel, pool);

  const Witness w = witness_estimate(X.topRows(split.train_x),
                                     Y.topRows(split.train_y), resolved);
  const auto [mx, vx] = xmmd_moments(w.eval_all(xt));
  const auto [my, vy] = xmmd_moments(w.eval_all(yt));
  if (vx + vy <= 0.0)
    throw DegenerateVariance("xmmd_test: zero projected variance");

  TestOutcome out;
  out.test_name = "xmmd";
  out.statistic = (mx - my) / std::sqrt(vx + vy);
  out.alpha = alpha;
  out.sided = sided;
  const auto dec = decide(out.statistic, alpha, sided);
  out.threshold = dec.threshold;
  out.reject = dec.reject;
  out.diagnostics["bandwidth"] = resolved.bandwidth;
  out.diagnostics["n_test_x"] = double(xt.rows());
  out.diagnostics["n_test_y"] = double(yt.rows());
  return out;
}

namespace {

// One side of the cross-fitted statistic: regress projections on
// covariates fold-wise, predict held-out labeled and unlabeled points.
SsMoments crossfit_side(const Vec& f, const Mat& v_labeled,
                        const Mat& v_unlabeled, const RegressorSpec& spec,
                        std::map<std::string, double>* diag,
                        const std::string& side) {
  const Eigen::Index n = f.size();
  const Eigen::Index m = v_unlabeled.rows();
  const auto folds = crossfit_split(n, m);
  if (folds.labeled_a.empty() || folds.labeled_b.empty())
    throw std::invalid_argument("xssmmd_test: cross-fit fold has no training point");

  auto gather_rows = [](const Mat& src, const std::vector<Eigen::Index>& ids) {
    Mat out(static_cast<Eigen::Index>(ids.size()), src.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) out.row(i) = src.row(ids[i]);
    return out;
  };
  auto gather = [](const Vec& src, const std::vector<Eigen::Index>& ids) {
    Vec out(static_cast<Eigen::Index>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i) out[i] = src[ids[i]];
    return out;
  };

  const auto reg_a = fit(spec, gather_rows(v_labeled, folds.labeled_a),
                         gather(f, folds.labeled_a));
  const auto reg_b = fit(spec, gather_rows(v_labeled, folds.labeled_b),
                         gather(f, folds.labeled_b));

  auto scatter = [](Vec& dst, const std::vector<Eigen::Index>& ids,
                    const Vec& vals) {
    for (std::size_t i = 0; i < ids.size(); ++i) dst[ids[i]] = vals[i];
  };
  Vec uhat_labeled(n);
  scatter(uhat_labeled, folds.labeled_a,
          reg_b.predict_all(gather_rows(v_labeled, folds.labeled_a)));
  scatter(uhat_labeled, folds.labeled_b,
          reg_a.predict_all(gather_rows(v_labeled, folds.labeled_b)));
  Vec uhat_unlabeled(m);
  scatter(uhat_unlabeled, folds.unlabeled_a,
          reg_b.predict_all(gather_rows(v_unlabeled, folds.unlabeled_a)));
  scatter(uhat_unlabeled, folds.unlabeled_b,
          reg_a.predict_all(gather_rows(v_unlabeled, folds.unlabeled_b)));

  if (diag) {
    (*diag)["fold_a_" + side] = double(folds.labeled_a.size());
    (*diag)["fold_b_" + side] = double(folds.labeled_b.size());
    if (spec.kind == RegressorKind::Knn)
      (*diag)["knn_k_" + side] = double(reg_a.resolved_k());
  }
  return ss_variance(f, uhat_labeled, uhat_unlabeled);
}

TestOutcome semi_supervised_test(const SemiSupervisedSample& sample,
                                 const KernelSpec& kernel, double alpha,
                                 Sided sided, const std::string& name,
                                 const std::function<SsMoments(
                                     const Witness&, const Vec&, const Mat&,
                                     const Mat&, std::map<std::string, double>*,
                                     const std::string&)>& side_moments) {
  sample.validate();
  const auto split = detail::witness_split(sample.n1(), sample.n2());
  const Eigen::Index ntx = sample.n1() - split.train_x;
  const Eigen::Index nty = sample.n2() - split.train_y;
  const Mat xt = sample.labeled_x.bottomRows(ntx);
  const Mat yt = sample.labeled_y.bottomRows(nty);
  const Mat vt = sample.labeled_v.bottomRows(ntx);
  const Mat wt = sample.labeled_w.bottomRows(nty);

  Mat pool(ntx + nty, xt.cols());
  pool << xt, yt;
  const KernelSpec resolved = resolve_bandwidth(kernel, pool);
  const Witness w = witness_estimate(sample.labeled_x.topRows(split.train_x),
                                     sample.labeled_y.topRows(split.train_y),
                                     resolved);

  TestOutcome out;
  out.test_name = name;
  out.alpha = alpha;
  out.sided = sided;
  out.diagnostics["bandwidth"] = resolved.bandwidth;

  const Vec fx = w.eval_all(xt);
  const Vec fy = w.eval_all(yt);

  if (sample.m1() == 0 && sample.m2() == 0) {
    // With no unlabeled data the statistic coincides with xMMD; computed
    // by the xMMD formula so the equality is exact.
    const auto [mx, vxx] = xmmd_moments(fx);
    const auto [my, vyy] = xmmd_moments(fy);
    if (vxx + vyy <= 0.0)
      throw DegenerateVariance(name + ": zero projected variance");
    out.statistic = (mx - my) / std::sqrt(vxx + vyy);
    out.diagnostics["m0_collapse"] = 1.0;
  } else {
    const SsMoments mom_x =
        side_moments(w, fx, vt, sample.unlabeled_v, &out.diagnostics, "x");
    const SsMoments mom_y =
        side_moments(w, fy, wt, sample.unlabeled_w, &out.diagnostics, "y");
    const double denom = mom_x.combined_var + mom_y.combined_var;
    if (denom <= 0.0)
      throw DegenerateVariance(name + ": zero combined variance");
    out.statistic = (mom_x.mu - mom_y.mu) / std::sqrt(denom);
    out.diagnostics["var1_x"] = mom_x.var1;
    out.diagnostics["var2_x"] = mom_x.var2;
    out.diagnostics["var1_y"] = mom_y.var1;
    out.diagnostics["var2_y"] = mom_y.var2;
  }

  const auto dec = decide(out.statistic, alpha, sided);
  out.threshold = dec.threshold;
  out.reject = dec.reject;
  return out;
}

}  // namespace

TestOutcome xssmmd_test(const SemiSupervisedSample& sample,
                        const KernelSpec& kernel,
                        const RegressorSpec& regressor, double alpha,
                        Sided sided) {
  return semi_supervised_test(
      sample, kernel, alpha, sided, "xssmmd",
      [&regressor](const Witness&, const Vec& f, const Mat& v_lab,
                   const Mat& v_unlab, std::map<std::string, double>* diag,
                   const std::string& side) {
        return crossfit_side(f, v_lab, v_unlab, regressor, diag, side);
      });
}

TestOutcome oracle_test(const SemiSupervisedSample& sample,
                        const KernelSpec& kernel, const CondMeanFn& cond_mean_x,
                        const CondMeanFn& cond_mean_y, double alpha,
                        Sided sided) {
  auto oracle_side = [&](const CondMeanFn& cond_mean) {
    return [&cond_mean](const Witness& w, const Vec& f, const Mat& v_lab,
                        const Mat& v_unlab, std::map<std::string, double>*,
                        const std::string&) {
      Vec uhat_labeled(v_lab.rows());
      for (Eigen::Index i = 0; i < v_lab.rows(); ++i)
        uhat_labeled[i] = cond_mean(w, v_lab.row(i));
      Vec uhat_unlabeled(v_unlab.rows());
      for (Eigen::Index j = 0; j < v_unlab.rows(); ++j)
        uhat_unlabeled[j] = cond_mean(w, v_unlab.row(j));
      return ss_variance(f, uhat_labeled, uhat_unlabeled);
    };
  };
  const auto side_x = oracle_side(cond_mean_x);
  const auto side_y = oracle_side(cond_mean_y);
  return semi_supervised_test(
      sample, kernel, alpha, sided, "oracle",
      [&](const Witness& w, const Vec& f, const Mat& v_lab, const Mat& v_unlab,
          std::map<std::string, double>* diag, const std::string& side) {
        return side == "x" ? side_x(w, f, v_lab, v_unlab, diag, side)
                           : side_y(w, f, v_lab, v_unlab, diag, side);
      });
}

AnalyticPower analytic_power_linear(const Vec& mu_diff, const Mat& Sigma11,
                                    const Mat& Sigma12, const Mat& Sigma22,
                                    int n, double alpha) {
  const Eigen::Index d = mu_diff.size();
  if (Sigma11.rows() != d || Sigma11.cols() != d || Sigma12.rows() != d ||
      Sigma22.rows() != Sigma12.cols() || Sigma22.rows() != Sigma22.cols())
    throw std::invalid_argument("analytic_power_linear: inconsistent dimensions");

  Eigen::FullPivLU<Mat> lu(Sigma22);
  if (!lu.isInvertible())
    throw std::invalid_argument("analytic_power_linear: singular Sigma22");

  const double delta = mu_diff.squaredNorm();
  const double tr11 = (Sigma11 * Sigma11).trace();
  const Mat cross = Sigma12 * lu.solve(Sigma12.transpose()) * Sigma11;
  const double arg_xss = 4.0 * tr11 - 2.0 * cross.trace();
  if (arg_xss <= 0.0)
    throw std::invalid_argument(
        "analytic_power_linear: non-positive variance term");

  const double za = z_quantile(alpha);
  AnalyticPower out;
  out.xss = normal_cdf(za + n * delta / std::sqrt(arg_xss));
  out.xmmd = normal_cdf(za + n * delta / std::sqrt(4.0 * tr11));
  out.mmd_perm = normal_cdf(za + n * delta / std::sqrt(2.0 * tr11));
  return out;
}

}  // namespace k2st
