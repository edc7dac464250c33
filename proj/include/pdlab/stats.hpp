#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pdlab/paths.hpp"
#include "pdlab/rng.hpp"

namespace pdlab {

/// Exact empirical Wasserstein-1 distance between two one-dimensional
/// samples (sorted-coupling for equal sizes, quantile coupling otherwise).
double marginal_w1(std::vector<double> xs, std::vector<double> ys);

/// Paths reduced to their values on a common partition.
struct SamplePathEnsemble {
  Partition grid;
  int dim = 1;
  std::vector<Mat> paths;  // each dim x (cells()+1)
  std::string provenance;
};

SamplePathEnsemble make_ensemble(const Partition& grid, int dim, std::string provenance);

/// Randomized lower bound on the finite-rank Lipschitz distance between the
/// two ensembles: draws `trials` random 1-Lipschitz functionals of the node
/// vector (max-of-affine pieces with l1-bounded slopes; half the draws are
/// single sign-aligned linear pieces so constant shifts are attained) and
/// returns the largest mean discrepancy. Nondecreasing in `trials` for a
/// fixed stream.
double finite_rank_gap(const SamplePathEnsemble& a, const SamplePathEnsemble& b,
                       int trials, RngStream rng);

/// Mean over the ensemble of the exact sup-norm gap between each rcll path
/// and its affine interpolation along pi.
double interp_error_stat(const std::vector<RcllPath>& paths, const Partition& pi);

struct RateFit {
  std::vector<std::pair<double, double>> points;  // (log n, log mean)
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double ci_low = 0.0;   // bootstrap 90% slope interval
  double ci_high = 0.0;
};

/// Log-log least squares through per-n replication samples; the slope
/// interval is a percentile bootstrap over replications (widened to contain
/// the point estimate). Needs >= 4 distinct n with positive means.
RateFit fit_rate(const std::vector<std::pair<double, std::vector<double>>>& samples,
                 int bootstrap, RngStream rng);

/// Means-only variant (degenerate interval), for exact sequences.
RateFit fit_rate_means(const std::vector<std::pair<double, double>>& n_and_mean);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

KsResult two_sample_ks(std::vector<double> a, std::vector<double> b);
KsResult one_sample_ks(std::vector<double> a, const std::function<double(double)>& cdf);

/// Complement of the Kolmogorov limit distribution, Q(t) = 2 sum (-1)^{k-1} e^{-2k^2t^2}.
double kolmogorov_q(double t);

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 0.0;
  int df = 0;
};

/// Goodness of fit of observed nonnegative-integer counts against a fully
/// specified discrete law given by pmf(k); tail bins are pooled so every bin
/// has expected count >= min_expected.
ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& observed,
                               const std::function<double(std::int64_t)>& pmf,
                               double min_expected = 5.0);

ChiSquareResult chi_square_poisson(const std::vector<std::int64_t>& observed,
                                   double mean, double min_expected = 5.0);
ChiSquareResult chi_square_binomial(const std::vector<std::int64_t>& observed,
                                    std::int64_t trials, double p,
                                    double min_expected = 5.0);

/// Basic accumulators used all over the experiment code.
double mean_of(const std::vector<double>& v);
double variance_of(const std::vector<double>& v);  // unbiased
double std_error_of(const std::vector<double>& v);

}  // namespace pdlab
