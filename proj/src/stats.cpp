#include "pdlab/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pdlab/path_ops.hpp"

namespace pdlab {

double marginal_w1(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || ys.empty()) {
    throw std::invalid_argument("marginal_w1: samples must be nonempty");
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  if (xs.size() == ys.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) acc += std::abs(xs[i] - ys[i]);
    return acc / static_cast<double>(xs.size());
  }
  // Quantile coupling: integrate |F^{-1} - G^{-1}| over the merged u-grid.
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double u = 0.0, acc = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double ui = static_cast<double>(i + 1) / nx;
    const double uj = static_cast<double>(j + 1) / ny;
    const double next = std::min(ui, uj);
    acc += (next - u) * std::abs(xs[i] - ys[j]);
    u = next;
    if (ui <= uj) ++i;
    if (uj <= ui) ++j;
  }
  return acc;
}

SamplePathEnsemble make_ensemble(const Partition& grid, int dim, std::string provenance) {
  SamplePathEnsemble e{grid, dim, {}, std::move(provenance)};
  return e;
}

namespace {

// One random 1-Lipschitz functional: max of affine pieces, each with
// l1-bounded slope vector over the flattened node values.
struct MaxAffine {
  std::vector<Vec> slopes;  // flattened coordinates
  std::vector<double> offsets;

  double operator()(const Mat& path_nodes) const {
    const Eigen::Map<const Vec> flat(path_nodes.data(), path_nodes.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < slopes.size(); ++p) {
      best = std::max(best, slopes[p].dot(flat) + offsets[p]);
    }
    return best;
  }
};

MaxAffine draw_functional(std::ptrdiff_t coords, RngStream& rng) {
  MaxAffine f;
  const bool aligned_linear = rng.uniform01() < 0.5;
  if (aligned_linear) {
    // Single piece, all slopes of one sign, l1 norm exactly 1: attains
    // constant shifts between ensembles.
    const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    Vec w(coords);
    double total = 0.0;
    for (std::ptrdiff_t k = 0; k < coords; ++k) {
      w[k] = -std::log(rng.uniform01());
      total += w[k];
    }
    f.slopes.push_back(sign / total * w);
    f.offsets.push_back(0.0);
    return f;
  }
  const int pieces = 2 + static_cast<int>(rng.next_u64() % 3);
  for (int p = 0; p < pieces; ++p) {
    Vec w(coords);
    double total = 0.0;
    for (std::ptrdiff_t k = 0; k < coords; ++k) {
      w[k] = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * -std::log(rng.uniform01());
      total += std::abs(w[k]);
    }
    const double scale = rng.uniform01() / total;  // l1 norm <= 1
    f.slopes.push_back(scale * w);
    f.offsets.push_back(rng.normal());
  }
  return f;
}

}  // namespace

double finite_rank_gap(const SamplePathEnsemble& a, const SamplePathEnsemble& b,
                       int trials, RngStream rng) {
  if (!(a.grid == b.grid) || a.dim != b.dim) {
    throw std::invalid_argument("finite_rank_gap: ensembles live on different partitions");
  }
  if (a.paths.empty() || b.paths.empty() || trials < 1) {
    throw std::invalid_argument("finite_rank_gap: need nonempty ensembles and trials >= 1");
  }
  const std::ptrdiff_t coords =
      static_cast<std::ptrdiff_t>(a.dim) * static_cast<std::ptrdiff_t>(a.grid.cells() + 1);
  double gap = 0.0;
  for (int t = 0; t < trials; ++t) {
    RngStream trial_rng = rng.child(static_cast<std::uint64_t>(t));
    const MaxAffine f = draw_functional(coords, trial_rng);
    double mean_a = 0.0, mean_b = 0.0;
    for (const Mat& p : a.paths) mean_a += f(p);
    for (const Mat& p : b.paths) mean_b += f(p);
    mean_a /= static_cast<double>(a.paths.size());
    mean_b /= static_cast<double>(b.paths.size());
    gap = std::max(gap, std::abs(mean_a - mean_b));
  }
  return gap;
}

double interp_error_stat(const std::vector<RcllPath>& paths, const Partition& pi) {
  double acc = 0.0;
  for (const RcllPath& p : paths) {
    acc += sup_dist(p, interpolate(p, pi));
  }
  return paths.empty() ? 0.0 : acc / static_cast<double>(paths.size());
}

namespace {

struct LsqFit {
  double slope, intercept, r2;
};

LsqFit least_squares(const std::vector<std::pair<double, double>>& pts) {
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : pts) {
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
  }
  const double vx = sxx - sx * sx / n;
  const double cxy = sxy - sx * sy / n;
  const double vy = syy - sy * sy / n;
  LsqFit f{};
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return f;
}

}  // namespace

RateFit fit_rate(const std::vector<std::pair<double, std::vector<double>>>& samples,
                 int bootstrap, RngStream rng) {
  if (samples.size() < 4) {
    throw std::invalid_argument("fit_rate: need at least 4 distinct n values");
  }
  RateFit out;
  for (const auto& [n, reps] : samples) {
    if (reps.empty()) throw std::invalid_argument("fit_rate: empty replication set");
    const double m = mean_of(reps);
    if (!(m > 0.0)) throw std::invalid_argument("fit_rate: means must be positive");
    out.points.emplace_back(std::log(n), std::log(m));
  }
  const LsqFit base = least_squares(out.points);
  out.slope = base.slope;
  out.intercept = base.intercept;
  out.r2 = base.r2;
  if (bootstrap > 0) {
    std::vector<double> slopes(static_cast<std::size_t>(bootstrap));
    for (int b = 0; b < bootstrap; ++b) {
      RngStream boot = rng.child(static_cast<std::uint64_t>(b));
      std::vector<std::pair<double, double>> pts;
      pts.reserve(samples.size());
      bool ok = true;
      for (const auto& [n, reps] : samples) {
        double acc = 0.0;
        for (std::size_t i = 0; i < reps.size(); ++i) {
          acc += reps[boot.next_u64() % reps.size()];
        }
        const double m = acc / static_cast<double>(reps.size());
        if (!(m > 0.0)) { ok = false; break; }
        pts.emplace_back(std::log(n), std::log(m));
      }
      slopes[static_cast<std::size_t>(b)] = ok ? least_squares(pts).slope : base.slope;
    }
    std::sort(slopes.begin(), slopes.end());
    const auto lo = static_cast<std::size_t>(0.05 * (bootstrap - 1));
    const auto hi = static_cast<std::size_t>(0.95 * (bootstrap - 1));
    out.ci_low = std::min(slopes[lo], out.slope);
    out.ci_high = std::max(slopes[hi], out.slope);
  } else {
    out.ci_low = out.ci_high = out.slope;
  }
  return out;
}

RateFit fit_rate_means(const std::vector<std::pair<double, double>>& n_and_mean) {
  std::vector<std::pair<double, std::vector<double>>> samples;
  samples.reserve(n_and_mean.size());
  for (const auto& [n, m] : n_and_mean) {
    samples.emplace_back(n, std::vector<double>{m});
  }
  return fit_rate(samples, 0, RngStream(0, 0));
}

double kolmogorov_q(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 0.2) return 1.0;  // Q(t) = 1 to double precision there
  double acc = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    acc += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * acc));
}

namespace {

double ks_p_value(double d, double effective_n) {
  const double rn = std::sqrt(effective_n);
  return kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

KsResult two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("two_sample_ks: samples must be nonempty");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = ks_p_value(d, na * nb / (na + nb));
  return r;
}

KsResult one_sample_ks(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw std::invalid_argument("one_sample_ks: sample must be nonempty");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = ks_p_value(d, n);
  return r;
}

ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& observed,
                               const std::function<double(std::int64_t)>& pmf,
                               double min_expected) {
  if (observed.empty()) throw std::invalid_argument("chi_square_gof: no observations");
  const std::int64_t k_max = *std::max_element(observed.begin(), observed.end());
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k_max) + 1, 0);
  for (std::int64_t v : observed) {
    if (v < 0) throw std::invalid_argument("chi_square_gof: negative count");
    ++counts[static_cast<std::size_t>(v)];
  }
  const double total = static_cast<double>(observed.size());

  // Pool consecutive values until each bin's expected mass reaches the
  // threshold; the final bin absorbs the whole upper tail (merged backward
  // if it ends up under the threshold).
  std::vector<double> bin_exp, bin_obs;
  double exp_acc = 0.0, obs_acc = 0.0, mass_acc = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double pk = pmf(static_cast<std::int64_t>(k));
    exp_acc += total * pk;
    mass_acc += pk;
    obs_acc += static_cast<double>(counts[k]);
    if (exp_acc >= min_expected && k + 1 < counts.size()) {
      bin_exp.push_back(exp_acc);
      bin_obs.push_back(obs_acc);
      exp_acc = obs_acc = 0.0;
    }
  }
  exp_acc += total * std::max(0.0, 1.0 - mass_acc);
  if (bin_exp.empty() || exp_acc >= min_expected) {
    bin_exp.push_back(exp_acc);
    bin_obs.push_back(obs_acc);
  } else {
    bin_exp.back() += exp_acc;
    bin_obs.back() += obs_acc;
  }

  ChiSquareResult r;
  for (std::size_t b = 0; b < bin_exp.size(); ++b) {
    const double diff = bin_obs[b] - bin_exp[b];
    r.statistic += diff * diff / bin_exp[b];
  }
  r.df = std::max(1, static_cast<int>(bin_exp.size()) - 1);
  r.p_value = boost::math::gamma_q(0.5 * r.df, 0.5 * r.statistic);
  return r;
}

ChiSquareResult chi_square_poisson(const std::vector<std::int64_t>& observed,
                                   double mean, double min_expected) {
  return chi_square_gof(
      observed,
      [mean](std::int64_t k) {
        double log_p = -mean + static_cast<double>(k) * std::log(mean);
        for (std::int64_t i = 2; i <= k; ++i) log_p -= std::log(static_cast<double>(i));
        return std::exp(log_p);
      },
      min_expected);
}

ChiSquareResult chi_square_binomial(const std::vector<std::int64_t>& observed,
                                    std::int64_t trials, double p,
                                    double min_expected) {
  return chi_square_gof(
      observed,
      [trials, p](std::int64_t k) {
        if (k > trials) return 0.0;
        double log_c = 0.0;
        for (std::int64_t i = 1; i <= k; ++i) {
          log_c += std::log(static_cast<double>(trials - k + i)) - std::log(static_cast<double>(i));
        }
        return std::exp(log_c + k * std::log(p) + (trials - k) * std::log1p(-p));
      },
      min_expected);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

double std_error_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::sqrt(variance_of(v) / static_cast<double>(v.size()));
}

}  // namespace pdlab
