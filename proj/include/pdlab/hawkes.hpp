#pragma once

#include <cstdint>
#include <vector>

#include "pdlab/paths.hpp"
#include "pdlab/rng.hpp"
#include "pdlab/stats.hpp"

namespace pdlab {

/// Self-excitation kernel restricted to finite sums of exponentials
/// sum_j a_j exp(-b_j t), a_j >= 0, b_j > 0. This class keeps the per-event
/// simulation state O(#terms), gives closed-form primitives and tails, and
/// always satisfies the integrability conditions. Construction requires the
/// stability condition total_mass < 1.
class HawkesKernel {
 public:
  HawkesKernel(std::vector<double> amplitudes, std::vector<double> decays);

  double total_mass() const { return mass_; }            // integral of the kernel
  double eval(double t) const;                           // kernel value
  double primitive(double t) const;                      // int_0^t kernel
  double tail(double t) const;                           // int_t^inf kernel
  std::size_t terms() const { return a_.size(); }
  const std::vector<double>& amplitudes() const { return a_; }
  const std::vector<double>& decays() const { return b_; }

 private:
  std::vector<double> a_, b_;
  double mass_ = 0.0;
};

/// The resolvent (renewal) kernel sum_{k>=1} phi^{(k)}. For a single
/// exponential the closed form a e^{-(b-a)t} is used; for sums the truncated
/// convolution series is tabulated on a grid (truncation depth chosen so the
/// neglected tail mass is below 1e-8) and zero beyond the table span.
class ResolventKernel {
 public:
  explicit ResolventKernel(const HawkesKernel& kernel, int grid_cells = 1 << 12);

  double eval(double t) const;
  double mass() const { return mass_; }                  // kappa/(1-kappa)
  double integral_to(double t) const;                    // int_0^t psi
  double first_moment_to(double t) const;                // int_0^t s psi(s) ds
  double tail_integral(double t) const;                  // int_t^inf psi
  bool closed_form() const { return closed_form_; }
  int series_depth() const { return depth_; }
  double span() const { return span_; }

 private:
  bool closed_form_ = false;
  double amp_ = 0.0, rate_ = 0.0;  // closed form a e^{-(b-a)t}
  double mass_ = 0.0;
  double span_ = 0.0;
  int depth_ = 0;
  std::vector<double> times_, values_, cum_, cum_first_moment_;
};

/// k-th convolution power of the kernel, tabulated on a uniform time grid by
/// trapezoidal convolution (the series route; used to cross-check the
/// closed-form resolvent).
std::vector<double> convolution_power(const HawkesKernel& kernel, int k,
                                      const std::vector<double>& times);

/// Truncated series sum_{j=1..depth} phi^{(j)} on the grid.
std::vector<double> resolvent_series(const HawkesKernel& kernel,
                                     const std::vector<double>& times, int depth);

/// Exact Ogata-style thinning using the exponential-sum intensity recursion;
/// O(#terms) work per proposal. Returns the event times on [0, horizon].
std::vector<double> simulate_hawkes(double mu, const HawkesKernel& kernel,
                                    double horizon, RngStream rng);

/// Compensator mu*s_i + sum_{j<i} Phi(s_i - s_j) evaluated at each event
/// (the transformed inter-event gaps are iid Exp(1) under the true model).
std::vector<double> hawkes_compensator_at_events(double mu, const HawkesKernel& kernel,
                                                 const std::vector<double>& events);

struct HawkesRun {
  double mu = 1.0;
  HawkesKernel kernel;
  double n = 1.0;  // time-scaling factor; events live on [0, n]
  std::vector<double> events;
};

HawkesRun make_hawkes_run(double mu, const HawkesKernel& kernel, double n, RngStream rng);

/// The three scaled paths on [0,1]: counts/n, the compensated martingale
/// scaled by n^{-1/2} (compensator in closed form), and counts centered at
/// their expectation (computed from the resolvent mean formula), also scaled
/// by n^{-1/2}. Node values are exact; the grid interpolates in between.
struct HawkesScaledPaths {
  GridPath counting;
  GridPath compensated;
  GridPath centered;
};

HawkesScaledPaths scaled_paths(const HawkesRun& run, int cells,
                               const ResolventKernel& resolvent);

/// sup over the grid of |centered - compensated - conv|, where conv is the
/// trapezoidal quadrature of int_0^t n psi(n s) compensated(t - s) ds. The
/// identity is exact in law; the residual measures the quadrature.
double representation_residual(const HawkesScaledPaths& paths,
                               const ResolventKernel& resolvent, double n);

struct HawkesDiagnostics {
  double n = 0.0;
  double rho = 0.0;    // stationary event rate mu/(1-kappa)
  double kappa = 0.0;
  int runs = 0;
  std::vector<double> marker_times;
  std::vector<double> w1_at_markers;   // compensated path vs N(0, rho t)
  KsResult ks_compensated_at_one;
  double centered_var_at_one = 0.0;
  double centered_var_se = 0.0;
  double candidate_var_strong = 0.0;   // rho/(1-kappa)^2
  double candidate_var_weak = 0.0;     // rho/sqrt(1-kappa)
  bool strong_in_band = false;         // within 3 SE of the estimate
  bool weak_in_band = false;
  double tail_eps = 0.25;
  double tail_integral_value = 0.0;    // int_{n^eps}^inf psi
  double tail_reference = 0.0;         // n^{-1/2}
};

/// Distributional diagnostics over many runs at a common n (>= 500 required).
HawkesDiagnostics hawkes_limit_check(const std::vector<HawkesRun>& runs, int cells,
                                     const ResolventKernel& resolvent, RngStream rng);

}  // namespace pdlab
