#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdlab/path_ops.hpp"
#include "pdlab/paths.hpp"
#include "pdlab/rng.hpp"

namespace pdlab {

/// Raised when a simulation or solver leaves its declared state domain or a
/// rate function misbehaves; the message names the channel and state.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One jump channel of a Poisson-driven Markov model, specified in fluid
/// form: the pre-limit intensity at scale n is n * rate(t, x).
struct Channel {
  Vec jump;      // state displacement per event, before the 1/n scaling
  double alpha;  // intensity scaling exponent (metadata; simulation uses n * rate)
  std::function<double(double, const Vec&)> rate;            // r_k(t, x) >= 0
  std::function<Vec(double, const Vec&)> rate_gradient;      // d r_k / dx
  double rate_bound = 0.0;  // sup of rate over the declared state domain
  double lipschitz = 0.0;   // declared Lipschitz constant of rate in x
  /// Declared closed form of the second-order linearization residual
  /// sqrt(n)(r(t,x) - r(t,l)) - <grad r(t,l), sqrt(n)(x - l)>;
  /// identically zero for channels whose rate is affine in x.
  std::function<double(double sqrt_n, double t, const Vec& x, const Vec& l)> residual;
};

struct ModelSpec {
  std::string id;
  int dim = 1;
  std::vector<Channel> channels;
  Vec x0;  // fluid initial value
  std::function<bool(const Vec&)> in_domain;
  /// Initial state at scale n; the default round(n x0)/n is deterministic.
  std::function<Vec(double n, RngStream&)> initial_law;
  /// Apply the Skorokhod reflection after simulation (single-server queue).
  bool reflect = false;

  /// Drift matrix of the limit equation at time t given the fluid value:
  /// sum_k jump_k * grad,r_k(t, fluid)^T.
  Mat drift_matrix(double t, const Vec& fluid_value) const;
};

/// Events of one channel: times accepted under the running-state threshold
/// (these are the path's jumps) and under the coupled fluid threshold (same
/// dominating stream and marks).
struct ChannelEvents {
  std::vector<double> accepted_run;
  std::vector<double> accepted_fluid;
};

struct ScaledRun {
  ModelSpec model;
  double n = 1.0;
  double horizon = 1.0;
  RcllPath xbar;     // scaled state path
  GridPath fluid;    // fluid limit on the solver grid
  RcllPath u;        // sqrt(n)(xbar - fluid) sampled at xbar's jump times
  std::vector<int> jump_channel;  // channel of each xbar jump
  std::vector<ChannelEvents> events;

  /// Exact deviation sqrt(n)(xbar(t) - fluid(t)).
  Vec u_at(double t) const;
};

/// Exact-thinning simulation of the scaled model on [0, horizon]; each
/// channel draws a dominating Poisson stream of intensity n * rate_bound and
/// accepts an event iff its uniform mark, scaled to [0, rate_bound), falls
/// below the current rate. The same marks are reused against the fluid
/// threshold to produce the coupled event set.
ScaledRun simulate_scaled(const ModelSpec& model, double n, double horizon,
                          int fluid_cells, RngStream rng);
/// Same with a precomputed fluid path (saves the ODE solve per replication).
ScaledRun simulate_scaled(const ModelSpec& model, double n, double horizon,
                          const GridPath& fluid, RngStream rng);

/// Fluid ODE solved by the classical 4th-order one-step method on a uniform
/// grid of `cells` steps.
GridPath fluid_limit(const ModelSpec& model, double horizon, int cells);

/// One sample of the diffusion limit: independent Brownian motions run
/// through the per-channel time changes gamma_k(t) = int r_k(s, fluid) ds,
/// combined along the jump directions, then pushed through the linear drift
/// map with A(t) = sum_k jump_k grad r_k(t, fluid(t))^T.
GridPath sample_limit(const ModelSpec& model, double horizon, int cells, RngStream rng);
GridPath sample_limit(const ModelSpec& model, const GridPath& fluid, RngStream rng);

/// Sum of the per-channel Brownian pieces before the drift map (the
/// marginal covariance at t is sum_k gamma_k(t) jump_k jump_k^T).
GridPath sample_limit_driver(const ModelSpec& model, const GridPath& fluid, RngStream rng);

/// gamma_k(t) by trapezoidal quadrature on the fluid grid.
double gamma_channel(const ModelSpec& model, const GridPath& fluid, int k, double t);

/// n * int_0^t r_k(s, xbar(s)) ds, exact over the path's constancy intervals.
double compensator_run(const ScaledRun& run, int k, double t);
/// n * gamma_k(t) under the fluid threshold.
double compensator_fluid(const ScaledRun& run, int k, double t);

/// Martingale values (count minus compensator, scalar prefactor of jump_k).
double martingale_run(const ScaledRun& run, int k, double t);
double martingale_fluid(const ScaledRun& run, int k, double t);

/// sup-norm of the gap between the coupled compensated integrals, scaled by
/// n^{-1/2}; the maximum over channels of sup_t |M_run - M_fluid| |jump|/sqrt(n).
double coupling_gap(const ScaledRun& run);

/// Applies the Skorokhod reflection to a scalar run: path, fluid and the
/// deviation are all rebuilt from the reflected free process.
ScaledRun mm1_reflected(const ScaledRun& run);

/// The five built-in model descriptors with their default parameters.
ModelSpec telegraph_spec(double sigma0, double sigma1, double lambda0);
ModelSpec mm_infinity_spec(double lambda, double mu, double lambda0, double state_cap);
ModelSpec mm1_spec(double lambda, double mu, double x0);
ModelSpec sir_spec(double lambda, double gamma, double s0, double i0);
ModelSpec moran_spec(double nu1, double nu2, double lambda0);
std::vector<ModelSpec> builtin_specs();

}  // namespace pdlab
