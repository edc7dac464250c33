#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pdlab/rng.hpp"

namespace pdlab {

/// One realization of a marked Poisson measure on [0,T] x [0,z_max]:
/// a homogeneous Poisson process of intensity n_rate * z_max in time, each
/// event carrying an independent uniform mark in [0, z_max].
struct MarkedPoissonSample {
  double horizon = 0.0;
  double n_rate = 0.0;
  double z_max = 0.0;
  std::vector<std::pair<double, double>> events;  // (time, mark), time strictly increasing
};

MarkedPoissonSample sample_poisson_measure(RngStream& rng, double horizon,
                                           double n_rate, double z_max);

/// Principal branch of the Lambert W function: w*exp(w) = z, w >= -1,
/// for z >= -1/e. Halley iteration; residual |w e^w - z| <= 1e-12 max(1,|z|).
double lambert_w0(double z);

/// Bound function for the mean sup-gap between a point process and its
/// affine interpolation on a partition with `cells` subintervals, where `x`
/// is the per-cell jump-intensity budget:
///   log(n e^{x/n}) / log(n x^{-1} log(n e^{x/n})),  n = cells.
/// Throws std::domain_error when the outer log argument is <= 1 (the bound
/// is only meaningful in its asymptotic regime; no silent clamping).
double interp_error_bound(std::int64_t cells, double x);

/// Upper bound for E[max of n iid Poisson(nu)]:
///   log(n e^{-nu}) / W(log(n e^{-nu}) / (nu e)).
/// Requires n >= 2, nu > 0 and log(n) > nu.
double poisson_max_bound(std::int64_t n, double nu);

/// Algebraically equal form nu * e * exp(W(log(n e^{-nu})/(nu e))) of the
/// same bound; kept separate so the agreement of the two evaluation routes
/// can be checked numerically.
double poisson_max_bound_alt(std::int64_t n, double nu);

/// Weaker closed form log(n e^{-nu}) / log(log(n e^{-nu})/(nu e)), valid
/// whenever n >= exp(e^{nu+1} + nu) (uses W(z) >= log z - log log z).
double poisson_max_bound_loglog(std::int64_t n, double nu);

}  // namespace pdlab
