#pragma once

#include <functional>

#include "pdlab/paths.hpp"
#include "pdlab/rng.hpp"

namespace pdlab {

/// Affine interpolation of f along the nodes of pi (pi must span [0, f.T]).
GridPath interpolate(const RcllPath& f, const Partition& pi);
GridPath interpolate(const GridPath& f, const Partition& pi);

double sup_norm(const RcllPath& f);
double sup_norm(const GridPath& f);

/// s -> sup_{u<=s} |f(u)| (Euclidean norm), as a scalar path.
/// Exact for RcllPath; exact at the nodes for GridPath.
RcllPath running_max(const RcllPath& f);
GridPath running_max(const GridPath& f);

/// s -> sup_{u<=s} max(-f(u), 0) for scalar paths (throws otherwise).
RcllPath local_time(const RcllPath& f);
GridPath local_time(const GridPath& f);

/// Skorokhod reflection f + local_time(f) for scalar paths; output is
/// nonnegative.
RcllPath skorokhod_reflect(const RcllPath& f);
GridPath skorokhod_reflect(const GridPath& f);

/// sup over |s-s'| <= eps of |f(s)-f(s')|, 0 < eps <= T.
/// Exact for the rcll structure; restricted to node pairs for GridPath
/// (equals the true modulus when eps is a multiple of a uniform step,
/// otherwise a lower bound within one step).
double modulus(const RcllPath& f, double eps);
double modulus(const GridPath& f, double eps);

/// f composed with the cumulative time change gamma(t) = int_0^t rate,
/// returned on a uniform grid over [0, horizon]. gamma is computed by
/// trapezoidal quadrature on that grid; rate must be nonnegative on it and
/// gamma(horizon) must not exceed f's horizon.
GridPath time_change(const GridPath& f, const std::function<double(double)>& rate,
                     double horizon, int cells);

/// The map f -> y solving y(t) = f(t) + int_0^t A y(s) ds (so y(0) = f(0)),
/// discretized by the implicit trapezoidal rule on f's grid.
GridPath linear_ode_map(const GridPath& f, const Mat& a);
/// Same with a time-dependent coefficient, y = f + int_0^t A(s) y(s) ds.
GridPath linear_ode_map(const GridPath& f, const std::function<Mat(double)>& a);

/// Exact sup-norm distances (sup over the union of breakpoints, where the
/// difference is piecewise affine or constant).
double sup_dist(const GridPath& a, const GridPath& b);
double sup_dist(const RcllPath& a, const RcllPath& b);
double sup_dist(const RcllPath& a, const GridPath& b);

/// Standard scalar Brownian motion sampled on a uniform grid.
GridPath sample_brownian(double horizon, int cells, RngStream& rng);

/// Monotone piecewise-linear inverse of a nondecreasing grid function
/// (used to undo time changes in tests): returns s with g(s) = v, where g is
/// the affine interpolant of `values` on `grid`.
double invert_monotone_grid(const std::vector<double>& grid_times,
                            const std::vector<double>& values, double v);

}  // namespace pdlab
