#include "pdlab/measures.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pdlab {
namespace {

constexpr double kInvE = 0.36787944117144232159552377016146;

void require_finite_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw std::invalid_argument(std::string(name) +
                                " must be finite and positive");
  }
}

}  // namespace

MarkedPoissonSample sample_poisson_measure(RngStream& rng, double horizon,
                                           double n_rate, double z_max) {
  require_finite_positive(horizon, "horizon");
  require_finite_positive(n_rate, "n_rate");
  require_finite_positive(z_max, "z_max");

  MarkedPoissonSample out;
  out.horizon = horizon;
  out.n_rate = n_rate;
  out.z_max = z_max;
  const double total_rate = n_rate * z_max;
  out.events.reserve(static_cast<std::size_t>(total_rate * horizon * 1.2) + 8);
  double t = 0.0;
  for (;;) {
    const double next = t + rng.exponential(total_rate);
    if (next >= horizon || next == t) break;  // == t cannot tick forward, stop
    t = next;
    out.events.emplace_back(t, rng.uniform(0.0, z_max));
  }
  return out;
}

double lambert_w0(double z) {
  if (std::isnan(z) || z < -kInvE) {
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (z == 0.0) return 0.0;

  double w;
  if (z < -0.25) {
    // Series around the branch point z = -1/e, w = -1.
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::exp(1.0) * z + 1.0)));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (z < 3.0) {
    w = z / (1.0 + z);  // crude but inside the Halley basin
  } else {
    const double l1 = std::log(z);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  const double tol = 1e-13 * std::max(1.0, std::abs(z));
  for (int it = 0; it < 60; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    if (std::abs(f) <= tol) break;
    const double fp = ew * (1.0 + w);
    // Halley step; the (w+2)/(2w+2) factor is the f''/(2f') term.
    const double denom = fp - f * (w + 2.0) / (2.0 * w + 2.0);
    double step = f / denom;
    double next = w - step;
    if (next < -1.0) next = -1.0 + 0.5 * (w + 1.0);  // stay on the principal branch
    w = next;
  }
  return w;
}

double interp_error_bound(std::int64_t cells, double x) {
  if (cells < 2) {
    throw std::invalid_argument("interp_error_bound: need at least 2 cells");
  }
  if (!std::isfinite(x) || !(x > 0.0)) {
    throw std::invalid_argument("interp_error_bound: x must be positive");
  }
  const double n = static_cast<double>(cells);
  const double inner = std::log(n) + x / n;  // log(n e^{x/n}), > 0 for n >= 2
  const double outer_arg = n / x * inner;
  if (!(outer_arg > 1.0)) {
    throw std::domain_error(
        "interp_error_bound: outer log argument <= 1 (outside the bound's "
        "regime)");
  }
  return inner / std::log(outer_arg);
}

namespace {

double max_bound_parts(std::int64_t n, double nu, double* z_out) {
  if (n < 2) {
    throw std::domain_error("poisson_max_bound: need n >= 2");
  }
  if (!std::isfinite(nu) || !(nu > 0.0)) {
    throw std::domain_error("poisson_max_bound: nu must be positive");
  }
  const double lg = std::log(static_cast<double>(n)) - nu;  // log(n e^{-nu})
  if (!(lg > 0.0)) {
    throw std::domain_error("poisson_max_bound: requires log(n) > nu");
  }
  *z_out = lg / (nu * std::exp(1.0));
  return lg;
}

}  // namespace

double poisson_max_bound(std::int64_t n, double nu) {
  double z;
  const double lg = max_bound_parts(n, nu, &z);
  return lg / lambert_w0(z);
}

double poisson_max_bound_alt(std::int64_t n, double nu) {
  double z;
  max_bound_parts(n, nu, &z);
  return nu * std::exp(1.0) * std::exp(lambert_w0(z));
}

double poisson_max_bound_loglog(std::int64_t n, double nu) {
  double z;
  const double lg = max_bound_parts(n, nu, &z);
  if (!(z > std::exp(1.0))) {
    throw std::domain_error(
        "poisson_max_bound_loglog: requires log(n e^{-nu})/(nu e) > e");
  }
  return lg / std::log(z);
}

}  // namespace pdlab
