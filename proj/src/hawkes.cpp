#include "pdlab/hawkes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdlab {

HawkesKernel::HawkesKernel(std::vector<double> amplitudes, std::vector<double> decays)
    : a_(std::move(amplitudes)), b_(std::move(decays)) {
  if (a_.empty() || a_.size() != b_.size()) {
    throw std::invalid_argument("HawkesKernel: need matching nonempty coefficient lists");
  }
  for (std::size_t j = 0; j < a_.size(); ++j) {
    if (!(a_[j] >= 0.0) || !(b_[j] > 0.0) || !std::isfinite(a_[j]) || !std::isfinite(b_[j])) {
      throw std::invalid_argument("HawkesKernel: need a_j >= 0 and b_j > 0");
    }
    mass_ += a_[j] / b_[j];
  }
  if (!(mass_ < 1.0)) {
    throw std::domain_error("HawkesKernel: unstable, kernel mass must be < 1");
  }
}

double HawkesKernel::eval(double t) const {
  if (t < 0.0) return 0.0;
  double v = 0.0;
  for (std::size_t j = 0; j < a_.size(); ++j) v += a_[j] * std::exp(-b_[j] * t);
  return v;
}

double HawkesKernel::primitive(double t) const {
  if (t <= 0.0) return 0.0;
  double v = 0.0;
  for (std::size_t j = 0; j < a_.size(); ++j) {
    v += a_[j] / b_[j] * (1.0 - std::exp(-b_[j] * t));
  }
  return v;
}

double HawkesKernel::tail(double t) const {
  if (t <= 0.0) return mass_;
  double v = 0.0;
  for (std::size_t j = 0; j < a_.size(); ++j) {
    v += a_[j] / b_[j] * std::exp(-b_[j] * t);
  }
  return v;
}

std::vector<double> convolution_power(const HawkesKernel& kernel, int k,
                                      const std::vector<double>& times) {
  if (k < 1 || times.size() < 2) {
    throw std::invalid_argument("convolution_power: need k >= 1 and a grid");
  }
  const double h = times[1] - times[0];
  std::vector<double> cur(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) cur[i] = kernel.eval(times[i]);
  std::vector<double> next(times.size());
  for (int p = 2; p <= k; ++p) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= i; ++j) {
        const double w = (j == 0 || j == i) ? 0.5 : 1.0;
        acc += w * kernel.eval(times[i] - times[j]) * cur[j];
      }
      next[i] = acc * h;
    }
    cur.swap(next);
  }
  return cur;
}

std::vector<double> resolvent_series(const HawkesKernel& kernel,
                                     const std::vector<double>& times, int depth) {
  if (depth < 1 || times.size() < 2) {
    throw std::invalid_argument("resolvent_series: need depth >= 1 and a grid");
  }
  const double h = times[1] - times[0];
  std::vector<double> cur(times.size()), acc(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    cur[i] = kernel.eval(times[i]);
    acc[i] = cur[i];
  }
  std::vector<double> next(times.size());
  for (int p = 2; p <= depth; ++p) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j <= i; ++j) {
        const double w = (j == 0 || j == i) ? 0.5 : 1.0;
        s += w * kernel.eval(times[i] - times[j]) * cur[j];
      }
      next[i] = s * h;
    }
    cur.swap(next);
    for (std::size_t i = 0; i < times.size(); ++i) acc[i] += cur[i];
  }
  return acc;
}

ResolventKernel::ResolventKernel(const HawkesKernel& kernel, int grid_cells) {
  const double kappa = kernel.total_mass();
  if (!(kappa < 1.0)) {
    throw std::domain_error("ResolventKernel: series diverges, kernel mass must be < 1");
  }
  mass_ = kappa / (1.0 - kappa);
  if (kernel.terms() == 1) {
    // Single exponential a e^{-bt}: the series sums to a e^{-(b-a)t}.
    // (phi^{(k)}(t) = a^k t^{k-1} e^{-bt}/(k-1)!; summing gives a e^{at} e^{-bt}.)
    closed_form_ = true;
    amp_ = kernel.amplitudes()[0];
    rate_ = kernel.decays()[0] - kernel.amplitudes()[0];
    span_ = 40.0 / rate_;
    return;
  }
  const double slowest = *std::min_element(kernel.decays().begin(), kernel.decays().end());
  const double decay_guess = (1.0 - kappa) * slowest;
  span_ = 40.0 / decay_guess;
  // kappa^{depth+1}/(1-kappa) <= 1e-8 bounds the neglected tail mass.
  depth_ = std::max(
      1, static_cast<int>(std::ceil(std::log(1e-8 * (1.0 - kappa)) / std::log(kappa))) - 1);
  times_.resize(static_cast<std::size_t>(grid_cells) + 1);
  const double h = span_ / grid_cells;
  for (std::size_t i = 0; i < times_.size(); ++i) times_[i] = h * static_cast<double>(i);
  values_ = resolvent_series(kernel, times_, depth_);
  cum_.assign(times_.size(), 0.0);
  cum_first_moment_.assign(times_.size(), 0.0);
  for (std::size_t i = 1; i < times_.size(); ++i) {
    cum_[i] = cum_[i - 1] + 0.5 * (values_[i - 1] + values_[i]) * h;
    cum_first_moment_[i] =
        cum_first_moment_[i - 1] +
        0.5 * (times_[i - 1] * values_[i - 1] + times_[i] * values_[i]) * h;
  }
}

double ResolventKernel::eval(double t) const {
  if (t < 0.0) return 0.0;
  if (closed_form_) return amp_ * std::exp(-rate_ * t);
  if (t >= span_) return 0.0;
  const double h = times_[1] - times_[0];
  const auto i = std::min(times_.size() - 2, static_cast<std::size_t>(t / h));
  const double theta = (t - times_[i]) / h;
  return (1.0 - theta) * values_[i] + theta * values_[i + 1];
}

double ResolventKernel::integral_to(double t) const {
  if (t <= 0.0) return 0.0;
  if (closed_form_) return mass_ * (1.0 - std::exp(-rate_ * t));
  if (t >= span_) return cum_.back();
  const double h = times_[1] - times_[0];
  const auto i = std::min(times_.size() - 2, static_cast<std::size_t>(t / h));
  const double theta = (t - times_[i]) / h;
  return (1.0 - theta) * cum_[i] + theta * cum_[i + 1];
}

double ResolventKernel::first_moment_to(double t) const {
  if (t <= 0.0) return 0.0;
  if (closed_form_) {
    const double ct = rate_ * t;
    return amp_ / (rate_ * rate_) * (1.0 - (1.0 + ct) * std::exp(-ct));
  }
  if (t >= span_) return cum_first_moment_.back();
  const double h = times_[1] - times_[0];
  const auto i = std::min(times_.size() - 2, static_cast<std::size_t>(t / h));
  const double theta = (t - times_[i]) / h;
  return (1.0 - theta) * cum_first_moment_[i] + theta * cum_first_moment_[i + 1];
}

double ResolventKernel::tail_integral(double t) const {
  if (closed_form_) return mass_ * std::exp(-rate_ * std::max(0.0, t));
  return std::max(0.0, cum_.back() - integral_to(t));
}

std::vector<double> simulate_hawkes(double mu, const HawkesKernel& kernel,
                                    double horizon, RngStream rng) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("simulate_hawkes: need mu > 0");
  }
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("simulate_hawkes: need horizon > 0");
  }
  const std::size_t terms = kernel.terms();
  std::vector<double> state(terms, 0.0);  // sum over past events of a_j e^{-b_j (t-s)}
  std::vector<double> events;
  events.reserve(static_cast<std::size_t>(mu / (1.0 - kernel.total_mass()) * horizon * 1.2) + 16);
  double t = 0.0;
  double intensity = mu;  // right-continuous intensity at the current time
  for (;;) {
    // The intensity only decays between events, so its current value
    // dominates until the next arrival.
    const double bound = intensity;
    const double gap = rng.exponential(bound);
    const double next = t + gap;
    if (next >= horizon) break;
    t = next;
    double decayed = mu;
    for (std::size_t j = 0; j < terms; ++j) {
      state[j] *= std::exp(-kernel.decays()[j] * gap);
      decayed += state[j];
    }
    intensity = decayed;
    if (rng.uniform01() * bound <= decayed) {
      events.push_back(t);
      for (std::size_t j = 0; j < terms; ++j) state[j] += kernel.amplitudes()[j];
      intensity = decayed + kernel.eval(0.0);
    }
  }
  return events;
}

std::vector<double> hawkes_compensator_at_events(double mu, const HawkesKernel& kernel,
                                                 const std::vector<double>& events) {
  const std::size_t terms = kernel.terms();
  // Phi-sum recursion: sum_i Phi(t - s_i) = sum_j (a_j/b_j)(count - R_j(t))
  // with R_j(t) = sum_i e^{-b_j (t - s_i)}.
  std::vector<double> r(terms, 0.0);
  std::vector<double> out;
  out.reserve(events.size());
  double prev = 0.0;
  double count = 0.0;
  for (double s : events) {
    double comp = mu * s;
    for (std::size_t j = 0; j < terms; ++j) {
      r[j] *= std::exp(-kernel.decays()[j] * (s - prev));
      comp += kernel.amplitudes()[j] / kernel.decays()[j] * (count - r[j]);
    }
    out.push_back(comp);
    for (std::size_t j = 0; j < terms; ++j) r[j] += 1.0;
    count += 1.0;
    prev = s;
  }
  return out;
}

HawkesRun make_hawkes_run(double mu, const HawkesKernel& kernel, double n, RngStream rng) {
  if (!(n >= 1.0)) throw std::invalid_argument("make_hawkes_run: need n >= 1");
  return HawkesRun{mu, kernel, n, simulate_hawkes(mu, kernel, n, std::move(rng))};
}

HawkesScaledPaths scaled_paths(const HawkesRun& run, int cells,
                               const ResolventKernel& resolvent) {
  const Partition grid = Partition::uniform(1.0, cells);
  const double n = run.n;
  const double sqrt_n = std::sqrt(n);
  const std::size_t terms = run.kernel.terms();
  const auto& a = run.kernel.amplitudes();
  const auto& b = run.kernel.decays();

  Mat counting(1, cells + 1), compensated(1, cells + 1), centered(1, cells + 1);
  std::vector<double> r(terms, 0.0);
  std::size_t next_event = 0;
  double prev_time = 0.0;
  counting(0, 0) = compensated(0, 0) = centered(0, 0) = 0.0;
  for (int i = 1; i <= cells; ++i) {
    const double tau = n * grid.time(static_cast<std::size_t>(i));
    while (next_event < run.events.size() && run.events[next_event] <= tau) {
      const double s = run.events[next_event];
      for (std::size_t j = 0; j < terms; ++j) {
        r[j] = r[j] * std::exp(-b[j] * (s - prev_time)) + 1.0;
      }
      prev_time = s;
      ++next_event;
    }
    const double count = static_cast<double>(next_event);
    double comp = run.mu * tau;
    for (std::size_t j = 0; j < terms; ++j) {
      const double rj = r[j] * std::exp(-b[j] * (tau - prev_time));
      comp += a[j] / b[j] * (count - rj);
    }
    // Mean from the cluster representation:
    // E N(tau) = mu tau + mu int_0^tau (tau - s) psi(s) ds.
    const double mean = run.mu * tau +
                        run.mu * (tau * resolvent.integral_to(tau) -
                                  resolvent.first_moment_to(tau));
    counting(0, i) = count / n;
    compensated(0, i) = (count - comp) / sqrt_n;
    centered(0, i) = (count - mean) / sqrt_n;
  }
  return HawkesScaledPaths{GridPath(grid, counting), GridPath(grid, compensated),
                           GridPath(grid, centered)};
}

double representation_residual(const HawkesScaledPaths& paths,
                               const ResolventKernel& resolvent, double n) {
  const auto& grid = paths.compensated.grid();
  const std::size_t nodes = grid.cells() + 1;
  const double h = grid.horizon() / static_cast<double>(grid.cells());
  // n psi(n s) vanishes beyond the resolvent span; precompute the prefix.
  std::vector<double> kernel_vals;
  kernel_vals.reserve(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double s = grid.time(j);
    if (n * s > resolvent.span() && j > 1) break;
    kernel_vals.push_back(n * resolvent.eval(n * s));
  }
  const auto w = [&paths](std::size_t i) { return paths.compensated.values()(0, static_cast<std::ptrdiff_t>(i)); };
  double worst = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    double conv = 0.0;
    const std::size_t jmax = std::min(i, kernel_vals.size() - 1);
    for (std::size_t j = 0; j <= jmax; ++j) {
      const double weight = (j == 0 || j == i) ? 0.5 : 1.0;
      conv += weight * kernel_vals[j] * w(i - j);
    }
    conv *= h;
    const double x = paths.centered.values()(0, static_cast<std::ptrdiff_t>(i));
    worst = std::max(worst, std::abs(x - w(i) - conv));
  }
  return worst;
}

HawkesDiagnostics hawkes_limit_check(const std::vector<HawkesRun>& runs, int cells,
                                     const ResolventKernel& resolvent, RngStream rng) {
  if (runs.size() < 500) {
    throw std::invalid_argument("hawkes_limit_check: need at least 500 runs");
  }
  HawkesDiagnostics d;
  d.n = runs.front().n;
  d.kappa = runs.front().kernel.total_mass();
  d.rho = runs.front().mu / (1.0 - d.kappa);
  d.runs = static_cast<int>(runs.size());
  d.marker_times = {0.25, 0.5, 0.75, 1.0};

  std::vector<std::vector<double>> comp_marginals(d.marker_times.size());
  std::vector<double> centered_at_one;
  centered_at_one.reserve(runs.size());
  for (const HawkesRun& run : runs) {
    const HawkesScaledPaths p = scaled_paths(run, cells, resolvent);
    for (std::size_t m = 0; m < d.marker_times.size(); ++m) {
      comp_marginals[m].push_back(p.compensated.eval(d.marker_times[m])[0]);
    }
    centered_at_one.push_back(p.centered.values()(0, p.centered.values().cols() - 1));
  }

  RngStream gauss = rng.child(1);
  for (std::size_t m = 0; m < d.marker_times.size(); ++m) {
    std::vector<double> ref(comp_marginals[m].size());
    const double sd = std::sqrt(d.rho * d.marker_times[m]);
    for (double& v : ref) v = sd * gauss.normal();
    d.w1_at_markers.push_back(marginal_w1(comp_marginals[m], ref));
  }
  {
    RngStream ks_rng = rng.child(2);
    std::vector<double> ref(comp_marginals.back().size());
    const double sd = std::sqrt(d.rho);
    for (double& v : ref) v = sd * ks_rng.normal();
    d.ks_compensated_at_one = two_sample_ks(comp_marginals.back(), ref);
  }

  d.centered_var_at_one = variance_of(centered_at_one);
  d.centered_var_se =
      d.centered_var_at_one * std::sqrt(2.0 / (static_cast<double>(runs.size()) - 1.0));
  d.candidate_var_strong = d.rho / ((1.0 - d.kappa) * (1.0 - d.kappa));
  d.candidate_var_weak = d.rho / std::sqrt(1.0 - d.kappa);
  const double lo = d.centered_var_at_one - 3.0 * d.centered_var_se;
  const double hi = d.centered_var_at_one + 3.0 * d.centered_var_se;
  d.strong_in_band = d.candidate_var_strong >= lo && d.candidate_var_strong <= hi;
  d.weak_in_band = d.candidate_var_weak >= lo && d.candidate_var_weak <= hi;

  d.tail_integral_value = resolvent.tail_integral(std::pow(d.n, d.tail_eps));
  d.tail_reference = 1.0 / std::sqrt(d.n);
  return d;
}

}  // namespace pdlab
