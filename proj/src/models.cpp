#include "pdlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pdlab {
namespace {

std::string describe_state(const Vec& x) {
  std::ostringstream os;
  os << "[";
  for (std::ptrdiff_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << "]";
  return os.str();
}

double checked_rate(const Channel& ch, int k, double t, const Vec& x) {
  const double r = ch.rate(t, x);
  if (!std::isfinite(r) || r < 0.0) {
    throw ModelError("channel " + std::to_string(k) + ": rate " + std::to_string(r) +
                     " at t=" + std::to_string(t) + ", state=" + describe_state(x));
  }
  return r;
}

Vec default_initial(const Vec& x0, double n) {
  Vec v(x0.size());
  for (std::ptrdiff_t i = 0; i < x0.size(); ++i) {
    v[i] = std::round(n * x0[i]) / n;
  }
  return v;
}

std::function<double(double, double, const Vec&, const Vec&)> zero_residual() {
  return [](double, double, const Vec&, const Vec&) { return 0.0; };
}

}  // namespace

Mat ModelSpec::drift_matrix(double t, const Vec& fluid_value) const {
  Mat a = Mat::Zero(dim, dim);
  for (const Channel& ch : channels) {
    a += ch.jump * ch.rate_gradient(t, fluid_value).transpose();
  }
  return a;
}

Vec ScaledRun::u_at(double t) const {
  return std::sqrt(n) * (xbar.eval(t) - fluid.eval(t));
}

GridPath fluid_limit(const ModelSpec& model, double horizon, int cells) {
  const Partition grid = Partition::uniform(horizon, cells);
  const auto field = [&model](double t, const Vec& x) {
    Vec f = Vec::Zero(model.dim);
    for (const Channel& ch : model.channels) {
      f += ch.rate(t, x) * ch.jump;
    }
    return f;
  };
  Mat values(model.dim, cells + 1);
  Vec x = model.x0;
  values.col(0) = x;
  for (int i = 0; i < cells; ++i) {
    const double t = grid.time(static_cast<std::size_t>(i));
    const double h = grid.time(static_cast<std::size_t>(i) + 1) - t;
    const Vec k1 = field(t, x);
    const Vec k2 = field(t + 0.5 * h, x + 0.5 * h * k1);
    const Vec k3 = field(t + 0.5 * h, x + 0.5 * h * k2);
    const Vec k4 = field(t + h, x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite() || (model.in_domain && !model.in_domain(x))) {
      throw ModelError(model.id + ": fluid solver left the state domain at t=" +
                       std::to_string(t + h) + ", state=" + describe_state(x));
    }
    values.col(i + 1) = x;
  }
  return GridPath(grid, std::move(values));
}

ScaledRun simulate_scaled(const ModelSpec& model, double n, double horizon,
                          int fluid_cells, RngStream rng) {
  return simulate_scaled(model, n, horizon, fluid_limit(model, horizon, fluid_cells),
                         std::move(rng));
}

ScaledRun simulate_scaled(const ModelSpec& model, double n, double horizon,
                          const GridPath& fluid, RngStream rng) {
  if (!(n >= 1.0)) throw std::invalid_argument("simulate_scaled: need n >= 1");
  const auto m = model.channels.size();

  // Pre-generate each channel's dominating stream with its marks so the
  // draws do not depend on how events interleave across channels.
  struct Proposal {
    double t;
    double mark;  // in [0, rate_bound)
    int channel;
  };
  std::vector<Proposal> proposals;
  for (std::size_t k = 0; k < m; ++k) {
    const Channel& ch = model.channels[k];
    if (!(ch.rate_bound > 0.0)) continue;  // silent channel
    RngStream s = rng.child(k);
    const double total_rate = n * ch.rate_bound;
    double t = 0.0;
    for (;;) {
      const double next = t + s.exponential(total_rate);
      if (next >= horizon || next == t) break;
      t = next;
      proposals.push_back({t, s.uniform(0.0, ch.rate_bound), static_cast<int>(k)});
    }
  }
  std::stable_sort(proposals.begin(), proposals.end(),
                   [](const Proposal& a, const Proposal& b) { return a.t < b.t; });

  ScaledRun run;
  run.model = model;
  run.n = n;
  run.horizon = horizon;
  run.fluid = fluid;
  run.events.resize(m);

  RngStream init_rng = rng.child(1000);
  Vec x = model.initial_law ? model.initial_law(n, init_rng) : default_initial(model.x0, n);
  run.xbar = RcllPath(horizon, x);
  run.u = RcllPath(horizon, std::sqrt(n) * (x - fluid.eval(0.0)));

  const double sqrt_n = std::sqrt(n);
  for (const Proposal& p : proposals) {
    const Channel& ch = model.channels[static_cast<std::size_t>(p.channel)];
    const double r_run = checked_rate(ch, p.channel, p.t, x);
    if (r_run > ch.rate_bound * (1.0 + 1e-12)) {
      throw ModelError(model.id + ": channel " + std::to_string(p.channel) +
                       " rate " + std::to_string(r_run) +
                       " exceeds its declared bound " + std::to_string(ch.rate_bound) +
                       " at state " + describe_state(x));
    }
    const Vec fluid_at = run.fluid.eval(p.t);
    const double r_fluid = checked_rate(ch, p.channel, p.t, fluid_at);
    if (p.mark <= r_fluid) {
      run.events[static_cast<std::size_t>(p.channel)].accepted_fluid.push_back(p.t);
    }
    if (p.mark <= r_run) {
      run.events[static_cast<std::size_t>(p.channel)].accepted_run.push_back(p.t);
      x += ch.jump / n;
      if (model.in_domain && !model.in_domain(x)) {
        throw ModelError(model.id + ": state left the declared domain (channel " +
                         std::to_string(p.channel) + ", state " + describe_state(x) +
                         "); raise the model's state cap");
      }
      run.xbar.append_jump(p.t, x);
      run.jump_channel.push_back(p.channel);
      run.u.append_jump(p.t, sqrt_n * (x - fluid_at));
    }
  }
  return run;
}

double gamma_channel(const ModelSpec& model, const GridPath& fluid, int k, double t) {
  const Channel& ch = model.channels[static_cast<std::size_t>(k)];
  const auto& grid = fluid.grid();
  double acc = 0.0;
  double prev_t = 0.0;
  double prev_r = ch.rate(0.0, fluid.node(0));
  for (std::size_t i = 1; i <= grid.cells(); ++i) {
    const double ti = grid.time(i);
    if (ti >= t) break;
    const double ri = ch.rate(ti, fluid.node(i));
    acc += 0.5 * (prev_r + ri) * (ti - prev_t);
    prev_t = ti;
    prev_r = ri;
  }
  if (t > prev_t) {
    const double rt = ch.rate(t, fluid.eval(t));
    acc += 0.5 * (prev_r + rt) * (t - prev_t);
  }
  return acc;
}

double compensator_run(const ScaledRun& run, int k, double t) {
  const Channel& ch = run.model.channels[static_cast<std::size_t>(k)];
  // The state is constant between jumps; Simpson in s per interval is exact
  // for autonomous rates and 4th order otherwise.
  const auto integrate = [&ch](double a, double b, const Vec& x) {
    const double mid = 0.5 * (a + b);
    return (b - a) / 6.0 *
           (ch.rate(a, x) + 4.0 * ch.rate(mid, x) + ch.rate(b, x));
  };
  double acc = 0.0;
  double prev_t = 0.0;
  Vec x = run.xbar.initial();
  for (std::size_t j = 0; j < run.xbar.jump_count(); ++j) {
    const double tj = run.xbar.jump_time(j);
    if (tj >= t) break;
    acc += integrate(prev_t, tj, x);
    prev_t = tj;
    x = run.xbar.jump_value(j);
  }
  if (t > prev_t) acc += integrate(prev_t, t, x);
  return run.n * acc;
}

double compensator_fluid(const ScaledRun& run, int k, double t) {
  return run.n * gamma_channel(run.model, run.fluid, k, t);
}

namespace {

double count_until(const std::vector<double>& times, double t) {
  return static_cast<double>(
      std::upper_bound(times.begin(), times.end(), t) - times.begin());
}

}  // namespace

double martingale_run(const ScaledRun& run, int k, double t) {
  return count_until(run.events[static_cast<std::size_t>(k)].accepted_run, t) -
         compensator_run(run, k, t);
}

double martingale_fluid(const ScaledRun& run, int k, double t) {
  return count_until(run.events[static_cast<std::size_t>(k)].accepted_fluid, t) -
         compensator_fluid(run, k, t);
}

double coupling_gap(const ScaledRun& run) {
  const auto m = run.model.channels.size();
  // Breakpoints where any integrand piece changes: the path's jumps and the
  // fluid grid nodes; count changes happen at accepted event times.
  std::vector<double> checkpoints;
  checkpoints.reserve(run.xbar.jump_count() + run.fluid.grid().cells() + 1);
  for (double t : run.xbar.jump_times()) checkpoints.push_back(t);
  for (std::size_t i = 1; i <= run.fluid.grid().cells(); ++i) {
    checkpoints.push_back(run.fluid.grid().time(i));
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()),
                    checkpoints.end());

  double worst = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const Channel& ch = run.model.channels[k];
    const auto& ev = run.events[k];
    double integral = 0.0;  // n int (r(s, xbar) - r(s, fluid)) ds so far
    double prev_t = 0.0;
    double prev_g = ch.rate(0.0, run.xbar.initial()) - ch.rate(0.0, run.fluid.node(0));
    std::size_t ix = 0, il = 0;  // cursors into the accepted-event lists
    double sup = 0.0;
    for (double t : checkpoints) {
      const double g = ch.rate(t, run.xbar.eval(t)) - ch.rate(t, run.fluid.eval(t));
      integral += run.n * 0.5 * (prev_g + g) * (t - prev_t);
      prev_t = t;
      prev_g = g;
      while (ix < ev.accepted_run.size() && ev.accepted_run[ix] <= t) ++ix;
      while (il < ev.accepted_fluid.size() && ev.accepted_fluid[il] <= t) ++il;
      sup = std::max(sup, std::abs(static_cast<double>(ix) - static_cast<double>(il) - integral));
    }
    worst = std::max(worst, sup * ch.jump.norm());
  }
  return worst / std::sqrt(run.n);
}

GridPath sample_limit_driver(const ModelSpec& model, const GridPath& fluid, RngStream rng) {
  const auto& grid = fluid.grid();
  const auto nodes = static_cast<std::ptrdiff_t>(grid.cells() + 1);
  Mat values = Mat::Zero(model.dim, nodes);
  for (std::size_t k = 0; k < model.channels.size(); ++k) {
    const Channel& ch = model.channels[k];
    RngStream s = rng.child(k);
    // Brownian motion evaluated at gamma_k's grid values: increments have
    // variance delta-gamma, computed by the same trapezoid as gamma_channel.
    double b = 0.0;
    double prev_r = checked_rate(ch, static_cast<int>(k), 0.0, fluid.node(0));
    for (std::ptrdiff_t i = 1; i < nodes; ++i) {
      const double t = grid.time(static_cast<std::size_t>(i));
      const double r = checked_rate(ch, static_cast<int>(k), t, fluid.node(i));
      const double dgamma =
          0.5 * (prev_r + r) * (t - grid.time(static_cast<std::size_t>(i) - 1));
      b += std::sqrt(std::max(0.0, dgamma)) * s.normal();
      values.col(i) += b * ch.jump;
      prev_r = r;
    }
  }
  return GridPath(grid, std::move(values));
}

GridPath sample_limit(const ModelSpec& model, const GridPath& fluid, RngStream rng) {
  const GridPath driver = sample_limit_driver(model, fluid, std::move(rng));
  const auto drift = [&model, &fluid](double t) {
    return model.drift_matrix(t, fluid.eval(t));
  };
  return linear_ode_map(driver, drift);
}

GridPath sample_limit(const ModelSpec& model, double horizon, int cells, RngStream rng) {
  return sample_limit(model, fluid_limit(model, horizon, cells), std::move(rng));
}

ScaledRun mm1_reflected(const ScaledRun& run) {
  if (run.model.dim != 1) {
    throw std::invalid_argument("mm1_reflected: only scalar runs can be reflected");
  }
  ScaledRun out = run;
  out.xbar = skorokhod_reflect(run.xbar);
  out.fluid = skorokhod_reflect(run.fluid);
  const double sqrt_n = std::sqrt(run.n);
  RcllPath u(run.horizon, sqrt_n * (out.xbar.initial() - out.fluid.node(0)));
  for (std::size_t j = 0; j < out.xbar.jump_count(); ++j) {
    const double t = out.xbar.jump_time(j);
    u.append_jump(t, sqrt_n * (out.xbar.jump_value(j) - out.fluid.eval(t)));
  }
  out.u = std::move(u);
  return out;
}

ModelSpec telegraph_spec(double sigma0, double sigma1, double lambda0) {
  if (!(sigma0 > 0.0) || !(sigma1 > 0.0) || lambda0 < 0.0 || lambda0 > 1.0) {
    throw std::invalid_argument("telegraph_spec: need sigma0, sigma1 > 0 and lambda0 in [0,1]");
  }
  ModelSpec m;
  m.id = "telegraph";
  m.dim = 1;
  m.x0 = Vec::Constant(1, lambda0);
  m.in_domain = [](const Vec& x) { return x[0] >= -1e-9 && x[0] <= 1.0 + 1e-9; };
  Channel up;
  up.jump = Vec::Constant(1, 1.0);
  up.alpha = 0.0;
  up.rate = [sigma0](double, const Vec& x) { return sigma0 * (1.0 - x[0]); };
  up.rate_gradient = [sigma0](double, const Vec&) { return Vec::Constant(1, -sigma0); };
  up.rate_bound = sigma0;
  up.lipschitz = sigma0;
  up.residual = zero_residual();
  Channel down;
  down.jump = Vec::Constant(1, -1.0);
  down.alpha = 0.0;
  down.rate = [sigma1](double, const Vec& x) { return sigma1 * x[0]; };
  down.rate_gradient = [sigma1](double, const Vec&) { return Vec::Constant(1, sigma1); };
  down.rate_bound = sigma1;
  down.lipschitz = sigma1;
  down.residual = zero_residual();
  m.channels = {up, down};
  return m;
}

ModelSpec mm_infinity_spec(double lambda, double mu, double lambda0, double state_cap) {
  if (!(lambda > 0.0) || !(mu > 0.0) || lambda0 < 0.0 || !(state_cap > lambda0)) {
    throw std::invalid_argument("mm_infinity_spec: bad parameters");
  }
  ModelSpec m;
  m.id = "mm-infinity";
  m.dim = 1;
  m.x0 = Vec::Constant(1, lambda0);
  m.in_domain = [state_cap](const Vec& x) {
    return x[0] >= -1e-9 && x[0] <= state_cap;
  };
  Channel arrive;
  arrive.jump = Vec::Constant(1, 1.0);
  arrive.alpha = 1.0;
  arrive.rate = [lambda](double, const Vec&) { return lambda; };
  arrive.rate_gradient = [](double, const Vec&) { return Vec::Zero(1); };
  arrive.rate_bound = lambda;
  arrive.lipschitz = 0.0;
  arrive.residual = zero_residual();
  Channel depart;
  depart.jump = Vec::Constant(1, -1.0);
  depart.alpha = 1.0;
  depart.rate = [mu](double, const Vec& x) { return mu * x[0]; };
  depart.rate_gradient = [mu](double, const Vec&) { return Vec::Constant(1, mu); };
  depart.rate_bound = mu * state_cap;
  depart.lipschitz = mu;
  depart.residual = zero_residual();
  m.channels = {arrive, depart};
  return m;
}

ModelSpec mm1_spec(double lambda, double mu, double x0) {
  if (!(lambda > 0.0) || !(mu > 0.0) || x0 < 0.0) {
    throw std::invalid_argument("mm1_spec: need lambda, mu > 0 and x0 >= 0");
  }
  ModelSpec m;
  m.id = "mm1";
  m.dim = 1;
  m.x0 = Vec::Constant(1, x0);
  m.in_domain = [](const Vec& x) { return std::isfinite(x[0]); };
  m.reflect = true;
  Channel arrive;
  arrive.jump = Vec::Constant(1, 1.0);
  arrive.alpha = 1.0;
  arrive.rate = [lambda](double, const Vec&) { return lambda; };
  arrive.rate_gradient = [](double, const Vec&) { return Vec::Zero(1); };
  arrive.rate_bound = lambda;
  arrive.lipschitz = 0.0;
  arrive.residual = zero_residual();
  Channel serve;
  serve.jump = Vec::Constant(1, -1.0);
  serve.alpha = 1.0;
  serve.rate = [mu](double, const Vec&) { return mu; };
  serve.rate_gradient = [](double, const Vec&) { return Vec::Zero(1); };
  serve.rate_bound = mu;
  serve.lipschitz = 0.0;
  serve.residual = zero_residual();
  m.channels = {arrive, serve};
  return m;
}

ModelSpec sir_spec(double lambda, double gamma, double s0, double i0) {
  if (!(lambda > 0.0) || !(gamma > 0.0) || s0 < 0.0 || i0 < 0.0 || s0 + i0 > 1.0) {
    throw std::invalid_argument("sir_spec: need positive rates and s0 + i0 <= 1");
  }
  ModelSpec m;
  m.id = "sir";
  m.dim = 2;
  m.x0 = Vec(2);
  m.x0 << s0, i0;
  m.in_domain = [](const Vec& x) {
    return x[0] >= -1e-9 && x[1] >= -1e-9 && x[0] + x[1] <= 1.0 + 1e-9;
  };
  Channel infect;
  infect.jump = Vec(2);
  infect.jump << -1.0, 1.0;
  infect.alpha = 0.0;
  infect.rate = [lambda](double, const Vec& x) { return lambda * x[0] * x[1]; };
  infect.rate_gradient = [lambda](double, const Vec& x) {
    Vec g(2);
    g << lambda * x[1], lambda * x[0];
    return g;
  };
  infect.rate_bound = lambda * 0.25;  // s i <= 1/4 on the simplex
  infect.lipschitz = lambda;
  infect.residual = [lambda](double sqrt_n, double, const Vec& x, const Vec& l) {
    return lambda * sqrt_n * (x[0] - l[0]) * (x[1] - l[1]);
  };
  Channel recover;
  recover.jump = Vec(2);
  recover.jump << 0.0, -1.0;
  recover.alpha = 0.0;
  recover.rate = [gamma](double, const Vec& x) { return gamma * x[1]; };
  recover.rate_gradient = [gamma](double, const Vec&) {
    Vec g(2);
    g << 0.0, gamma;
    return g;
  };
  recover.rate_bound = gamma;
  recover.lipschitz = gamma;
  recover.residual = zero_residual();
  m.channels = {infect, recover};
  return m;
}

ModelSpec moran_spec(double nu1, double nu2, double lambda0) {
  if (!(nu1 >= 0.0) || !(nu2 >= 0.0) || lambda0 < 0.0 || lambda0 > 1.0) {
    throw std::invalid_argument("moran_spec: need nu1, nu2 >= 0 and lambda0 in [0,1]");
  }
  ModelSpec m;
  m.id = "moran";
  m.dim = 1;
  m.x0 = Vec::Constant(1, lambda0);
  m.in_domain = [](const Vec& x) { return x[0] >= -1e-9 && x[0] <= 1.0 + 1e-9; };

  const auto resampling_rate = [](double, const Vec& x) { return x[0] * (1.0 - x[0]); };
  const auto resampling_grad = [](double, const Vec& x) {
    return Vec::Constant(1, 1.0 - 2.0 * x[0]);
  };
  const auto resampling_residual = [](double sqrt_n, double, const Vec& x, const Vec& l) {
    return -sqrt_n * (x[0] - l[0]) * (x[0] - l[0]);
  };

  Channel birth;  // resampling replacing a B-individual by an A-child
  birth.jump = Vec::Constant(1, 1.0);
  birth.alpha = -1.0;
  birth.rate = resampling_rate;
  birth.rate_gradient = resampling_grad;
  birth.rate_bound = 0.25;
  birth.lipschitz = 3.0;
  birth.residual = resampling_residual;
  Channel death = birth;  // the mirror resampling event
  death.jump = Vec::Constant(1, -1.0);
  Channel mut_to_a;
  mut_to_a.jump = Vec::Constant(1, 1.0);
  mut_to_a.alpha = -1.0;
  mut_to_a.rate = [nu2](double, const Vec& x) { return nu2 * (1.0 - x[0]); };
  mut_to_a.rate_gradient = [nu2](double, const Vec&) { return Vec::Constant(1, -nu2); };
  mut_to_a.rate_bound = nu2;
  mut_to_a.lipschitz = nu2;
  mut_to_a.residual = zero_residual();
  Channel mut_to_b;
  mut_to_b.jump = Vec::Constant(1, -1.0);
  mut_to_b.alpha = -1.0;
  mut_to_b.rate = [nu1](double, const Vec& x) { return nu1 * x[0]; };
  mut_to_b.rate_gradient = [nu1](double, const Vec&) { return Vec::Constant(1, nu1); };
  mut_to_b.rate_bound = nu1;
  mut_to_b.lipschitz = nu1;
  mut_to_b.residual = zero_residual();
  m.channels = {birth, death, mut_to_a, mut_to_b};
  return m;
}

std::vector<ModelSpec> builtin_specs() {
  return {
      telegraph_spec(1.0, 2.0, 0.5),
      mm_infinity_spec(2.0, 1.0, 1.0, 6.0),
      mm1_spec(1.0, 1.0, 0.0),
      sir_spec(2.0, 1.0, 0.9, 0.1),
      moran_spec(0.5, 0.5, 0.3),
  };
}

}  // namespace pdlab
