#include "pdlab/path_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdlab {
namespace {

void check_same_horizon(double a, double b, const char* what) {
  if (std::abs(a - b) > 1e-12 * std::max(1.0, std::max(a, b))) {
    throw std::invalid_argument(std::string(what) + ": horizon mismatch");
  }
}

void check_scalar(int dim, const char* what) {
  if (dim != 1) {
    throw std::invalid_argument(std::string(what) + ": only scalar paths are supported");
  }
}

double neg_part(double x) { return x < 0.0 ? -x : 0.0; }

}  // namespace

GridPath interpolate(const RcllPath& f, const Partition& pi) {
  check_same_horizon(f.horizon(), pi.horizon(), "interpolate");
  Mat values(f.dim(), static_cast<std::ptrdiff_t>(pi.cells() + 1));
  for (std::size_t i = 0; i <= pi.cells(); ++i) {
    values.col(static_cast<std::ptrdiff_t>(i)) = f.eval(pi.time(i));
  }
  return GridPath(pi, std::move(values));
}

GridPath interpolate(const GridPath& f, const Partition& pi) {
  check_same_horizon(f.horizon(), pi.horizon(), "interpolate");
  Mat values(f.dim(), static_cast<std::ptrdiff_t>(pi.cells() + 1));
  for (std::size_t i = 0; i <= pi.cells(); ++i) {
    values.col(static_cast<std::ptrdiff_t>(i)) = f.eval(pi.time(i));
  }
  return GridPath(pi, std::move(values));
}

double sup_norm(const RcllPath& f) {
  double m = f.initial().norm();
  for (std::size_t j = 0; j < f.jump_count(); ++j) {
    m = std::max(m, f.jump_value(j).norm());
  }
  return m;
}

double sup_norm(const GridPath& f) {
  double m = 0.0;
  for (std::ptrdiff_t i = 0; i < f.values().cols(); ++i) {
    m = std::max(m, f.values().col(i).norm());
  }
  return m;
}

RcllPath running_max(const RcllPath& f) {
  double record = f.initial().norm();
  RcllPath out(f.horizon(), Vec::Constant(1, record));
  for (std::size_t j = 0; j < f.jump_count(); ++j) {
    const double v = f.jump_value(j).norm();
    if (v > record) {
      record = v;
      out.append_jump(f.jump_time(j), Vec::Constant(1, record));
    }
  }
  return out;
}

GridPath running_max(const GridPath& f) {
  const auto nodes = f.values().cols();
  Mat values(1, nodes);
  double record = 0.0;
  for (std::ptrdiff_t i = 0; i < nodes; ++i) {
    record = std::max(record, f.values().col(i).norm());
    values(0, i) = record;
  }
  return GridPath(f.grid(), std::move(values));
}

RcllPath local_time(const RcllPath& f) {
  check_scalar(f.dim(), "local_time");
  double record = neg_part(f.initial()[0]);
  RcllPath out(f.horizon(), Vec::Constant(1, record));
  for (std::size_t j = 0; j < f.jump_count(); ++j) {
    const double v = neg_part(f.jump_value(j)[0]);
    if (v > record) {
      record = v;
      out.append_jump(f.jump_time(j), Vec::Constant(1, record));
    }
  }
  return out;
}

GridPath local_time(const GridPath& f) {
  check_scalar(f.dim(), "local_time");
  const auto nodes = f.values().cols();
  Mat values(1, nodes);
  double record = 0.0;
  for (std::ptrdiff_t i = 0; i < nodes; ++i) {
    record = std::max(record, neg_part(f.values()(0, i)));
    values(0, i) = record;
  }
  return GridPath(f.grid(), std::move(values));
}

RcllPath skorokhod_reflect(const RcllPath& f) {
  check_scalar(f.dim(), "skorokhod_reflect");
  double record = neg_part(f.initial()[0]);
  RcllPath out(f.horizon(), Vec::Constant(1, f.initial()[0] + record));
  for (std::size_t j = 0; j < f.jump_count(); ++j) {
    const double v = f.jump_value(j)[0];
    record = std::max(record, neg_part(v));
    out.append_jump(f.jump_time(j), Vec::Constant(1, v + record));
  }
  return out;
}

GridPath skorokhod_reflect(const GridPath& f) {
  check_scalar(f.dim(), "skorokhod_reflect");
  const auto nodes = f.values().cols();
  Mat values(1, nodes);
  double record = 0.0;
  for (std::ptrdiff_t i = 0; i < nodes; ++i) {
    record = std::max(record, neg_part(f.values()(0, i)));
    values(0, i) = f.values()(0, i) + record;
  }
  return GridPath(f.grid(), std::move(values));
}

double modulus(const RcllPath& f, double eps) {
  if (!(eps > 0.0) || eps > f.horizon()) {
    throw std::invalid_argument("modulus: need 0 < eps <= horizon");
  }
  // Constancy intervals [tau_i, tau_{i+1}) with values w_i; a value pair
  // (w_i, w_j), i < j, is attainable within eps iff tau_j - tau_{i+1} < eps.
  const std::size_t jumps = f.jump_count();
  double m = 0.0;
  for (std::size_t i = 0; i <= jumps; ++i) {
    const Vec wi = (i == 0) ? f.initial() : Vec(f.jump_value(i - 1));
    const double right_end = (i < jumps) ? f.jump_time(i) : f.horizon();
    for (std::size_t j = i + 1; j <= jumps; ++j) {
      if (!(f.jump_time(j - 1) - right_end < eps)) break;
      m = std::max(m, (wi - f.jump_value(j - 1)).norm());
    }
  }
  return m;
}

double modulus(const GridPath& f, double eps) {
  if (!(eps > 0.0) || eps > f.horizon()) {
    throw std::invalid_argument("modulus: need 0 < eps <= horizon");
  }
  const std::size_t nodes = f.grid().cells() + 1;
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    for (std::size_t j = i + 1; j < nodes; ++j) {
      if (f.grid().time(j) - f.grid().time(i) > eps) break;
      m = std::max(m, (f.node(i) - f.node(j)).norm());
    }
  }
  return m;
}

GridPath time_change(const GridPath& f, const std::function<double(double)>& rate,
                     double horizon, int cells) {
  const Partition out_grid = Partition::uniform(horizon, cells);
  std::vector<double> gamma(out_grid.cells() + 1, 0.0);
  double prev_rate = rate(0.0);
  if (!std::isfinite(prev_rate) || prev_rate < 0.0) {
    throw std::invalid_argument("time_change: rate must be nonnegative on the grid");
  }
  for (std::size_t i = 1; i <= out_grid.cells(); ++i) {
    const double r = rate(out_grid.time(i));
    if (!std::isfinite(r) || r < 0.0) {
      throw std::invalid_argument("time_change: rate must be nonnegative on the grid");
    }
    gamma[i] = gamma[i - 1] +
               0.5 * (prev_rate + r) * (out_grid.time(i) - out_grid.time(i - 1));
    prev_rate = r;
  }
  if (gamma.back() > f.horizon() * (1.0 + 1e-9) + 1e-12) {
    throw std::invalid_argument("time_change: gamma(horizon) exceeds f's horizon");
  }
  Mat values(f.dim(), static_cast<std::ptrdiff_t>(out_grid.cells() + 1));
  for (std::size_t i = 0; i <= out_grid.cells(); ++i) {
    values.col(static_cast<std::ptrdiff_t>(i)) = f.eval(std::min(gamma[i], f.horizon()));
  }
  return GridPath(out_grid, std::move(values));
}

GridPath linear_ode_map(const GridPath& f, const Mat& a) {
  if (a.rows() != f.dim() || a.cols() != f.dim()) {
    throw std::invalid_argument("linear_ode_map: matrix/path dimension mismatch");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument("linear_ode_map: matrix must be finite");
  }
  const std::size_t l = f.grid().cells();
  const int d = f.dim();
  Mat y(d, static_cast<std::ptrdiff_t>(l + 1));
  y.col(0) = f.node(0);
  Vec integral = Vec::Zero(d);  // int_0^{t_j} A y ds so far
  const bool uniform = f.grid().is_uniform();
  Eigen::PartialPivLU<Mat> lu;
  double lu_h = -1.0;
  for (std::size_t j = 0; j < l; ++j) {
    const double h = f.grid().time(j + 1) - f.grid().time(j);
    if (!uniform || h != lu_h) {
      lu = Eigen::PartialPivLU<Mat>(Mat::Identity(d, d) - 0.5 * h * a);
      lu_h = h;
    }
    const Vec half = integral + 0.5 * h * (a * y.col(static_cast<std::ptrdiff_t>(j)));
    y.col(static_cast<std::ptrdiff_t>(j) + 1) =
        lu.solve(f.node(j + 1) + half);
    integral = half + 0.5 * h * (a * y.col(static_cast<std::ptrdiff_t>(j) + 1));
  }
  return GridPath(f.grid(), std::move(y));
}

GridPath linear_ode_map(const GridPath& f, const std::function<Mat(double)>& a) {
  const std::size_t l = f.grid().cells();
  const int d = f.dim();
  Mat y(d, static_cast<std::ptrdiff_t>(l + 1));
  y.col(0) = f.node(0);
  Vec integral = Vec::Zero(d);
  Mat a_cur = a(f.grid().time(0));
  if (a_cur.rows() != d || a_cur.cols() != d) {
    throw std::invalid_argument("linear_ode_map: matrix/path dimension mismatch");
  }
  for (std::size_t j = 0; j < l; ++j) {
    const double h = f.grid().time(j + 1) - f.grid().time(j);
    const Mat a_next = a(f.grid().time(j + 1));
    const Vec half = integral + 0.5 * h * (a_cur * y.col(static_cast<std::ptrdiff_t>(j)));
    y.col(static_cast<std::ptrdiff_t>(j) + 1) =
        Eigen::PartialPivLU<Mat>(Mat::Identity(d, d) - 0.5 * h * a_next)
            .solve(f.node(j + 1) + half);
    integral = half + 0.5 * h * (a_next * y.col(static_cast<std::ptrdiff_t>(j) + 1));
    a_cur = a_next;
  }
  return GridPath(f.grid(), std::move(y));
}

double sup_dist(const GridPath& a, const GridPath& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("sup_dist: dimension mismatch");
  check_same_horizon(a.horizon(), b.horizon(), "sup_dist");
  if (a.grid() == b.grid()) {
    double m = 0.0;
    for (std::ptrdiff_t i = 0; i < a.values().cols(); ++i) {
      m = std::max(m, (a.values().col(i) - b.values().col(i)).norm());
    }
    return m;
  }
  double m = 0.0;
  std::size_t ia = 0, ib = 0;
  const auto& ta = a.grid().times();
  const auto& tb = b.grid().times();
  while (ia < ta.size() || ib < tb.size()) {
    double t;
    if (ib == tb.size() || (ia < ta.size() && ta[ia] <= tb[ib])) {
      t = ta[ia];
      while (ia < ta.size() && ta[ia] == t) ++ia;
      while (ib < tb.size() && tb[ib] == t) ++ib;
    } else {
      t = tb[ib];
      while (ib < tb.size() && tb[ib] == t) ++ib;
    }
    m = std::max(m, (a.eval(t) - b.eval(t)).norm());
  }
  return m;
}

double sup_dist(const RcllPath& a, const RcllPath& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("sup_dist: dimension mismatch");
  check_same_horizon(a.horizon(), b.horizon(), "sup_dist");
  double m = (a.initial() - b.initial()).norm();
  for (std::size_t j = 0; j < a.jump_count(); ++j) {
    const double t = a.jump_time(j);
    m = std::max(m, (a.jump_value(j) - b.eval(t)).norm());
  }
  for (std::size_t j = 0; j < b.jump_count(); ++j) {
    const double t = b.jump_time(j);
    m = std::max(m, (a.eval(t) - b.jump_value(j)).norm());
  }
  return m;
}

double sup_dist(const RcllPath& a, const GridPath& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("sup_dist: dimension mismatch");
  check_same_horizon(a.horizon(), b.horizon(), "sup_dist");
  // Between breakpoints (a's jumps union b's nodes) the difference is affine,
  // so the sup is attained at breakpoint values or left limits.
  double m = (a.initial() - b.node(0)).norm();
  for (std::size_t j = 0; j < a.jump_count(); ++j) {
    const double t = a.jump_time(j);
    const Vec bv = b.eval(t);
    m = std::max(m, (a.jump_value(j) - bv).norm());
    m = std::max(m, (a.eval_left(t) - bv).norm());
  }
  for (std::size_t i = 0; i <= b.grid().cells(); ++i) {
    const double t = b.grid().time(i);
    m = std::max(m, (a.eval(t) - b.node(i)).norm());
  }
  m = std::max(m, (a.eval(a.horizon()) - b.node(b.grid().cells())).norm());
  return m;
}

GridPath sample_brownian(double horizon, int cells, RngStream& rng) {
  const Partition grid = Partition::uniform(horizon, cells);
  Mat values(1, cells + 1);
  values(0, 0) = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double h = grid.time(static_cast<std::size_t>(i) + 1) - grid.time(static_cast<std::size_t>(i));
    values(0, i + 1) = values(0, i) + std::sqrt(h) * rng.normal();
  }
  return GridPath(grid, std::move(values));
}

double invert_monotone_grid(const std::vector<double>& grid_times,
                            const std::vector<double>& values, double v) {
  if (grid_times.size() != values.size() || grid_times.size() < 2) {
    throw std::invalid_argument("invert_monotone_grid: bad inputs");
  }
  if (v <= values.front()) return grid_times.front();
  if (v >= values.back()) return grid_times.back();
  const auto it = std::upper_bound(values.begin(), values.end(), v);
  const std::size_t i = static_cast<std::size_t>(it - values.begin()) - 1;
  const double dv = values[i + 1] - values[i];
  if (dv <= 0.0) return grid_times[i];
  const double theta = (v - values[i]) / dv;
  return grid_times[i] + theta * (grid_times[i + 1] - grid_times[i]);
}

}  // namespace pdlab
