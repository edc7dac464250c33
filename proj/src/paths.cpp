#include "pdlab/paths.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pdlab {
namespace {

void write_double(std::ostream& os, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, ptr - buf);
  (void)ec;
}

}  // namespace

Partition::Partition(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) {
    throw std::invalid_argument("Partition: need at least two node times");
  }
  if (times_.front() != 0.0) {
    throw std::invalid_argument("Partition: must start at 0");
  }
  for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
    if (!(times_[i] < times_[i + 1]) || !std::isfinite(times_[i + 1])) {
      throw std::invalid_argument("Partition: times must be finite and strictly increasing");
    }
  }
}

Partition Partition::uniform(double horizon, int cells) {
  if (!(horizon > 0.0) || cells < 1) {
    throw std::invalid_argument("Partition::uniform: need horizon > 0 and cells >= 1");
  }
  std::vector<double> t(static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i) {
    t[static_cast<std::size_t>(i)] = horizon * static_cast<double>(i) / cells;
  }
  t.back() = horizon;
  Partition p(std::move(t));
  p.uniform_ = true;
  return p;
}

double Partition::mesh() const {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
    m = std::max(m, times_[i + 1] - times_[i]);
  }
  return m;
}

std::size_t Partition::locate(double t) const {
  const std::size_t l = cells();
  if (t <= 0.0) return 0;
  if (t >= times_.back()) return l - 1;
  if (uniform_) {
    const double h = times_.back() / static_cast<double>(l);
    auto i = static_cast<std::size_t>(t / h);
    if (i >= l) i = l - 1;
    // FP guard: nudge so that times_[i] <= t < times_[i+1].
    while (i > 0 && t < times_[i]) --i;
    while (i + 1 < l && t >= times_[i + 1]) ++i;
    return i;
  }
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

RcllPath::RcllPath(double horizon, Vec x0) : horizon_(horizon), x0_(std::move(x0)) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw std::invalid_argument("RcllPath: horizon must be positive and finite");
  }
  if (x0_.size() == 0 || !x0_.allFinite()) {
    throw std::invalid_argument("RcllPath: initial value must be finite and nonempty");
  }
  jump_values_.resize(x0_.size(), 16);
}

void RcllPath::append_jump(double t, Vec value) {
  if (!(t > 0.0) || t > horizon_ || (!jump_times_.empty() && !(t > jump_times_.back()))) {
    throw std::invalid_argument("RcllPath: jump times must be strictly increasing in (0, T]");
  }
  if (value.size() != x0_.size() || !value.allFinite()) {
    throw std::invalid_argument("RcllPath: jump value dimension mismatch or non-finite");
  }
  if (static_cast<std::ptrdiff_t>(count_) == jump_values_.cols()) {
    Mat bigger(x0_.size(), jump_values_.cols() * 2);
    bigger.leftCols(jump_values_.cols()) = jump_values_;
    jump_values_.swap(bigger);
  }
  jump_values_.col(static_cast<std::ptrdiff_t>(count_)) = value;
  ++count_;
  jump_times_.push_back(t);
}

std::ptrdiff_t RcllPath::last_jump_index(double t) const {
  const auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
  return (it - jump_times_.begin()) - 1;
}

Vec RcllPath::eval(double t) const {
  const std::ptrdiff_t j = last_jump_index(t);
  return j < 0 ? x0_ : Vec(jump_values_.col(j));
}

Vec RcllPath::eval_left(double t) const {
  const auto it = std::lower_bound(jump_times_.begin(), jump_times_.end(), t);
  const std::ptrdiff_t j = (it - jump_times_.begin()) - 1;
  return j < 0 ? x0_ : Vec(jump_values_.col(j));
}

GridPath::GridPath(Partition grid, Mat values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.cols() != static_cast<std::ptrdiff_t>(grid_.cells() + 1)) {
    throw std::invalid_argument("GridPath: need one value column per node");
  }
  if (values_.rows() == 0 || !values_.allFinite()) {
    throw std::invalid_argument("GridPath: values must be finite and nonempty");
  }
}

GridPath GridPath::zero(const Partition& grid, int dim) {
  return GridPath(grid, Mat::Zero(dim, static_cast<std::ptrdiff_t>(grid.cells() + 1)));
}

Vec GridPath::eval(double t) const {
  if (t <= 0.0) return values_.col(0);
  if (t >= grid_.horizon()) return values_.col(values_.cols() - 1);
  const std::size_t i = grid_.locate(t);
  const double t0 = grid_.time(i);
  const double t1 = grid_.time(i + 1);
  const double theta = (t - t0) / (t1 - t0);
  return (1.0 - theta) * values_.col(static_cast<std::ptrdiff_t>(i)) +
         theta * values_.col(static_cast<std::ptrdiff_t>(i) + 1);
}

Mat GridPath::hat_coefficients() const {
  const auto l = static_cast<std::ptrdiff_t>(grid_.cells());
  Mat coef(values_.rows(), l);
  for (std::ptrdiff_t i = 0; i < l; ++i) {
    const double dt = grid_.time(static_cast<std::size_t>(i) + 1) - grid_.time(static_cast<std::size_t>(i));
    coef.col(i) = (values_.col(i + 1) - values_.col(i)) / std::sqrt(dt);
  }
  return coef;
}

GridPath& GridPath::operator+=(const GridPath& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("GridPath: grid mismatch");
  values_ += other.values_;
  return *this;
}

GridPath& GridPath::operator-=(const GridPath& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("GridPath: grid mismatch");
  values_ -= other.values_;
  return *this;
}

GridPath& GridPath::operator*=(double c) {
  values_ *= c;
  return *this;
}

GridPath operator+(GridPath a, const GridPath& b) { a += b; return a; }
GridPath operator-(GridPath a, const GridPath& b) { a -= b; return a; }
GridPath operator*(double c, GridPath a) { a *= c; return a; }

namespace {

void write_csv_header(std::ostream& os, int dim) {
  os << "t";
  for (int k = 1; k <= dim; ++k) os << ",x" << k;
  os << "\n";
}

void write_csv_row(std::ostream& os, double t, const Vec& v) {
  write_double(os, t);
  for (std::ptrdiff_t k = 0; k < v.size(); ++k) {
    os << ",";
    write_double(os, v[k]);
  }
  os << "\n";
}

}  // namespace

void write_path_csv(std::ostream& os, const GridPath& path) {
  write_csv_header(os, path.dim());
  for (std::size_t i = 0; i <= path.grid().cells(); ++i) {
    write_csv_row(os, path.grid().time(i), path.node(i));
  }
}

void write_path_csv(std::ostream& os, const RcllPath& path) {
  write_csv_header(os, path.dim());
  write_csv_row(os, 0.0, path.initial());
  for (std::size_t j = 0; j < path.jump_count(); ++j) {
    write_csv_row(os, path.jump_time(j), path.jump_value(j));
  }
}

GridPath read_grid_path_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw std::invalid_argument("read_grid_path_csv: empty input");
  }
  std::vector<double> times;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() < 2) {
      throw std::invalid_argument("read_grid_path_csv: malformed row");
    }
    times.push_back(row.front());
    rows.push_back(std::vector<double>(row.begin() + 1, row.end()));
  }
  if (times.size() < 2) {
    throw std::invalid_argument("read_grid_path_csv: need at least two rows");
  }
  Mat values(rows.front().size(), times.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw std::invalid_argument("read_grid_path_csv: ragged rows");
    }
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      values(static_cast<std::ptrdiff_t>(k), static_cast<std::ptrdiff_t>(i)) = rows[i][k];
    }
  }
  return GridPath(Partition(std::move(times)), std::move(values));
}

}  // namespace pdlab
