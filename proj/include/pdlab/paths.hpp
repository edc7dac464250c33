#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

namespace pdlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Strictly increasing time mesh 0 = t_0 < t_1 < ... < t_l = T.
class Partition {
 public:
  explicit Partition(std::vector<double> times);
  static Partition uniform(double horizon, int cells);

  double horizon() const { return times_.back(); }
  std::size_t cells() const { return times_.size() - 1; }
  double time(std::size_t i) const { return times_[i]; }
  const std::vector<double>& times() const { return times_; }
  double mesh() const;
  bool is_uniform() const { return uniform_; }

  /// Index i with t in [t_i, t_{i+1}); clamps to the last cell at t = T.
  std::size_t locate(double t) const;

  bool operator==(const Partition& other) const { return times_ == other.times_; }

 private:
  std::vector<double> times_;
  bool uniform_ = false;
};

/// Piecewise-constant right-continuous path with left limits in R^d:
/// an initial value plus strictly increasing jump times in (0, T], each
/// carrying the post-jump value. Evaluation returns the value of the last
/// jump at or before t.
class RcllPath {
 public:
  RcllPath(double horizon, Vec x0);

  /// Appends a jump; `t` must exceed the previous jump time and lie in (0,T].
  void append_jump(double t, Vec value);

  int dim() const { return static_cast<int>(x0_.size()); }
  double horizon() const { return horizon_; }
  const Vec& initial() const { return x0_; }
  std::size_t jump_count() const { return jump_times_.size(); }
  double jump_time(std::size_t j) const { return jump_times_[j]; }
  const std::vector<double>& jump_times() const { return jump_times_; }
  /// Value right after jump j.
  Vec jump_value(std::size_t j) const { return jump_values_.col(j); }

  Vec eval(double t) const;
  /// Left limit at t (equals eval(t) except exactly at jump times).
  Vec eval_left(double t) const;
  /// Value after the last jump <= t, by index: -1 means x0.
  std::ptrdiff_t last_jump_index(double t) const;

 private:
  double horizon_;
  Vec x0_;
  std::vector<double> jump_times_;
  Mat jump_values_;      // d x capacity, first jump_count() columns valid
  std::size_t count_ = 0;
};

/// Continuous piecewise-affine path: values at the nodes of a partition,
/// affine in between. Uniform partitions are the common case but any
/// Partition is accepted, so interpolations onto irregular meshes live here
/// too.
class GridPath {
 public:
  GridPath(Partition grid, Mat values);  // values: d x (cells()+1), all finite
  static GridPath zero(const Partition& grid, int dim);

  int dim() const { return static_cast<int>(values_.rows()); }
  double horizon() const { return grid_.horizon(); }
  const Partition& grid() const { return grid_; }
  const Mat& values() const { return values_; }
  Mat& values() { return values_; }
  Vec node(std::size_t i) const { return values_.col(i); }

  Vec eval(double t) const;

  /// Coefficients of the hat-function representation,
  /// column i = (f(t_{i+1}) - f(t_i)) / sqrt(t_{i+1} - t_i).
  Mat hat_coefficients() const;

  GridPath& operator+=(const GridPath& other);
  GridPath& operator-=(const GridPath& other);
  GridPath& operator*=(double c);

 private:
  Partition grid_;
  Mat values_;
};

GridPath operator+(GridPath a, const GridPath& b);
GridPath operator-(GridPath a, const GridPath& b);
GridPath operator*(double c, GridPath a);

/// CSV with header "t,x1,...,xd"; values round-trip to ~1e-12 (not bit-exact).
void write_path_csv(std::ostream& os, const GridPath& path);
void write_path_csv(std::ostream& os, const RcllPath& path);
GridPath read_grid_path_csv(std::istream& is);

}  // namespace pdlab
