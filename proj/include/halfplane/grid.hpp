#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace halfplane {

enum class XBoundary {
  free_surface,  ///< traction data at x = 0, Dirichlet data at x = Lx
  periodic,      ///< torus; no physical boundary
};

/// Uniform grid, periodic in y. x_i = i h for i < nx, y_j = j h for j < ny.
/// Column ny-1 is the periodic image of column 0; with XBoundary::periodic
/// row nx-1 is likewise the image of row 0.
struct Grid {
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  XBoundary x_boundary = XBoundary::free_surface;

  double lx() const { return h * (nx - 1); }
  double ly() const { return h * (ny - 1); }
  double x(int i) const { return h * i; }
  double y(int j) const { return h * j; }
  /// Rows that carry unknowns: 0..nx-2.
  int rows() const { return nx - 1; }
  /// Distinct columns: 0..ny-2.
  int cols() const { return ny - 1; }
  long long unknown_points() const { return static_cast<long long>(rows()) * cols(); }
};

/// Grid with ly split into `intervals` cells and depth at least `lx`.
inline Grid make_strip_grid(double ly, int intervals, double lx) {
  if (intervals < 4) throw std::invalid_argument("need at least 4 grid intervals per period");
  if (!(ly > 0.0) || !(lx > 0.0)) throw std::invalid_argument("domain lengths must be positive");
  Grid g;
  g.h = ly / intervals;
  g.ny = intervals + 1;
  g.nx = static_cast<int>(std::ceil(lx / g.h - 1e-9)) + 1;
  g.x_boundary = XBoundary::free_surface;
  return g;
}

/// Doubly periodic grid; lx / h must be an integer to within 1e-9.
inline Grid make_torus_grid(double lx, double ly, int y_intervals) {
  Grid g = make_strip_grid(ly, y_intervals, lx);
  const double n = lx / g.h;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
    std::ostringstream os;
    os << "torus grid: lx/h = " << n << " is not an integer";
    throw std::invalid_argument(os.str());
  }
  g.nx = static_cast<int>(std::round(n)) + 1;
  g.x_boundary = XBoundary::periodic;
  return g;
}

/// Row-major storage of the distinct grid values with a two-point halo on
/// every side. Row index -1 holds the free-surface ghost point.
class GridFunction {
 public:
  static constexpr int halo = 2;

  GridFunction() = default;
  GridFunction(int rows, int cols)
      : rows_(rows), cols_(cols), stride_(cols + 2 * halo),
        data_(static_cast<std::size_t>(rows + 2 * halo) * (cols + 2 * halo), 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int stride() const { return stride_; }

  double& operator()(int i, int j) { return data_[index(i, j)]; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }

  double* row(int i) { return data_.data() + index(i, 0); }
  const double* row(int i) const { return data_.data() + index(i, 0); }

  /// Copies columns into the y-halo for rows [first, last).
  void wrap_columns(int first, int last) {
    for (int i = first; i < last; ++i) {
      double* r = row(i);
      for (int k = 1; k <= halo; ++k) {
        r[-k] = r[cols_ - k];
        r[cols_ - 1 + k] = r[k - 1];
      }
    }
  }

  /// Copies rows into the x-halo for a torus.
  void wrap_rows() {
    for (int k = 1; k <= halo; ++k) {
      std::copy_n(row(rows_ - k) - halo, stride_, row(-k) - halo);
      std::copy_n(row(k - 1) - halo, stride_, row(rows_ - 1 + k) - halo);
    }
  }

  void fill(double value) { std::fill(data_.begin(), data_.end(), value); }

  /// Largest magnitude over the interior rows and columns.
  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < rows_; ++i) {
      const double* r = row(i);
      for (int j = 0; j < cols_; ++j) m = std::max(m, std::abs(r[j]));
    }
    return m;
  }

  void swap(GridFunction& other) noexcept {
    std::swap(rows_, other.rows_);
    std::swap(cols_, other.cols_);
    std::swap(stride_, other.stride_);
    data_.swap(other.data_);
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i + halo) * stride_ + static_cast<std::size_t>(j + halo);
  }

  int rows_ = 0;
  int cols_ = 0;
  int stride_ = 0;
  std::vector<double> data_;
};

}  // namespace halfplane
