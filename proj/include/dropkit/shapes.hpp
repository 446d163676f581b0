#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace dropkit {

/// Star-shaped planar domain r(theta) = r0 (1 + sum_k a_k cos k theta + b_k sin k theta).
class FourierShape {
 public:
  static constexpr int kPositivityCheckPoints = 4096;

  FourierShape() = default;
  FourierShape(double base_radius, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  /// Disk of radius r0.
  static FourierShape disk(double base_radius);

  double base_radius() const { return base_radius_; }
  const std::vector<double>& cos_coeffs() const { return cos_coeffs_; }
  const std::vector<double>& sin_coeffs() const { return sin_coeffs_; }
  int modes() const { return static_cast<int>(cos_coeffs_.size()); }

  double radius(double theta) const;
  double radius_derivative(double theta) const;

  /// Exact enclosed area pi r0^2 (1 + (1/2) sum (a_k^2 + b_k^2)).
  double area() const;

  /// Area centroid, by the trapezoid rule on (1/3A) int r^3 (cos, sin) d theta.
  std::array<double, 2> centroid(int nodes = 1024) const;

  /// Min of r(theta) over the positivity check grid.
  double min_radius() const;
  bool is_valid() const { return min_radius() > 0.0; }

  /// Same coefficients, r0 rescaled so that area() == target.
  FourierShape with_area(double target) const;
  /// Same coefficients, r0 multiplied by t.
  FourierShape dilated(double t) const;

 private:
  double base_radius_ = 1.0;
  std::vector<double> cos_coeffs_;
  std::vector<double> sin_coeffs_;
};

/// One maximal run [lo, hi] (inclusive) of occupied cells along the last axis.
struct CellRun {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t length() const { return hi - lo + 1; }
  bool operator==(const CellRun&) const = default;
};

/// Occupied runs of one grid row; `key` holds the first N-1 lattice indices
/// (key[1] is unused for N = 2).
struct GridRow {
  std::array<std::int64_t, 2> key{0, 0};
  std::vector<CellRun> runs;
  bool operator==(const GridRow&) const = default;
};

/// Union of axis-aligned cubes of side h on the lattice origin + h Z^N, N in {2,3}.
/// Cell with index i has center origin + (i + 1/2) h. Rows are sorted by key and
/// runs within a row are sorted, disjoint and non-adjacent.
class GridShape {
 public:
  GridShape(int dimension, double cell_size, std::vector<double> origin = {});

  /// Builds a shape from arbitrary (possibly duplicated) lattice cells.
  static GridShape from_cells(int dimension, double cell_size,
                              const std::vector<std::array<std::int64_t, 3>>& cells,
                              std::vector<double> origin = {});

  int dimension() const { return dimension_; }
  double cell_size() const { return cell_size_; }
  const std::vector<double>& origin() const { return origin_; }
  const std::vector<GridRow>& rows() const { return rows_; }

  std::int64_t cell_count() const { return cell_count_; }
  double measure() const;
  bool empty() const { return cell_count_ == 0; }

  /// Adds cells [lo, hi] to the row with the given key. Rows must be appended in
  /// increasing key order, runs in increasing order within a row.
  void append_run(std::array<std::int64_t, 2> key, CellRun run);

  /// Visits every cell index (N entries used) in lexicographic order.
  void for_each_cell(const std::function<void(const std::array<std::int64_t, 3>&)>& visit) const;
  std::vector<std::array<std::int64_t, 3>> cells() const;

  /// Translation by an integer lattice vector.
  GridShape translated(const std::array<std::int64_t, 3>& offset) const;
  /// Reflection i_axis -> -1 - i_axis (mirror through the lattice plane at origin).
  GridShape reflected(int axis) const;

  bool operator==(const GridShape& other) const;

 private:
  int dimension_;
  double cell_size_;
  std::vector<double> origin_;
  std::vector<GridRow> rows_;
  std::int64_t cell_count_ = 0;
};

/// Cells whose centers satisfy |x| < r(theta(x)); lattice origin at 0.
GridShape rasterize(const FourierShape& shape, double cell_size);
/// Same with the lattice origin placed at `shift`: cell i is occupied iff
/// shift + (i + 1/2) h lies inside the shape.
GridShape rasterize(const FourierShape& shape, double cell_size, std::array<double, 2> shift);

/// Cells whose centers lie strictly inside the ball of the given radius centered at 0.
GridShape rasterize_ball(int dimension, double radius, double cell_size);

/// Cells with centers inside the box [-half_extent, half_extent]^N satisfying `inside`.
GridShape rasterize_region(int dimension, double cell_size, double half_extent,
                           const std::function<bool(const std::array<double, 3>&)>& inside);

// Run-length text format:
//   line 1: "N h o_1 .. o_N"
//   then one line per row: the N-1 row indices followed by "lo:hi" ranges.
void write_grid_shape(std::ostream& out, const GridShape& shape);
GridShape read_grid_shape(std::istream& in);

}  // namespace dropkit
