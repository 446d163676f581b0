#include "dropkit/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "dropkit/errors.hpp"

namespace dropkit {

// ---------------------------------------------------------------------------
// FourierShape

FourierShape::FourierShape(double base_radius, std::vector<double> cos_coeffs,
                           std::vector<double> sin_coeffs)
    : base_radius_(base_radius),
      cos_coeffs_(std::move(cos_coeffs)),
      sin_coeffs_(std::move(sin_coeffs)) {
  if (!std::isfinite(base_radius_) || !(base_radius_ > 0.0)) {
    throw ParameterError("FourierShape: base radius must be positive");
  }
  const std::size_t k = std::max(cos_coeffs_.size(), sin_coeffs_.size());
  cos_coeffs_.resize(k, 0.0);
  sin_coeffs_.resize(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (!std::isfinite(cos_coeffs_[i]) || !std::isfinite(sin_coeffs_[i])) {
      throw ParameterError("FourierShape: coefficients must be finite");
    }
  }
}

FourierShape FourierShape::disk(double base_radius) { return FourierShape(base_radius, {}, {}); }

double FourierShape::radius(double theta) const {
  double sum = 1.0;
  for (std::size_t k = 0; k < cos_coeffs_.size(); ++k) {
    const double kt = (k + 1.0) * theta;
    sum += cos_coeffs_[k] * std::cos(kt) + sin_coeffs_[k] * std::sin(kt);
  }
  return base_radius_ * sum;
}

double FourierShape::radius_derivative(double theta) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < cos_coeffs_.size(); ++k) {
    const double order = k + 1.0;
    const double kt = order * theta;
    sum += order * (-cos_coeffs_[k] * std::sin(kt) + sin_coeffs_[k] * std::cos(kt));
  }
  return base_radius_ * sum;
}

double FourierShape::area() const {
  double energy = 0.0;
  for (std::size_t k = 0; k < cos_coeffs_.size(); ++k) {
    energy += cos_coeffs_[k] * cos_coeffs_[k] + sin_coeffs_[k] * sin_coeffs_[k];
  }
  return std::numbers::pi * base_radius_ * base_radius_ * (1.0 + 0.5 * energy);
}

double FourierShape::min_radius() const {
  double min_r = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kPositivityCheckPoints; ++i) {
    min_r = std::min(min_r, radius(2.0 * std::numbers::pi * i / kPositivityCheckPoints));
  }
  return min_r;
}

FourierShape FourierShape::with_area(double target) const {
  if (!(target > 0.0)) {
    throw ParameterError("FourierShape::with_area: target area must be positive");
  }
  const double unit = area() / (base_radius_ * base_radius_);
  return FourierShape(std::sqrt(target / unit), cos_coeffs_, sin_coeffs_);
}

FourierShape FourierShape::dilated(double t) const {
  return FourierShape(base_radius_ * t, cos_coeffs_, sin_coeffs_);
}

// ---------------------------------------------------------------------------
// GridShape

GridShape::GridShape(int dimension, double cell_size, std::vector<double> origin)
    : dimension_(dimension), cell_size_(cell_size), origin_(std::move(origin)) {
  if (dimension != 2 && dimension != 3) {
    throw ParameterError("GridShape: dimension must be 2 or 3");
  }
  if (!std::isfinite(cell_size) || !(cell_size > 0.0)) {
    throw ParameterError("GridShape: cell size must be positive");
  }
  if (origin_.empty()) {
    origin_.assign(dimension, 0.0);
  }
  if (static_cast<int>(origin_.size()) != dimension) {
    throw ParameterError("GridShape: origin must have N components");
  }
}

GridShape GridShape::from_cells(int dimension, double cell_size,
                                const std::vector<std::array<std::int64_t, 3>>& cells,
                                std::vector<double> origin) {
  GridShape shape(dimension, cell_size, std::move(origin));
  std::vector<std::array<std::int64_t, 3>> sorted;
  sorted.reserve(cells.size());
  for (const auto& c : cells) {
    std::array<std::int64_t, 3> key{c[0], c[1], c[2]};
    if (dimension == 2) {
      key[2] = 0;
    }
    sorted.push_back(key);
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const int last = dimension - 1;
  for (const auto& c : sorted) {
    std::array<std::int64_t, 2> key{c[0], dimension == 3 ? c[1] : 0};
    shape.append_run(key, {c[last], c[last]});
  }
  return shape;
}

double GridShape::measure() const {
  return static_cast<double>(cell_count_) * std::pow(cell_size_, dimension_);
}

void GridShape::append_run(std::array<std::int64_t, 2> key, CellRun run) {
  if (run.hi < run.lo) {
    throw ParameterError("GridShape: empty run");
  }
  if (rows_.empty() || rows_.back().key != key) {
    if (!rows_.empty() && !(rows_.back().key < key)) {
      throw ParameterError("GridShape: rows must be appended in increasing order");
    }
    rows_.push_back(GridRow{key, {}});
  }
  auto& runs = rows_.back().runs;
  if (!runs.empty()) {
    if (run.lo <= runs.back().hi) {
      throw ParameterError("GridShape: runs must be increasing and disjoint");
    }
    if (run.lo == runs.back().hi + 1) {
      runs.back().hi = run.hi;
      cell_count_ += run.length();
      return;
    }
  }
  runs.push_back(run);
  cell_count_ += run.length();
}

void GridShape::for_each_cell(
    const std::function<void(const std::array<std::int64_t, 3>&)>& visit) const {
  const int last = dimension_ - 1;
  std::array<std::int64_t, 3> idx{0, 0, 0};
  for (const auto& row : rows_) {
    idx[0] = row.key[0];
    idx[1] = row.key[1];
    for (const auto& run : row.runs) {
      for (std::int64_t i = run.lo; i <= run.hi; ++i) {
        idx[last] = i;
        visit(idx);
      }
    }
  }
}

std::vector<std::array<std::int64_t, 3>> GridShape::cells() const {
  std::vector<std::array<std::int64_t, 3>> out;
  out.reserve(static_cast<std::size_t>(cell_count_));
  for_each_cell([&](const auto& c) { out.push_back(c); });
  return out;
}

GridShape GridShape::translated(const std::array<std::int64_t, 3>& offset) const {
  GridShape out(dimension_, cell_size_, origin_);
  const int last = dimension_ - 1;
  for (const auto& row : rows_) {
    std::array<std::int64_t, 2> key{row.key[0] + offset[0],
                                    dimension_ == 3 ? row.key[1] + offset[1] : 0};
    for (const auto& run : row.runs) {
      out.append_run(key, {run.lo + offset[last], run.hi + offset[last]});
    }
  }
  return out;
}

GridShape GridShape::reflected(int axis) const {
  if (axis < 0 || axis >= dimension_) {
    throw ParameterError("GridShape::reflected: axis out of range");
  }
  auto all = cells();
  for (auto& c : all) {
    c[axis] = -1 - c[axis];
  }
  return from_cells(dimension_, cell_size_, all, origin_);
}

bool GridShape::operator==(const GridShape& other) const {
  return dimension_ == other.dimension_ && cell_size_ == other.cell_size_ &&
         origin_ == other.origin_ && rows_ == other.rows_;
}

GridShape rasterize(const FourierShape& shape, double cell_size) {
  return rasterize(shape, cell_size, {0.0, 0.0});
}

std::array<double, 2> FourierShape::centroid(int nodes) const {
  double mx = 0.0;
  double my = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / nodes;
    const double r = radius(theta);
    const double r3 = r * r * r;
    mx += r3 * std::cos(theta);
    my += r3 * std::sin(theta);
  }
  const double scale = 2.0 * std::numbers::pi / nodes / (3.0 * area());
  return {mx * scale, my * scale};
}

GridShape rasterize(const FourierShape& shape, double cell_size, std::array<double, 2> shift) {
  if (!std::isfinite(cell_size) || !(cell_size > 0.0)) {
    throw ParameterError("rasterize: cell size must be positive");
  }
  if (!shape.is_valid()) {
    throw ParameterError("rasterize: r(theta) must be positive everywhere");
  }
  double amplitude = 1.0;
  for (int k = 0; k < shape.modes(); ++k) {
    amplitude += std::abs(shape.cos_coeffs()[k]) + std::abs(shape.sin_coeffs()[k]);
  }
  const double r_max = shape.base_radius() * amplitude;
  const auto& a = shape.cos_coeffs();
  const auto& b = shape.sin_coeffs();
  const double r0 = shape.base_radius();

  const std::int64_t lo_x = static_cast<std::int64_t>(std::floor((-r_max - shift[0]) / cell_size)) - 1;
  const std::int64_t hi_x = static_cast<std::int64_t>(std::ceil((r_max - shift[0]) / cell_size)) + 1;
  const std::int64_t lo_y = static_cast<std::int64_t>(std::floor((-r_max - shift[1]) / cell_size)) - 1;
  const std::int64_t hi_y = static_cast<std::int64_t>(std::ceil((r_max - shift[1]) / cell_size)) + 1;

  GridShape grid(2, cell_size, {shift[0], shift[1]});
  for (std::int64_t j = lo_y; j < hi_y; ++j) {
    const double y = (j + 0.5) * cell_size + shift[1];
    std::int64_t run_start = 0;
    bool in_run = false;
    for (std::int64_t i = lo_x; i <= hi_x; ++i) {
      bool inside = false;
      if (i < hi_x) {
        const double x = (i + 0.5) * cell_size + shift[0];
        const double rho2 = x * x + y * y;
        const double rho = std::sqrt(rho2);
        // cos k theta, sin k theta by angle addition from (cos theta, sin theta)
        const double c1 = x / rho;
        const double s1 = y / rho;
        double ck = 1.0;
        double sk = 0.0;
        double series = 1.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
          const double next_c = ck * c1 - sk * s1;
          const double next_s = sk * c1 + ck * s1;
          ck = next_c;
          sk = next_s;
          series += a[k] * ck + b[k] * sk;
        }
        const double r = r0 * series;
        inside = rho2 < r * r && r > 0.0;
      }
      if (inside && !in_run) {
        run_start = i;
        in_run = true;
      } else if (!inside && in_run) {
        grid.append_run({j, 0}, {run_start, i - 1});
        in_run = false;
      }
    }
  }
  return grid;
}

GridShape rasterize_region(int dimension, double cell_size, double half_extent,
                           const std::function<bool(const std::array<double, 3>&)>& inside) {
  if (!(half_extent > 0.0)) {
    throw ParameterError("rasterize_region: extent must be positive");
  }
  GridShape grid(dimension, cell_size);
  const auto n = static_cast<std::int64_t>(std::ceil(half_extent / cell_size));
  const int last = dimension - 1;
  const std::int64_t second_lo = dimension == 3 ? -n : 0;
  const std::int64_t second_hi = dimension == 3 ? n : 1;
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (std::int64_t i = -n; i < n; ++i) {
    x[0] = (i + 0.5) * cell_size;
    for (std::int64_t j = second_lo; j < second_hi; ++j) {
      if (dimension == 3) {
        x[1] = (j + 0.5) * cell_size;
      }
      bool in_run = false;
      std::int64_t run_start = 0;
      for (std::int64_t k = -n; k <= n; ++k) {
        bool in = false;
        if (k < n) {
          x[last] = (k + 0.5) * cell_size;
          in = inside(x);
        }
        if (in && !in_run) {
          in_run = true;
          run_start = k;
        } else if (!in && in_run) {
          grid.append_run({i, j}, {run_start, k - 1});
          in_run = false;
        }
      }
    }
  }
  return grid;
}

GridShape rasterize_ball(int dimension, double radius, double cell_size) {
  if (!(radius > 0.0)) {
    throw ParameterError("rasterize_ball: radius must be positive");
  }
  const double r2 = radius * radius;
  return rasterize_region(dimension, cell_size, radius + cell_size,
                          [&](const std::array<double, 3>& x) {
                            double d2 = 0.0;
                            for (int k = 0; k < dimension; ++k) {
                              d2 += x[k] * x[k];
                            }
                            return d2 < r2;
                          });
}

void write_grid_shape(std::ostream& out, const GridShape& shape) {
  std::ostringstream line;
  line << std::setprecision(17);
  line << shape.dimension() << ' ' << shape.cell_size();
  for (double o : shape.origin()) {
    line << ' ' << o;
  }
  out << line.str() << '\n';
  for (const auto& row : shape.rows()) {
    out << row.key[0];
    if (shape.dimension() == 3) {
      out << ' ' << row.key[1];
    }
    for (const auto& run : row.runs) {
      out << ' ' << run.lo << ':' << run.hi;
    }
    out << '\n';
  }
}

GridShape read_grid_shape(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw ParameterError("grid shape: missing header line");
  }
  std::istringstream hs(header);
  int dimension = 0;
  double h = 0.0;
  if (!(hs >> dimension >> h)) {
    throw ParameterError("grid shape: malformed header");
  }
  std::vector<double> origin(std::max(dimension, 0));
  for (double& o : origin) {
    if (!(hs >> o)) {
      throw ParameterError("grid shape: header needs N origin components");
    }
  }
  GridShape shape(dimension, h, origin);
  std::string text;
  int line_no = 1;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::istringstream ls(text);
    std::array<std::int64_t, 2> key{0, 0};
    if (!(ls >> key[0]) || (dimension == 3 && !(ls >> key[1]))) {
      throw ParameterError("grid shape: bad row key on line " + std::to_string(line_no));
    }
    std::string token;
    while (ls >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        throw ParameterError("grid shape: expected lo:hi on line " + std::to_string(line_no));
      }
      try {
        const CellRun run{std::stoll(token.substr(0, colon)), std::stoll(token.substr(colon + 1))};
        shape.append_run(key, run);
      } catch (const std::logic_error& e) {
        throw ParameterError("grid shape: bad range '" + token + "' on line " +
                             std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  return shape;
}

}  // namespace dropkit
