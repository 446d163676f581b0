#include "dropkit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "dropkit/cell_integral.hpp"
#include "dropkit/errors.hpp"
#include "dropkit/numerics.hpp"

namespace dropkit {

namespace {

void require_nonempty(const GridShape& shape, const char* what) {
  if (shape.empty()) {
    throw ParameterError(std::string(what) + ": shape is empty");
  }
}

struct Extent {
  std::array<std::int64_t, 3> lo{0, 0, 0};
  std::array<std::int64_t, 3> hi{0, 0, 0};
  std::int64_t size(int axis) const { return hi[axis] - lo[axis] + 1; }
};

Extent extent_of(const GridShape& shape) {
  Extent e;
  const int last = shape.dimension() - 1;
  bool first = true;
  for (const auto& row : shape.rows()) {
    std::array<std::int64_t, 3> lo{row.key[0], row.key[1], 0};
    std::array<std::int64_t, 3> hi = lo;
    lo[last] = row.runs.front().lo;
    hi[last] = row.runs.back().hi;
    for (int a = 0; a < shape.dimension(); ++a) {
      if (first || lo[a] < e.lo[a]) e.lo[a] = lo[a];
      if (first || hi[a] > e.hi[a]) e.hi[a] = hi[a];
    }
    first = false;
  }
  return e;
}

// Adds the run-pair offset profile count(d) = |A cap (B + d)| to a second-difference line.
inline void add_trapezoid(std::int64_t* d2, std::int64_t shift, const CellRun& a,
                          const CellRun& b) {
  const std::int64_t la = a.length();
  const std::int64_t lb = b.length();
  const std::int64_t start = a.lo - b.hi + shift;
  d2[start] += 1;
  d2[start + std::min(la, lb)] -= 1;
  d2[start + std::max(la, lb)] -= 1;
  d2[start + la + lb] += 1;
}

}  // namespace

DistanceHistogram distance_histogram(const GridShape& shape) {
  require_nonempty(shape, "distance_histogram");
  const int n = shape.dimension();
  const int last = n - 1;
  const Extent ext = extent_of(shape);
  const std::int64_t e_last = ext.size(last);
  const std::int64_t e_mid = n == 3 ? ext.size(1) : 1;
  const std::int64_t e_first = ext.size(0);
  const std::int64_t line_len = 2 * e_last + 1;
  const std::int64_t shift = e_last - 1;  // index of offset d is d + shift
  const std::int64_t mid_lines = 2 * e_mid - 1;
  std::int64_t k_max = 0;
  for (int a = 0; a < n; ++a) {
    k_max += (ext.size(a) - 1) * (ext.size(a) - 1);
  }

  // slabs: consecutive rows sharing key[0]
  const auto& rows = shape.rows();
  std::map<std::int64_t, std::pair<std::size_t, std::size_t>> slabs;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto [it, inserted] = slabs.try_emplace(rows[r].key[0], r, r + 1);
    if (!inserted) {
      it->second.second = r + 1;
    }
  }

  // Work unit: one first-axis offset di >= 0. Offsets are dealt round-robin to
  // a few chunks, each owning one histogram; integer sums make the result
  // independent of the chunking.
  const auto offsets = static_cast<std::size_t>(e_first);
  const std::size_t chunks = std::min<std::size_t>(offsets, 4 * numerics::thread_count());
  std::vector<std::vector<std::int64_t>> partial(chunks);
  numerics::parallel_blocks(chunks, [&](std::size_t chunk) {
    std::vector<std::int64_t> hist(static_cast<std::size_t>(k_max + 1), 0);
    std::vector<std::int64_t> lines(static_cast<std::size_t>(mid_lines * line_len), 0);
    for (std::size_t block = chunk; block < offsets; block += chunks) {
      const auto di = static_cast<std::int64_t>(block);
      std::fill(lines.begin(), lines.end(), 0);
      bool touched = false;
      for (const auto& [key1, range1] : slabs) {
        const auto partner = slabs.find(key1 - di);
        if (partner == slabs.end()) {
          continue;
        }
        const auto range2 = partner->second;
        for (std::size_t r1 = range1.first; r1 < range1.second; ++r1) {
          for (std::size_t r2 = range2.first; r2 < range2.second; ++r2) {
            const std::int64_t dj = rows[r1].key[1] - rows[r2].key[1];
            if (di == 0 && dj < 0) {
              continue;
            }
            std::int64_t* line = lines.data() + (dj + e_mid - 1) * line_len;
            for (const auto& a : rows[r1].runs) {
              for (const auto& b : rows[r2].runs) {
                add_trapezoid(line, shift, a, b);
              }
            }
            touched = true;
          }
        }
      }
      if (touched) {
        for (std::int64_t l = 0; l < mid_lines; ++l) {
          const std::int64_t dj = l - (e_mid - 1);
          if (di == 0 && dj < 0) {
            continue;
          }
          const std::int64_t multiplicity = (di == 0 && dj == 0) ? 1 : 2;
          std::int64_t* line = lines.data() + l * line_len;
          std::int64_t slope = 0;
          std::int64_t value = 0;
          for (std::int64_t idx = 0; idx < line_len; ++idx) {
            slope += line[idx];
            value += slope;
            if (value != 0) {
              const std::int64_t d = idx - shift;
              hist[static_cast<std::size_t>(di * di + dj * dj + d * d)] += multiplicity * value;
            }
          }
        }
      }
    }
    partial[chunk] = std::move(hist);
  });

  DistanceHistogram out;
  out.dimension = n;
  out.cell_size = shape.cell_size();
  out.cells = shape.cell_count();
  out.counts.assign(static_cast<std::size_t>(k_max + 1), 0);
  for (const auto& hist : partial) {
    for (std::size_t k = 0; k < hist.size(); ++k) {
      out.counts[k] += hist[k];
    }
  }
  while (out.counts.size() > 1 && out.counts.back() == 0) {
    out.counts.pop_back();
  }
  return out;
}

double perimeter_fourier(const FourierShape& shape, int nodes) {
  if (nodes < 64) {
    throw ParameterError("perimeter_fourier: need at least 64 nodes");
  }
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / nodes;
    const double r = shape.radius(theta);
    const double dr = shape.radius_derivative(theta);
    sum += std::sqrt(r * r + dr * dr);
  }
  return 2.0 * std::numbers::pi * sum / nodes;
}

namespace {

std::int64_t run_overlap(const std::vector<CellRun>& a, const std::vector<CellRun>& b) {
  std::int64_t total = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const std::int64_t lo = std::max(a[i].lo, b[j].lo);
    const std::int64_t hi = std::min(a[i].hi, b[j].hi);
    if (hi >= lo) {
      total += hi - lo + 1;
    }
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return total;
}

}  // namespace

double perimeter_grid(const GridShape& shape) {
  require_nonempty(shape, "perimeter_grid");
  const int n = shape.dimension();
  const auto& rows = shape.rows();
  std::map<std::array<std::int64_t, 2>, std::size_t> index;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    index[rows[r].key] = r;
  }
  std::int64_t faces = 0;
  for (const auto& row : rows) {
    std::int64_t cells = 0;
    for (const auto& run : row.runs) {
      cells += run.length();
    }
    faces += 2 * static_cast<std::int64_t>(row.runs.size());
    for (int axis = 0; axis < n - 1; ++axis) {
      for (int dir : {-1, 1}) {
        auto key = row.key;
        key[axis] += dir;
        const auto it = index.find(key);
        const std::int64_t hidden = it == index.end() ? 0 : run_overlap(row.runs, rows[it->second].runs);
        faces += cells - hidden;
      }
    }
  }
  return static_cast<double>(faces) * std::pow(shape.cell_size(), n - 1);
}

namespace {

// sum_{k>0} counts[k] k^{p/2}, in increasing k
double off_diagonal_sum(const DistanceHistogram& hist, double p) {
  double sum = 0.0;
  for (std::size_t k = 1; k < hist.counts.size(); ++k) {
    if (hist.counts[k] != 0) {
      sum += static_cast<double>(hist.counts[k]) * std::pow(static_cast<double>(k), 0.5 * p);
    }
  }
  return sum;
}

}  // namespace

double riesz_energy_grid(const DistanceHistogram& hist, double lambda) {
  if (!(lambda > 0.0)) {
    throw ParameterError("riesz_energy_grid: lambda must be positive");
  }
  if (!(lambda < hist.dimension)) {
    throw ParameterError("riesz_energy_grid: lambda >= N makes the self-term diverge");
  }
  const double off = off_diagonal_sum(hist, -lambda);
  const double self = static_cast<double>(hist.cells) * unit_cell_self_energy(hist.dimension, lambda);
  return std::pow(hist.cell_size, 2.0 * hist.dimension - lambda) * (0.5 * off + self);
}

double riesz_energy_grid(const GridShape& shape, double lambda) {
  if (!(lambda > 0.0 && lambda < shape.dimension())) {
    throw ParameterError("riesz_energy_grid: lambda must be in (0,N)");
  }
  return riesz_energy_grid(distance_histogram(shape), lambda);
}

double moment_integral(const DistanceHistogram& hist, double p) {
  if (!(p > -hist.dimension)) {
    throw ParameterError("moment_integral: exponent must be > -N");
  }
  if (p == 0.0) {
    const double measure = static_cast<double>(hist.cells) * std::pow(hist.cell_size, hist.dimension);
    return measure * measure;
  }
  const double off = off_diagonal_sum(hist, p);
  const double self = static_cast<double>(hist.cells) * unit_cell_pair_integral(hist.dimension, -p);
  return std::pow(hist.cell_size, 2.0 * hist.dimension + p) * (off + self);
}

double moment_integral(const GridShape& shape, double p) {
  if (!(p > -shape.dimension())) {
    throw ParameterError("moment_integral: exponent must be > -N");
  }
  return moment_integral(distance_histogram(shape), p);
}

Estimate riesz_energy_mc(const GridShape& shape, double lambda, std::uint64_t samples,
                         std::uint64_t seed) {
  require_nonempty(shape, "riesz_energy_mc");
  if (samples < 10000) {
    throw ParameterError("riesz_energy_mc: need at least 1e4 samples");
  }
  if (!(lambda > 0.0 && lambda < shape.dimension())) {
    throw ParameterError("riesz_energy_mc: lambda must be in (0,N)");
  }
  struct FlatRun {
    std::int64_t first_cell;
    std::array<std::int64_t, 2> key;
    std::int64_t lo;
  };
  std::vector<FlatRun> runs;
  std::int64_t total = 0;
  for (const auto& row : shape.rows()) {
    for (const auto& run : row.runs) {
      runs.push_back({total, row.key, run.lo});
      total += run.length();
    }
  }
  const int n = shape.dimension();
  const auto locate = [&](std::int64_t cell, std::array<std::int64_t, 3>& idx) {
    auto it = std::upper_bound(runs.begin(), runs.end(), cell,
                               [](std::int64_t c, const FlatRun& r) { return c < r.first_cell; });
    --it;
    idx[0] = it->key[0];
    idx[1] = it->key[1];
    idx[n - 1] = it->lo + (cell - it->first_cell);
  };

  constexpr std::uint64_t kBlock = std::uint64_t{1} << 20;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<double> sums(blocks, 0.0);
  std::vector<double> sums_sq(blocks, 0.0);
  numerics::parallel_blocks(blocks, [&](std::size_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::int64_t> pick(0, total - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::uint64_t begin = b * kBlock;
    const std::uint64_t end = std::min(samples, begin + kBlock);
    std::array<std::int64_t, 3> ci{0, 0, 0};
    std::array<std::int64_t, 3> cj{0, 0, 0};
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t s = begin; s < end; ++s) {
      locate(pick(rng), ci);
      locate(pick(rng), cj);
      double d2 = 0.0;
      for (int a = 0; a < n; ++a) {
        const double d = static_cast<double>(ci[a] - cj[a]) + unit(rng) - unit(rng);
        d2 += d * d;
      }
      const double v = std::pow(d2, -0.5 * lambda);
      sum += v;
      sum_sq += v * v;
    }
    sums[b] = sum;
    sums_sq[b] = sum_sq;
  });
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    sum += sums[b];
    sum_sq += sums_sq[b];
  }
  const double count = static_cast<double>(samples);
  const double mean = sum / count;
  const double var = std::max(0.0, (sum_sq / count - mean * mean) * count / (count - 1.0));
  // kernel evaluated in lattice units; |x-y|^{-lambda} = h^{-lambda} |u|^{-lambda}
  const double measure = shape.measure();
  const double scale = 0.5 * measure * measure * std::pow(shape.cell_size(), -lambda);
  return {scale * mean, scale * std::sqrt(var / count)};
}

namespace {

// int_a^b rho^{-e} d rho for a > 0
double power_integral(double a, double b, double e) {
  if (e == 1.0) {
    return std::log(b / a);
  }
  return (std::pow(b, 1.0 - e) - std::pow(a, 1.0 - e)) / (1.0 - e);
}

}  // namespace

LayerCakeResult layer_cake_check(const GridShape& shape, double lambda, int nodes) {
  if (!(lambda > 1.0 && lambda <= 2.0)) {
    throw ParameterError("layer_cake_check: lambda must be in (1,2]");
  }
  if (nodes < 10) {
    throw ParameterError("layer_cake_check: need at least 10 R-nodes");
  }
  require_nonempty(shape, "layer_cake_check");
  const DistanceHistogram hist = distance_histogram(shape);
  const int n = hist.dimension;
  const double p = 1.0 - lambda;
  const double direct = moment_integral(hist, p);

  // Work in lattice units: rho = R / h.
  const auto cells = static_cast<double>(hist.cells);
  std::vector<std::size_t> distinct;
  for (std::size_t k = 1; k < hist.counts.size(); ++k) {
    if (hist.counts[k] != 0) {
      distinct.push_back(k);
    }
  }
  const double rho_cell = std::sqrt(static_cast<double>(n));
  const double rho_max =
      std::max(rho_cell, distinct.empty() ? 0.0 : std::sqrt(static_cast<double>(distinct.back())));

  std::vector<double> knots;
  for (int j = 0; j <= nodes; ++j) {
    const double t = static_cast<double>(j) / nodes;
    knots.push_back(rho_max * t * t);
  }
  constexpr int kCellKnots = 32;
  for (int j = 1; j <= kCellKnots; ++j) {
    knots.push_back(rho_cell * j / kCellKnots);
  }
  for (int k = 1; k <= n; ++k) {
    knots.push_back(std::sqrt(static_cast<double>(k)));
  }
  // pair-distance jumps: all of them when few, otherwise the near field
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    if (static_cast<int>(distinct.size()) <= nodes || i == 0 || distinct[i] <= 9) {
      knots.push_back(std::sqrt(static_cast<double>(distinct[i])));
    }
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  // cumulative off-diagonal pair counts by squared distance
  std::vector<double> cumulative(hist.counts.size(), 0.0);
  double running = 0.0;
  for (std::size_t k = 1; k < hist.counts.size(); ++k) {
    running += static_cast<double>(hist.counts[k]);
    cumulative[k] = running;
  }
  const auto pairs_below = [&](double rho, bool inclusive) {
    // sum of counts[k] for 0 < k < rho^2 (or <= when inclusive)
    const double r2 = rho * rho;
    auto k = static_cast<std::int64_t>(std::floor(r2));
    if (!inclusive && static_cast<double>(k) == r2) {
      --k;
    }
    k = std::min<std::int64_t>(k, static_cast<std::int64_t>(cumulative.size()) - 1);
    return k <= 0 ? 0.0 : cumulative[static_cast<std::size_t>(k)];
  };

  const auto gl = numerics::gauss_legendre(10);
  const auto cell_integrand = [&](double rho) {
    return std::pow(rho, -lambda) * unit_cell_distance_cdf(n, rho);
  };

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i];
    const double b = knots[i + 1];
    if (!(b > a)) {
      continue;
    }
    // self-cell part
    if (a < rho_cell) {
      const double top = std::min(b, rho_cell);
      const double part = a == 0.0 ? numerics::tanh_sinh(cell_integrand, a, top, 61)
                                   : numerics::integrate(gl, a, top, cell_integrand);
      integral += cells * part;
      if (b > rho_cell) {
        integral += cells * power_integral(rho_cell, b, lambda);
      }
    } else {
      integral += cells * power_integral(a, b, lambda);
    }
    // off-diagonal part: constant between jumps, linear across unresolved jumps
    const double s_a = pairs_below(a, true);
    const double s_b = pairs_below(b, false);
    if (s_a == 0.0 && s_b == 0.0) {
      continue;
    }
    if (s_a == s_b) {
      integral += s_a * power_integral(a, b, lambda);
    } else {
      const double slope = (s_b - s_a) / (b - a);
      integral += (s_a - slope * a) * power_integral(a, b, lambda) +
                  slope * power_integral(a, b, lambda - 1.0);
    }
  }
  integral *= (lambda - 1.0);
  // tail: every pair is closer than rho_max
  integral += cells * cells * std::pow(rho_max, 1.0 - lambda);

  LayerCakeResult result;
  result.direct = direct;
  result.layered = std::pow(hist.cell_size, 2.0 * n + p) * integral;
  result.rel_err = std::abs(result.direct - result.layered) / std::abs(result.direct);
  return result;
}

EnergyBreakdown total_energy(const FourierShape& shape, const RieszParams& params,
                             const TotalEnergyOptions& options) {
  if (params.dimension() != 2) {
    throw ParameterError("total_energy: FourierShape energies require N = 2");
  }
  if (!shape.is_valid()) {
    throw ParameterError("total_energy: r(theta) must be positive everywhere");
  }
  const double h = options.cell_size > 0.0 ? options.cell_size
                                           : options.relative_cell_size * shape.base_radius();
  const double perimeter = perimeter_fourier(shape, options.perimeter_nodes);
  const GridShape grid = options.centroid_aligned
                             ? rasterize(shape, h, shape.centroid(options.perimeter_nodes))
                             : rasterize(shape, h);
  if (grid.empty()) {
    throw ParameterError("total_energy: cell size too coarse, rasterization is empty");
  }
  double riesz = riesz_energy_grid(grid, params.exponent());
  if (options.volume_normalized) {
    const double ratio = shape.area() / grid.measure();
    riesz *= std::pow(ratio, params.riesz_exp());
  }
  return EnergyBreakdown::from_parts(perimeter, riesz);
}

EnergyBreakdown total_energy(const FourierShape& shape, const RieszParams& params,
                             double cell_size, int perimeter_nodes) {
  if (!std::isfinite(cell_size) || !(cell_size > 0.0)) {
    throw ParameterError("total_energy: cell size must be positive");
  }
  TotalEnergyOptions options;
  options.cell_size = cell_size;
  options.perimeter_nodes = perimeter_nodes;
  return total_energy(shape, params, options);
}

}  // namespace dropkit
