// Invariants checked over randomized inputs with fixed seeds.

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dropkit/analytic.hpp"
#include "dropkit/inequalities.hpp"
#include "dropkit/numerics.hpp"
#include "dropkit/optimizer.hpp"
#include "dropkit/quadrature.hpp"
#include "dropkit/splits.hpp"

using namespace dropkit;
constexpr double pi = std::numbers::pi;

namespace {

FourierShape random_shape(std::mt19937_64& rng, int modes) {
  std::uniform_real_distribution<double> u(-0.12, 0.12);
  std::vector<double> a(modes);
  std::vector<double> b(modes);
  for (int k = 0; k < modes; ++k) {
    a[k] = u(rng);
    b[k] = u(rng);
  }
  return FourierShape(1.0, a, b);
}

GridShape random_blob(std::mt19937_64& rng, int dim, int cells) {
  std::uniform_int_distribution<int> step(0, 2 * dim - 1);
  std::array<std::int64_t, 3> at{0, 0, 0};
  std::vector<std::array<std::int64_t, 3>> list{at};
  for (int i = 0; i < cells; ++i) {
    const int s = step(rng);
    at[s / 2] += (s % 2) ? 1 : -1;
    list.push_back(at);
  }
  return GridShape::from_cells(dim, 0.1, list);
}

std::vector<RieszParams> param_sample() {
  std::vector<RieszParams> out;
  for (int n = 2; n <= 6; ++n) {
    for (double frac : {0.1, 0.35, 0.6, 0.9}) {
      out.emplace_back(n, frac * n);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("energy_scale is multiplicative") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (const auto& p : param_sample()) {
    const auto unit = EnergyBreakdown::from_parts(u(rng), u(rng));
    const double m1 = u(rng);
    const double m2 = u(rng);
    const auto direct = energy_scale(unit, p, Mass(m2));
    // scale to m1, renormalize that breakdown to unit volume, then scale to m2
    const auto at_m1 = energy_scale(unit, p, Mass(m1));
    const auto renorm = EnergyBreakdown::from_parts(at_m1.perimeter / std::pow(m1, p.perimeter_exp()),
                                                    at_m1.riesz / std::pow(m1, p.riesz_exp()));
    const auto chained = energy_scale(renorm, p, Mass(m2));
    CHECK(chained.perimeter == doctest::Approx(direct.perimeter).epsilon(1e-14));
    CHECK(chained.riesz == doctest::Approx(direct.riesz).epsilon(1e-14));
    // composition of ratios
    const auto ratio = energy_scale(at_m1, p, Mass(m2 / m1));
    CHECK(ratio.total == doctest::Approx(direct.total).epsilon(1e-13));
  }
}

TEST_CASE("quadrature outputs are bit-identical under translation and reflection") {
  std::mt19937_64 rng(2);
  for (int dim : {2, 3}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto g = random_blob(rng, dim, 300);
      const auto t = g.translated({17, -5, 9});
      for (int axis = 0; axis < dim; ++axis) {
        const auto r = g.reflected(axis);
        for (const auto* other : {&t, &r}) {
          CHECK(riesz_energy_grid(*other, 0.7) == riesz_energy_grid(g, 0.7));
          CHECK(moment_integral(*other, -0.4) == moment_integral(g, -0.4));
          CHECK(moment_integral(*other, 0.6) == moment_integral(g, 0.6));
          CHECK(perimeter_grid(*other) == perimeter_grid(g));
          CHECK(distance_histogram(*other).counts == distance_histogram(g).counts);
        }
      }
      CHECK(layer_cake_check(t, 1.5).layered == layer_cake_check(g, 1.5).layered);
    }
  }
}

TEST_CASE("histogram matches brute force on random blobs") {
  std::mt19937_64 rng(3);
  for (int dim : {2, 3}) {
    const auto g = random_blob(rng, dim, 120);
    const auto hist = distance_histogram(g);
    const auto cells = g.cells();
    std::vector<std::int64_t> brute(hist.counts.size(), 0);
    for (const auto& a : cells) {
      for (const auto& b : cells) {
        std::int64_t k = 0;
        for (int i = 0; i < dim; ++i) {
          k += (a[i] - b[i]) * (a[i] - b[i]);
        }
        REQUIRE(static_cast<std::size_t>(k) < brute.size());
        brute[static_cast<std::size_t>(k)] += 1;
      }
    }
    CHECK(hist.counts == brute);
  }
}

TEST_CASE("parallel kernels do not depend on the thread count") {
  const auto g = rasterize_ball(3, 1.0, 0.1);
  numerics::set_thread_count(1);
  const auto h1 = distance_histogram(g);
  const auto mc1 = riesz_energy_mc(g, 1.0, 3'000'000, 9);
  const auto b1 = ball_riesz_self_energy(RieszParams(2, 1.0), SelfEnergyMethod::monte_carlo, 3'000'000, 4);
  numerics::set_thread_count(4);
  const auto h4 = distance_histogram(g);
  const auto mc4 = riesz_energy_mc(g, 1.0, 3'000'000, 9);
  const auto b4 = ball_riesz_self_energy(RieszParams(2, 1.0), SelfEnergyMethod::monte_carlo, 3'000'000, 4);
  numerics::set_thread_count(0);
  CHECK(h1.counts == h4.counts);
  CHECK(mc1.value == mc4.value);
  CHECK(mc1.stderr_ == mc4.stderr_);
  CHECK(b1.value == b4.value);
}

TEST_CASE("dilation: exact at proportional resolution, convergent at fixed resolution") {
  for (double lambda : {0.5, 1.0, 2.0}) {
    const auto small = rasterize_ball(3, 1.0, 0.1);
    const auto big = rasterize_ball(3, 2.0, 0.2);
    CHECK(big.cell_count() == small.cell_count());
    CHECK(riesz_energy_grid(big, lambda) / riesz_energy_grid(small, lambda) ==
          doctest::Approx(std::pow(2.0, 6.0 - lambda)).epsilon(1e-12));
    CHECK(perimeter_grid(big) / perimeter_grid(small) == doctest::Approx(4.0).epsilon(1e-12));
    const auto refined = rasterize_ball(3, 2.0, 0.05);
    const auto base = rasterize_ball(3, 1.0, 0.05);
    CHECK(riesz_energy_grid(refined, lambda) / riesz_energy_grid(base, lambda) ==
          doctest::Approx(std::pow(2.0, 6.0 - lambda)).epsilon(0.01));
  }
}

TEST_CASE("grid quadrature agrees with Monte Carlo on the same cell set") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 3; ++trial) {
    const auto shape = random_shape(rng, 3);
    const auto g = rasterize(shape, 0.02);
    for (double lambda : {0.5, 1.0, 1.5}) {
      const auto mc = riesz_energy_mc(g, lambda, 1'000'000, 100 + trial);
      CHECK(std::abs(riesz_energy_grid(g, lambda) - mc.value) < 3.0 * mc.stderr_);
    }
  }
}

TEST_CASE("refinement: error against the exact disk energy shrinks over three levels") {
  const RieszParams p(2, 1.0);
  const double exact = make_ball_constants(p).riesz_self;
  double last = 1.0;
  for (double h : {0.04, 0.02, 0.01}) {
    // volume-normalized disk raster, averaged over sub-cell shifts
    double err = 0.0;
    const int shifts = 4;
    for (int i = 0; i < shifts; ++i) {
      const double f = (i + 0.5) / shifts;
      const auto g = rasterize(FourierShape::disk(1.0), h, {f * h, 0.61 * f * h});
      const double d = riesz_energy_grid(g, 1.0) * std::pow(pi / g.measure(), 1.5);
      err += std::abs(d - exact) / exact;
    }
    err /= shifts;
    // staircase boundary: first order in h
    CHECK(err < last);
    CHECK(err < 0.25 * h);
    last = err;
  }
}

TEST_CASE("rearrangement direction: the ball minimizes the positive-power moment") {
  std::mt19937_64 rng(5);
  const double h = 0.04;
  for (double p : {0.2, 0.5, 0.9}) {
    const auto disk = rasterize(FourierShape::disk(1.0), h);
    for (int trial = 0; trial < 3; ++trial) {
      const auto g = rasterize(random_shape(rng, 4), h);
      // rescale the disk moment to the measure of g: moment ~ m^{(2N+p)/N}
      const double disk_at_m =
          moment_integral(disk, p) * std::pow(g.measure() / disk.measure(), (4.0 + p) / 2.0);
      CHECK(moment_integral(g, p) >= disk_at_m * (1.0 - 1e-3));
    }
    const auto square = rasterize_region(2, h, 1.0, [](const std::array<double, 3>& x) {
      return std::abs(x[0]) < 0.886 && std::abs(x[1]) < 0.886;
    });
    const double disk_at_sq =
        moment_integral(disk, p) * std::pow(square.measure() / disk.measure(), (4.0 + p) / 2.0);
    CHECK(moment_integral(square, p) > disk_at_sq);
  }
}

TEST_CASE("ball energy: increasing, convex past its inflection, two halves flip at m*") {
  for (const auto& p : param_sample()) {
    const auto c = make_ball_constants(p);
    const double ms = critical_mass(p, c);
    const double a = p.perimeter_exp();
    const double b = p.riesz_exp();
    // E = A m^a + B m^b with a < 1 < b: concave below m_i, convex above
    const double unit = std::pow(c.volume, -a) * c.surface;
    const double riesz = std::pow(c.volume, -b) * c.riesz_self;
    const double inflection = std::pow(unit * a * (1 - a) / (riesz * b * (b - 1)), 1.0 / (b - a));
    double prev = 0.0;
    for (double m = 0.05 * ms; m < 3.0 * ms; m += 0.05 * ms) {
      const double e = ball_energy(p, m, c).total;
      CHECK(e > prev);
      prev = e;
      const double dm = 0.01 * m;
      const double second = ball_energy(p, m + dm, c).total - 2 * e + ball_energy(p, m - dm, c).total;
      if (m > 1.05 * inflection) {
        CHECK(second > 0.0);
      } else if (m < 0.95 * inflection) {
        CHECK(second < 0.0);
      }
      const double halves = 2.0 * ball_energy(p, 0.5 * m, c).total;
      if (m < ms * (1 - 1e-9)) {
        CHECK(e < halves);
      } else if (m > ms * (1 + 1e-9)) {
        CHECK(e > halves);
      }
    }
  }
}

TEST_CASE("critical mass monotonicity in the ball constants") {
  for (const auto& p : param_sample()) {
    const auto c = make_ball_constants(p);
    const double ms = critical_mass(p, c);
    CHECK(critical_mass(p, c.with_riesz_scaled(1.01)) < ms);
    CHECK(critical_mass(p, c.with_riesz_scaled(0.99)) > ms);
    auto wider = c;
    wider.surface *= 1.01;
    CHECK(critical_mass(p, wider) > ms);
  }
}

TEST_CASE("s^b + (1-s)^b < 1 and f(s) >= f(1/2) with equality only at 1/2") {
  const auto grid = open_unit_grid(2001);
  for (const auto& p : param_sample()) {
    const double b = p.riesz_exp();
    const double fh = f_of_s(p, 0.5);
    for (double s : grid) {
      CHECK(std::pow(s, b) + std::pow(1 - s, b) < 1.0);
      if (s == 0.5) {
        continue;
      }
      CHECK(f_of_s(p, s) > fh);
    }
  }
}

TEST_CASE("the sandwich between power sums and binary entropy") {
  const auto s_grid = open_unit_grid(20001);
  auto entropy = [](double s) {
    return -(s * std::log(s) + (1 - s) * std::log(1 - s)) / std::log(2.0);
  };
  auto power = [](double e, double s) {
    return (std::pow(s, e) + std::pow(1 - s, e) - 1.0) / (std::pow(2.0, 1 - e) - 1.0);
  };
  for (double a : {0.05, 0.3, 0.6, 0.95}) {
    for (double b : {1.05, 1.4, 1.7, 1.95}) {
      for (double s : s_grid) {
        const double mid = entropy(s);
        CHECK(power(a, s) - mid >= -kScalarTol);
        CHECK(mid - power(b, s) >= -kScalarTol);
      }
    }
  }
}

TEST_CASE("h is increasing on (0,1/2] with one sign change for every alpha != 1") {
  for (int i = 1; i < 40; ++i) {
    const double alpha = i / 20.0;
    if (alpha == 1.0) {
      continue;
    }
    const auto r = lemma_g_verify(alpha, 10000, false);
    CHECK(r.h_increasing);
    CHECK(r.h_sign_changes == 1);
    CHECK(r.passed);
  }
}

TEST_CASE("binding deficit: positive below m*, minimized at s=1/2 near m*") {
  for (const auto& p : param_sample()) {
    const auto c = make_ball_constants(p);
    const double ms = critical_mass(p, c);
    for (double f : {0.1, 0.5, 0.9, 0.99}) {
      CHECK(binding_scan(p, c, f * ms, 1001).min_deficit > 0.0);
    }
    CHECK(binding_scan(p, c, 0.999 * ms, 1001).argmin_s == 0.5);
    CHECK(binding_scan(p, c, 1.01 * ms, 1001).argmin_s == 0.5);
  }
}

TEST_CASE("binding deficit: decreasing in m once m^g exceeds a f(s) / ((a+g) c)") {
  // d/dm of the deficit at fixed s changes sign exactly at that mass
  for (const auto& p : param_sample()) {
    const auto c = make_ball_constants(p);
    const double a = p.perimeter_exp();
    const double g = p.gap_exp();
    const double ms = critical_mass(p, c);
    for (double s : {0.01, 0.2, 0.5}) {
      // c m^g = f(1/2) at m*, so the turning mass is m* (a f(s) / ((a+g) f(1/2)))^{1/g}
      const double turn = ms * std::pow(a * f_of_s(p, s) / ((a + g) * f_of_s(p, 0.5)), 1.0 / g);
      const double below = 0.8 * turn;
      const double above = 1.2 * turn;
      CHECK(binding_deficit_lower(p, c, below * 1.01, s) > binding_deficit_lower(p, c, below, s));
      CHECK(binding_deficit_lower(p, c, above * 1.01, s) < binding_deficit_lower(p, c, above, s));
    }
  }
}

TEST_CASE("necessary condition flips at the nonexistence bound for lambda = 1") {
  for (int n : {2, 3}) {
    const RieszParams p(n, 1.0);
    const double bound = nonexistence_mass_bound(p, make_ball_constants(p), 0.0);
    for (double f : {0.9, 0.97, 1.03, 1.1}) {
      const double m = f * bound;
      const double radius = std::pow(m / unit_ball_volume(n), 1.0 / n);
      const auto g = rasterize_ball(n, radius, radius / (n == 2 ? 60.0 : 15.0));
      const auto r = necessary_condition(g, p);
      CHECK(r.satisfied == (r.measure <= bound));
      CHECK(r.satisfied == (f < 1.0));
    }
  }
}

TEST_CASE("dilation lower bound is attained by balls") {
  // a + g = b, so the bound built from ball(m) reproduces ball(s m) exactly
  for (const auto& p : param_sample()) {
    const auto c = make_ball_constants(p);
    for (double m : {0.3, 2.0, 9.0}) {
      for (double s : {0.1, 0.5, 0.9}) {
        const double bound = binding_lower_bound(p, m, s, ball_energy(p, m, c).total, c);
        CHECK(bound == doctest::Approx(ball_energy(p, s * m, c).total).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("optimizer energy respects the dilation lower bound up to quadrature error") {
  const RieszParams p(2, 1.0);
  const auto c = make_ball_constants(p);
  OptimizeOptions opts;
  opts.max_iter = 60;
  const double m = 2.0;
  const auto at_m = optimize_shape(p, m, 2, opts, FourierShape(1.0, {0.0, 0.2}, {}));
  for (double s : {0.3, 0.5, 0.8}) {
    const auto at_sm = optimize_shape(p, s * m, 2, opts, FourierShape(1.0, {0.0, 0.2}, {}));
    const double bound = binding_lower_bound(p, m, s, at_m.energy.total, c);
    CHECK(at_sm.energy.total >= bound * (1.0 - 2e-3));
  }
}

TEST_CASE("area projection keeps the target volume for random coefficients") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> m(0.1, 20.0);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_shape(rng, 5);
    const double target = m(rng);
    CHECK(std::abs(s.with_area(target).area() - target) / target < 1e-10);
  }
}

TEST_CASE("run-length format round-trips random blobs") {
  std::mt19937_64 rng(7);
  for (int dim : {2, 3}) {
    const auto g = random_blob(rng, dim, 500);
    std::stringstream buffer;
    write_grid_shape(buffer, g);
    CHECK(read_grid_shape(buffer) == g);
  }
}
