#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dropkit/errors.hpp"
#include "dropkit/shapes.hpp"

using namespace dropkit;
constexpr double pi = std::numbers::pi;

TEST_CASE("FourierShape basics") {
  const FourierShape s(2.0, {0.1, 0.0, 0.05}, {0.0, -0.02});
  CHECK(s.modes() == 3);
  CHECK(s.sin_coeffs().size() == 3);
  CHECK(s.radius(0.0) == doctest::Approx(2.0 * (1.0 + 0.1 + 0.05)));
  CHECK(s.area() == doctest::Approx(pi * 4.0 * (1.0 + 0.5 * (0.01 + 0.0025 + 0.0004))));
  // radius_derivative against a central difference
  const double t = 0.7;
  const double fd = (s.radius(t + 1e-6) - s.radius(t - 1e-6)) / 2e-6;
  CHECK(s.radius_derivative(t) == doctest::Approx(fd).epsilon(1e-7));
  CHECK(FourierShape::disk(1.5).area() == doctest::Approx(pi * 2.25));
  CHECK_THROWS_AS(FourierShape(0.0, {}, {}), ParameterError);
  CHECK_THROWS_AS(FourierShape(-1.0, {}, {}), ParameterError);
}

TEST_CASE("validity, area projection and dilation") {
  CHECK(FourierShape(1.0, {0.0, 0.3}, {}).is_valid());
  CHECK_FALSE(FourierShape(1.0, {0.0, 1.2}, {}).is_valid());
  const FourierShape s(1.0, {0.0, 0.3}, {0.1});
  CHECK(s.with_area(2.5).area() == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(s.with_area(2.5).cos_coeffs() == s.cos_coeffs());
  CHECK(s.dilated(3.0).area() == doctest::Approx(9.0 * s.area()).epsilon(1e-14));
  CHECK_THROWS_AS(s.with_area(0.0), ParameterError);
}

TEST_CASE("centroid of a shifted disk") {
  // to first order, r = 1 + a cos(theta) is the unit disk shifted by a along x
  const FourierShape s(1.0, {0.01}, {});
  const auto c = s.centroid();
  CHECK(c[0] == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(std::abs(c[1]) < 1e-15);
  const auto d = FourierShape::disk(2.0).centroid();
  CHECK(std::abs(d[0]) < 1e-14);
  CHECK(std::abs(d[1]) < 1e-14);
}

TEST_CASE("rasterize the unit disk") {
  const auto g = rasterize(FourierShape::disk(1.0), 0.01);
  CHECK(g.dimension() == 2);
  CHECK(std::abs(g.measure() - pi) / pi < 0.01);
  const auto e = rasterize(FourierShape(1.0, {0.0, 0.0}, {0.0}), 0.01);
  CHECK(e == g);
  CHECK_THROWS_AS(rasterize(FourierShape(1.0, {0.0, 1.5}, {}), 0.01), ParameterError);
  CHECK_THROWS_AS(rasterize(FourierShape::disk(1.0), 0.0), ParameterError);
}

TEST_CASE("rasterized area converges as h shrinks") {
  // averaged over many sub-cell shifts to damp lattice-point oscillation
  const FourierShape s(1.0, {0.0, 0.2, 0.1}, {0.05});
  auto mean_err = [&](double h) {
    double total = 0.0;
    const int shifts = 16;
    for (int i = 0; i < shifts; ++i) {
      const double f = (i + 0.5) / shifts;
      total += std::abs(rasterize(s, h, {f * h, 0.37 * f * h}).measure() - s.area());
    }
    return total / shifts;
  };
  const double e1 = mean_err(0.04);
  const double e2 = mean_err(0.02);
  const double e3 = mean_err(0.01);
  CHECK(e2 < e1);
  CHECK(e3 < e2);
  CHECK(e3 < 2e-3 * s.area());
}

TEST_CASE("shifted rasterization records its origin") {
  const auto g = rasterize(FourierShape::disk(1.0), 0.1, {0.03, -0.02});
  REQUIRE(g.origin().size() == 2);
  CHECK(g.origin()[0] == 0.03);
  CHECK(g.origin()[1] == -0.02);
  // translating the shape together with the lattice leaves the cells unchanged
  CHECK(rasterize(FourierShape::disk(1.0), 0.1, {0.0, 0.0}) == rasterize(FourierShape::disk(1.0), 0.1));
}

TEST_CASE("GridShape construction and queries") {
  const auto g = GridShape::from_cells(2, 0.5, {{0, 0, 0}, {0, 1, 0}, {0, 3, 0}, {2, 0, 0}, {0, 1, 0}});
  CHECK(g.cell_count() == 4);
  CHECK(g.measure() == doctest::Approx(4 * 0.25));
  REQUIRE(g.rows().size() == 2);
  CHECK(g.rows()[0].runs.size() == 2);
  CHECK(g.rows()[0].runs[0] == CellRun{0, 1});
  CHECK(g.cells().size() == 4);
  CHECK_THROWS_AS(GridShape(4, 1.0), ParameterError);
  CHECK_THROWS_AS(GridShape(2, -1.0), ParameterError);
  CHECK_THROWS_AS(GridShape(2, 1.0, {0.0}), ParameterError);

  GridShape manual(3, 1.0);
  manual.append_run({0, 0}, {0, 2});
  manual.append_run({0, 0}, {3, 4});  // adjacent: merged
  CHECK(manual.rows()[0].runs.size() == 1);
  CHECK(manual.cell_count() == 5);
  CHECK_THROWS_AS(manual.append_run({0, 0}, {1, 1}), ParameterError);
  CHECK_THROWS_AS(manual.append_run({-1, 0}, {0, 0}), ParameterError);
}

TEST_CASE("translation and reflection") {
  const auto g = rasterize_ball(3, 1.0, 0.25);
  const auto t = g.translated({3, -2, 5});
  CHECK(t.cell_count() == g.cell_count());
  CHECK(t.translated({-3, 2, -5}) == g);
  CHECK(g.reflected(0) == g);  // ball centered on a lattice plane
  const auto one = GridShape::from_cells(2, 1.0, {{0, 0, 0}, {0, 1, 0}});
  CHECK(one.reflected(1) == GridShape::from_cells(2, 1.0, {{0, -1, 0}, {0, -2, 0}}));
  CHECK_THROWS_AS(g.reflected(3), ParameterError);
}

TEST_CASE("rasterize_ball and rasterize_region") {
  const auto b = rasterize_ball(3, 1.0, 0.05);
  CHECK(std::abs(b.measure() - 4.0 * pi / 3.0) / (4.0 * pi / 3.0) < 0.01);
  const auto r = rasterize_region(2, 0.1, 1.0, [](const std::array<double, 3>& x) {
    return std::abs(x[0]) < 0.5 && std::abs(x[1]) < 0.3;
  });
  CHECK(r.cell_count() == 60);
  CHECK_THROWS_AS(rasterize_ball(3, 0.0, 0.1), ParameterError);
}

TEST_CASE("run-length text format round-trips") {
  const auto g = rasterize_ball(3, 1.0, 0.2).translated({1, 2, 3});
  std::stringstream buffer;
  write_grid_shape(buffer, g);
  const auto back = read_grid_shape(buffer);
  CHECK(back == g);
  std::stringstream bad("2 0.1 0 0\n0 5:3\n");
  CHECK_THROWS_AS(read_grid_shape(bad), ParameterError);
  std::stringstream garbage("x y z");
  CHECK_THROWS_AS(read_grid_shape(garbage), ParameterError);
}
