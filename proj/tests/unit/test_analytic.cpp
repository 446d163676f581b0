#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dropkit/analytic.hpp"
#include "dropkit/errors.hpp"
#include "dropkit/numerics.hpp"
#include "oracles.hpp"

using namespace dropkit;
constexpr double pi = std::numbers::pi;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Reference values computed offline with 30-digit arithmetic (mpmath) from
// the pair-distance integral representation.
struct Reference {
  int n;
  double lambda;
  double d_ball;
  double m_star;
};
const Reference kReference[] = {
    {3, 1.0, 16.0 * pi * pi / 15.0, 3.512071919597},
    {2, 1.0, 8.0 * pi / 3.0, 3.332162203618775},
    {2, 0.5, 5.917203693121886, 3.353328166032698},
    {2, 1.5, 17.03422978056903, 2.976360246304321},
    {3, 2.0, 19.73920880217872, 3.009011112257100},
    {5, 3.0, 19.79105341643224, 3.755709528705484},
};
}  // namespace

TEST_CASE("method names round-trip") {
  for (auto m : {SelfEnergyMethod::radial_quadrature, SelfEnergyMethod::monte_carlo}) {
    CHECK(self_energy_method_from_string(to_string(m)) == m);
  }
  CHECK(to_string(SelfEnergyMethod::radial_quadrature) == "radial");
  CHECK(to_string(SelfEnergyMethod::monte_carlo) == "mc");
  CHECK_THROWS_AS(self_energy_method_from_string("simpson"), ParameterError);
  // no closed form is shipped, so the name is not accepted as input
  CHECK(to_string(SelfEnergyMethod::analytic) == "analytic");
  CHECK_THROWS_AS(self_energy_method_from_string("analytic"), ParameterError);
}

TEST_CASE("radial quadrature reproduces the reference table") {
  for (const auto& r : kReference) {
    CAPTURE(r.n);
    CAPTURE(r.lambda);
    const RieszParams p(r.n, r.lambda);
    const auto d = ball_riesz_self_energy(p, SelfEnergyMethod::radial_quadrature,
                                          kDefaultRadialNodes);
    CHECK(d.stderr_ == 0.0);
    CHECK(rel(d.value, r.d_ball) < 1e-12);
    CHECK(rel(critical_mass(p, make_ball_constants(p)), r.m_star) < 1e-11);
  }
}

TEST_CASE("N=3, lambda=1 Coulomb self-energy of the unit ball") {
  const RieszParams p(3, 1.0);
  const auto c = make_ball_constants(p);
  CHECK(c.volume == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
  CHECK(c.surface == doctest::Approx(4.0 * pi).epsilon(1e-15));
  CHECK(rel(c.riesz_self, 16.0 * pi * pi / 15.0) < 1e-6);
  CHECK(c.riesz_self_method == SelfEnergyMethod::radial_quadrature);
}

TEST_CASE("N=2, lambda=1: radial quadrature inside 3 sigma of an independent 1e7-pair oracle") {
  const RieszParams p(2, 1.0);
  const auto mc = oracle::ball_pair_moment(2, -1.0, pi, 10'000'000, 2024);
  const double d = ball_riesz_self_energy(p, SelfEnergyMethod::radial_quadrature, 401).value;
  CHECK(std::abs(d - 0.5 * mc.value) < 3.0 * 0.5 * mc.stderr_);
}

TEST_CASE("library Monte Carlo: unbiased, seeded, thread-count independent") {
  const RieszParams p(3, 1.0);
  numerics::set_thread_count(1);
  const auto a = ball_riesz_self_energy(p, SelfEnergyMethod::monte_carlo, 3'000'000, 7);
  numerics::set_thread_count(3);
  const auto b = ball_riesz_self_energy(p, SelfEnergyMethod::monte_carlo, 3'000'000, 7);
  numerics::set_thread_count(0);
  CHECK(a.value == b.value);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.stderr_ > 0.0);
  CHECK(std::abs(a.value - 16.0 * pi * pi / 15.0) < 3.0 * a.stderr_);
  const auto c = ball_riesz_self_energy(p, SelfEnergyMethod::monte_carlo, 3'000'000, 8);
  CHECK(c.value != a.value);
}

TEST_CASE("kernel -> 1 limit gives |B_1|^2 / 2") {
  const RieszParams p(2, 1e-7);
  const double d = ball_riesz_self_energy(p, SelfEnergyMethod::radial_quadrature, 401).value;
  CHECK(rel(d, pi * pi / 2.0) < 1e-6);
}

TEST_CASE("self-energy parameter errors") {
  const RieszParams p(3, 1.0);
  CHECK_THROWS_AS(ball_riesz_self_energy(p, SelfEnergyMethod::radial_quadrature, 0), ParameterError);
  CHECK_THROWS_AS(ball_riesz_self_energy(p, SelfEnergyMethod::monte_carlo, 0), ParameterError);
  CHECK_THROWS_AS(ball_riesz_self_energy(p, SelfEnergyMethod::analytic, 100), ParameterError);
}

TEST_CASE("ball_energy examples") {
  const RieszParams p(3, 1.0);
  const auto c = make_ball_constants(p);
  const auto unit = ball_energy(p, c.volume, c);
  CHECK(unit.perimeter == doctest::Approx(4.0 * pi).epsilon(1e-14));
  CHECK(unit.riesz == doctest::Approx(c.riesz_self).epsilon(1e-14));
  const auto twice = ball_energy(p, 2.0 * c.volume, c);
  CHECK(twice.perimeter == doctest::Approx(4.0 * pi * std::pow(2.0, 2.0 / 3.0)).epsilon(1e-14));
  CHECK(twice.riesz == doctest::Approx(16.0 * pi * pi / 15.0 * std::pow(2.0, 5.0 / 3.0)).epsilon(1e-6));
  CHECK_THROWS_AS(ball_energy(p, 0.0, c), ParameterError);
  CHECK_THROWS_AS(ball_energy(p, -1.0, c), ParameterError);
}

TEST_CASE("critical mass for N=3, lambda=1") {
  const RieszParams p(3, 1.0);
  const auto c = make_ball_constants(p);
  const double closed = 5.0 * (std::cbrt(2.0) - 1.0) / (1.0 - std::pow(2.0, -2.0 / 3.0));
  CHECK(std::abs(critical_mass(p, c) - 3.512) < 1e-3);
  CHECK(rel(critical_mass(p, c), closed) < 1e-12);
  CHECK(rel(crossing_mass(p, c), closed) < 1e-9);
}

TEST_CASE("critical mass is homogeneous in riesz_self") {
  for (const auto& r : kReference) {
    const RieszParams p(r.n, r.lambda);
    const auto c = make_ball_constants(p);
    for (double factor : {0.5, 1.3, 4.0}) {
      const double expected =
          critical_mass(p, c) * std::pow(factor, -r.n / (r.n + 1.0 - r.lambda));
      CHECK(rel(critical_mass(p, c.with_riesz_scaled(factor)), expected) < 1e-13);
    }
  }
}

TEST_CASE("crossing mass equals critical mass") {
  for (int n = 2; n <= 6; ++n) {
    for (double frac : {0.1, 0.25, 0.5, 0.9}) {
      const RieszParams p(n, frac * n);
      const auto c = make_ball_constants(p);
      CHECK(rel(crossing_mass(p, c), critical_mass(p, c)) < 1e-9);
    }
  }
}

TEST_CASE("N=2, lambda=1 critical mass from a Monte Carlo D(B_1) matches crossing to 1e-6") {
  const RieszParams p(2, 1.0);
  const auto c = make_ball_constants(p, SelfEnergyMethod::monte_carlo, 2'000'000, 5);
  CHECK(c.riesz_self_method == SelfEnergyMethod::monte_carlo);
  CHECK(c.riesz_self_stderr > 0.0);
  CHECK(rel(crossing_mass(p, c), critical_mass(p, c)) < 1e-6);
}

TEST_CASE("conditional threshold") {
  const RieszParams p3(3, 1.0);
  const auto c3 = make_ball_constants(p3);
  const double m3 = critical_mass(p3, c3);
  CHECK(conditional_threshold(p3, c3, 0.5) == doctest::Approx(2.0 * m3).epsilon(1e-14));
  CHECK(conditional_threshold(p3, c3, 1e-12) == doctest::Approx(m3).epsilon(1e-11));
  CHECK(conditional_threshold(p3, c3, 1e-6) > m3);
  const RieszParams p2(2, 1.0);
  const auto c2 = make_ball_constants(p2);
  CHECK(conditional_threshold(p2, c2, 0.19) ==
        doctest::Approx(critical_mass(p2, c2) / 0.81).epsilon(1e-14));
  CHECK_THROWS_AS(conditional_threshold(p3, c3, 0.0), ParameterError);
  CHECK_THROWS_AS(conditional_threshold(p3, c3, 1.0), ParameterError);
}
