#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lowsig/error.hpp"
#include "lowsig/simulator.hpp"

using namespace lowsig;

namespace {

Phantom disc(double r, double mu) {
  Phantom p;
  p.ellipses.push_back({0.0, 0.0, r, r, 0.0, mu});
  return p;
}

// Integrates attenuation_at along the ray by marching, with every
// inside/outside change located by bisection.
double march(const Phantom& ph, double theta, double s, double half_length) {
  const double c = std::cos(theta), sn = std::sin(theta);
  auto at = [&](double t) { return ph.attenuation_at(s * c - t * sn, s * sn + t * c); };
  const int steps = 10000;
  const double h = 2.0 * half_length / steps;
  double total = 0.0;
  double t0 = -half_length;
  double v0 = at(t0);
  for (int k = 1; k <= steps; ++k) {
    const double t1 = -half_length + k * h;
    const double v1 = at(t1);
    if (v1 == v0) {
      total += v0 * (t1 - t0);
    } else {
      double lo = t0, hi = t1;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (at(mid) == v0 ? lo : hi) = mid;
      }
      total += v0 * (lo - t0) + v1 * (t1 - lo);
    }
    t0 = t1;
    v0 = v1;
  }
  return total;
}

}  // namespace

TEST_CASE("diameter chord") {
  CHECK(sim::line_integral(disc(8.0, 0.2), 0.3, 0.0) == doctest::Approx(3.2).epsilon(1e-14));
  CHECK(sim::line_integral(disc(8.0, 0.2), 1.0, 8.5) == 0.0);
}

TEST_CASE("oblique chord through a rotated ellipse matches ray marching") {
  Phantom p;
  p.ellipses.push_back({1.5, -2.0, 6.0, 2.5, 0.7, 0.35});
  p.ellipses.push_back({-3.0, 1.0, 1.0, 2.0, -0.3, 0.5});
  for (double theta : {0.2, 1.1, 2.6}) {
    for (double s : {-2.3, 0.4, 3.1}) {
      const double want = march(p, theta, s, 15.0);
      if (want == 0.0) continue;
      CHECK(sim::line_integral(p, theta, s) == doctest::Approx(want).epsilon(1e-4));
    }
  }
}

TEST_CASE("forward projection") {
  const Phantom p = disc(4.0, 0.25);
  const Geometry g = Geometry::parallel(65, 0.25, 2, 36);
  const auto proj = sim::forward_project(p, g);
  CHECK(proj.stage() == Stage::Projection);
  CHECK(proj.dims() == Dims{65, 2, 36});
  for (std::size_t v = 0; v < 36; ++v) {
    CHECK(proj(32, 0, v) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(proj(32, 1, v) == proj(32, 0, v));
    CHECK(proj(0, 0, v) == 0.0);
  }
}

TEST_CASE("projection is linear in attenuation and rotates with the views") {
  Phantom p;
  p.ellipses.push_back({2.0, 1.0, 5.0, 2.0, 0.4, 0.2});
  p.wire = Wire{-1.0, 3.0, 0.05, 2.0};
  const std::size_t views = 90;
  const Geometry g = Geometry::parallel(128, 0.125, 1, views);
  const auto a = sim::forward_project(p, g);
  const auto b = sim::forward_project(p.scaled(2.0), g);
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(b[i] == doctest::Approx(2.0 * a[i]).epsilon(1e-12));
  const auto r = sim::forward_project(p.rotated(std::numbers::pi / views), g);
  for (std::size_t v = 1; v < views; ++v)
    for (std::size_t c = 0; c < 128; ++c) REQUIRE(std::abs(r(c, 0, v) - a(c, 0, v - 1)) <= 1e-12);
}

TEST_CASE("phantom outside the field of view") {
  const Geometry g = Geometry::parallel(64, 0.1, 1, 10);  // FOV radius 3.2
  CHECK_THROWS_AS(sim::forward_project(disc(4.0, 0.2), g), ConfigError);
}

TEST_CASE("Beer-Lambert counts") {
  SinogramGrid p({3, 1, 1}, Stage::Projection, std::vector<double>{0.0, std::log(10.0), 20.0});
  const auto c1 = sim::counts_from_projection(p, 1000.0);
  CHECK(c1[0] == 1000.0);
  CHECK(c1[1] == doctest::Approx(100.0).epsilon(1e-13));
  const auto c2 = sim::counts_from_projection(p, 1.0e4);
  CHECK(c2[2] == doctest::Approx(2.0612e-5).epsilon(1e-4));
  CHECK(c2.stage() == Stage::Counts);
}

TEST_CASE("Poisson sampler moments") {
  for (double lambda : {0.5, 5.0, 29.0, 30.0, 100.0, 1.0e4}) {
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      CellRng rng(77, static_cast<std::uint64_t>(i));
      const double k = static_cast<double>(sim::sample_poisson(lambda, rng));
      s += k;
      s2 += k * k;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(lambda).epsilon(0.02));
    CHECK(var == doctest::Approx(lambda).epsilon(0.03));
  }
}

TEST_CASE("add_noise") {
  SUBCASE("high-count mean") {
    const SinogramGrid ideal({100, 10, 100}, Stage::Counts, 1.0e6);
    const auto noisy = sim::add_noise(ideal, {1.0e6, 0.0, 42});
    double s = 0.0;
    for (double v : noisy.values()) s += v;
    CHECK(s / static_cast<double>(noisy.size()) == doctest::Approx(1.0e6).epsilon(0.005));
  }
  SUBCASE("starved cells are about half negative") {
    const SinogramGrid ideal({100, 10, 100}, Stage::Counts, 0.01);
    const auto noisy = sim::add_noise(ideal, {2.0e4, 5.0, 42});
    std::size_t neg = 0;
    for (double v : noisy.values()) neg += v < 0.0;
    CHECK(static_cast<double>(neg) / static_cast<double>(noisy.size()) == doctest::Approx(0.499).epsilon(0.02));
  }
  SUBCASE("deterministic per seed") {
    const SinogramGrid ideal({50, 4, 20}, Stage::Counts, 40.0);
    const auto a = sim::add_noise(ideal, {2.0e4, 5.0, 9});
    const auto b = sim::add_noise(ideal, {2.0e4, 5.0, 9});
    const auto c = sim::add_noise(ideal, {2.0e4, 5.0, 10});
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(a[i] == b[i]);
      differs |= a[i] != c[i];
    }
    CHECK(differs);
  }
}
