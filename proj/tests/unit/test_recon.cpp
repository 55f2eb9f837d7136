#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lowsig/error.hpp"
#include "lowsig/metrics.hpp"
#include "lowsig/recon.hpp"
#include "lowsig/simulator.hpp"

using namespace lowsig;

namespace {

Phantom disc(double r, double mu) {
  Phantom p;
  p.ellipses.push_back({0.0, 0.0, r, r, 0.0, mu});
  return p;
}

}  // namespace

TEST_CASE("negative log") {
  const double i0 = 2.0e4;
  SinogramGrid c({3, 1, 1}, Stage::Counts, std::vector<double>{i0, i0 / std::numbers::e, i0 * std::exp(-5.0)});
  const auto p = recon::neg_log(c, i0);
  CHECK(p.stage() == Stage::Projection);
  CHECK(p[0] == 0.0);
  CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p[2] == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("negative log rejects non-positive counts") {
  SinogramGrid c({4, 2, 2}, Stage::Counts, 10.0);
  c(2, 1, 1) = 0.0;
  try {
    recon::neg_log(c, 100.0);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string what = e.what();
    CHECK(what.find("channel 2") != std::string::npos);
    CHECK(what.find("row 1") != std::string::npos);
    CHECK(what.find("view 1") != std::string::npos);
  }
  const auto clamped = recon::clamp_counts(c, recon::kUncorrectedFloor);
  CHECK(clamped(2, 1, 1) == recon::kUncorrectedFloor);
  CHECK(clamped(0, 0, 0) == 10.0);
}

TEST_CASE("uniform disc reconstructs to its attenuation") {
  const Geometry g = Geometry::parallel(512, 0.0703125, 1, 720);
  const auto proj = sim::forward_project(disc(8.0, 0.2), g);
  const auto img = recon::fbp(proj, 0, g);
  CHECK(img.n == 512);
  CHECK(img.pitch == doctest::Approx(2.0 * g.fov_radius / 512));
  const auto s = metrics::roi_stats(img, metrics::DiscRoi{255.5, 255.5, 20.0});
  CHECK(s.mean == doctest::Approx(0.2).epsilon(0.03));
  // outside the FOV circle
  CHECK(img.at(0, 0) == 0.0);
  // Hann apodisation keeps the mean
  const auto hann = recon::fbp(proj, 0, g, {512, 0.0, recon::Apodization::Hann});
  CHECK(metrics::roi_stats(hann, metrics::DiscRoi{255.5, 255.5, 20.0}).mean == doctest::Approx(0.2).epsilon(0.03));
}

TEST_CASE("fbp is linear") {
  const Geometry g = Geometry::parallel(128, 0.25, 1, 180);
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SinogramGrid p({128, 1, 180}, Stage::Projection), q = p, mix = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = u(gen);
    q[i] = u(gen);
    mix[i] = 2.5 * p[i] - 0.75 * q[i];
  }
  const recon::FbpOptions o{128, 0.0, recon::Apodization::RamLak};
  const auto ip = recon::fbp(p, 0, g, o), iq = recon::fbp(q, 0, g, o), im = recon::fbp(mix, 0, g, o);
  double scale = 0.0, err = 0.0;
  for (std::size_t k = 0; k < im.data.size(); ++k) {
    scale = std::max(scale, std::abs(im.data[k]));
    err = std::max(err, std::abs(im.data[k] - (2.5 * ip.data[k] - 0.75 * iq.data[k])));
  }
  CHECK(err <= 1e-10 * scale);

  const auto zero = recon::fbp(SinogramGrid({128, 1, 180}, Stage::Projection), 0, g, o);
  for (double v : zero.data) REQUIRE(v == 0.0);
}

TEST_CASE("rotating the phantom by one view leaves ROI statistics unchanged") {
  Phantom p;
  p.ellipses.push_back({0.0, 0.0, 7.0, 5.0, 0.3, 0.2});
  p.ellipses.push_back({3.0, 1.0, 1.0, 1.0, 0.0, 0.3});
  const std::size_t views = 360;
  const Geometry g = Geometry::parallel(256, 0.0703125, 1, views);
  const recon::FbpOptions o{256, 0.0, recon::Apodization::RamLak};
  const auto a = recon::fbp(sim::forward_project(p, g), 0, g, o);
  const auto b = recon::fbp(sim::forward_project(p.rotated(std::numbers::pi / views), g), 0, g, o);
  const metrics::DiscRoi roi{127.5, 127.5, 40.0};
  const auto sa = metrics::roi_stats(a, roi), sb = metrics::roi_stats(b, roi);
  CHECK(sb.mean == doctest::Approx(sa.mean).epsilon(0.005));
  CHECK(sb.std == doctest::Approx(sa.std).epsilon(0.005));
}

TEST_CASE("fbp preconditions") {
  Geometry g = Geometry::parallel(64, 0.1, 1, 1);
  CHECK_THROWS_AS(recon::fbp(SinogramGrid({64, 1, 1}, Stage::Projection), 0, g), ConfigError);
  g = Geometry::parallel(64, 0.1, 1, 8);
  g.angles[3] += 0.05;
  CHECK_THROWS_AS(recon::fbp(SinogramGrid({64, 1, 8}, Stage::Projection), 0, g), ConfigError);
}

TEST_CASE("pixel coordinates") {
  const recon::Image img(4, 0.5);
  CHECK(img.x_of(0) == -0.75);
  CHECK(img.y_of(0) == 0.75);
  CHECK(img.col_of(img.x_of(2.0)) == doctest::Approx(2.0));
  CHECK(img.row_of(img.y_of(3.0)) == doctest::Approx(3.0));
}
