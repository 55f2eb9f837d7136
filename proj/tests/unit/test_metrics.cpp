#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lowsig/error.hpp"
#include "lowsig/metrics.hpp"

using namespace lowsig;
using namespace lowsig::metrics;

namespace {

std::vector<Patch> white_patches(std::size_t count, std::size_t size, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Patch> out(count, Patch{size, std::vector<double>(size * size)});
  for (auto& p : out)
    for (double& v : p.data) v = nd(gen);
  return out;
}

Patch gaussian_psf(std::size_t size, double sigma_px) {
  Patch p{size, std::vector<double>(size * size)};
  const double c = static_cast<double>(size / 2);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) {
      const double r2 = (i - c) * (i - c) + (j - c) * (j - c);
      p.data[i * size + j] = std::exp(-r2 / (2.0 * sigma_px * sigma_px));
    }
  return p;
}

}  // namespace

TEST_CASE("ROI statistics") {
  recon::Image img(32, 0.1, 4.5);
  SUBCASE("constant") {
    const auto s = roi_stats(img, DiscRoi{15.5, 15.5, 10.0});
    CHECK(s.mean == doctest::Approx(4.5));
    CHECK(s.std == doctest::Approx(0.0));
  }
  SUBCASE("single pixel") {
    img.at(3, 7) = -2.0;
    const auto s = roi_stats(img, RectRoi{3, 7, 3, 7});
    CHECK(s.count == 1);
    CHECK(s.mean == -2.0);
    CHECK(s.std == 0.0);
  }
  SUBCASE("checkerboard") {
    for (std::size_t i = 0; i < 32; ++i)
      for (std::size_t j = 0; j < 32; ++j) img.at(i, j) = (i + j) % 2 ? 2.0 : 0.0;
    const auto s = roi_stats(img, RectRoi{0, 0, 31, 31});
    CHECK(s.mean == doctest::Approx(1.0));
    CHECK(s.std == doctest::Approx(1.0).epsilon(0.01));
  }
  SUBCASE("out of bounds") {
    CHECK_THROWS_AS(roi_stats(img, DiscRoi{2.0, 2.0, 5.0}), ConfigError);
    CHECK_THROWS_AS(roi_stats(img, RectRoi{0, 0, 40, 3}), ConfigError);
  }
}

TEST_CASE("NPS of identical patches is zero") {
  auto patches = white_patches(1, 32, 3);
  patches.resize(8, patches.front());
  const auto r = nps_radial(patches, 0.1);
  for (double v : r.profile.value) CHECK(v == doctest::Approx(0.0).scale(1.0));
  CHECK(r.integral == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("NPS of white noise integrates to the variance") {
  const auto patches = white_patches(64, 64, 17);
  const double pitch = 0.05;
  const auto r = nps_radial(patches, pitch);
  CHECK(r.patches == 64);
  CHECK(r.frequency_step == doctest::Approx(1.0 / (64 * pitch)));
  CHECK(r.integral == doctest::Approx(1.0).epsilon(0.10));
  // flat: every radial bin past DC near pitch^2 (unit variance)
  for (std::size_t k = 1; k < r.profile.value.size(); ++k)
    CHECK(r.profile.value[k] == doctest::Approx(pitch * pitch).epsilon(0.25));
}

TEST_CASE("NPS locates a sinusoid") {
  const std::size_t n = 64, k0 = 10;
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  std::vector<Patch> patches(16, Patch{n, std::vector<double>(n * n)});
  for (auto& p : patches) {
    const double phase = u(gen);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        p.data[i * n + j] = std::sin(2.0 * std::numbers::pi * k0 * j / n + phase);
  }
  const auto r = nps_radial(patches, 1.0);
  double total = 0.0;
  for (std::size_t k = 0; k < r.profile.value.size(); ++k) total += r.profile.value[k] * r.profile.count[k];
  CHECK(r.profile.value[k0] * r.profile.count[k0] / total >= 0.99);
}

TEST_CASE("NPS input checks") {
  auto patches = white_patches(7, 16, 1);
  CHECK_THROWS_AS(nps_radial(patches, 0.1), ConfigError);
  patches.push_back(white_patches(1, 8, 2).front());
  CHECK_THROWS_AS(nps_radial(patches, 0.1), ConfigError);
}

TEST_CASE("Gaussian PSF MTF crossings") {
  const double pitch = 0.05, sigma_px = 2.0;
  const auto r = mtf_from_psf(gaussian_psf(64, sigma_px), pitch);
  CHECK(r.profile.value.front() == 1.0);
  const double sigma = sigma_px * pitch;
  auto analytic = [&](double level) { return std::sqrt(std::log(1.0 / level) / (2.0 * std::numbers::pi * std::numbers::pi * sigma * sigma)); };
  REQUIRE(r.crossings.f50);
  REQUIRE(r.crossings.f10);
  CHECK(*r.crossings.f50 == doctest::Approx(analytic(0.5)).epsilon(0.03));
  CHECK(*r.crossings.f10 == doctest::Approx(analytic(0.1)).epsilon(0.03));
  if (r.crossings.f4) {
    CHECK(*r.crossings.f10 < *r.crossings.f4);
    CHECK(*r.crossings.f4 == doctest::Approx(analytic(0.04)).epsilon(0.03));
  }
  CHECK(*r.crossings.f50 < *r.crossings.f10);
}

TEST_CASE("impulse PSF has no crossing below Nyquist") {
  Patch p{64, std::vector<double>(64 * 64, 0.0)};
  p.data[32 * 64 + 32] = 5.0;
  const auto r = mtf_from_psf(p, 0.1);
  for (double v : r.profile.value) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(r.crossings.f50);
  CHECK_FALSE(r.crossings.f4);
  CHECK(r.profile.frequency.back() == doctest::Approx(0.5 / 0.1));
}

TEST_CASE("wire on an image") {
  recon::Image img(128, 0.05, 0.2);
  const auto psf = gaussian_psf(64, 1.5);
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = 0; j < 64; ++j) img.at(20 + i, 40 + j) += psf.data[i * 64 + j];
  const auto a = mtf_from_wire(img, 52.0, 72.0);
  const auto b = mtf_from_psf(psf, 0.05);
  REQUIRE(a.profile.value.size() == b.profile.value.size());
  for (std::size_t k = 0; k < a.profile.value.size(); ++k)
    CHECK(a.profile.value[k] == doctest::Approx(b.profile.value[k]).epsilon(1e-9));
  CHECK_THROWS_AS(mtf_from_wire(img, 10.0, 72.0), ConfigError);
  CHECK_THROWS_AS(mtf_from_psf(Patch{64, std::vector<double>(64 * 64, 0.0)}, 0.05), DataError);
}

TEST_CASE("crossing interpolates linearly") {
  RadialProfile p{{0.0, 1.0, 2.0}, {1.0, 0.6, 0.2}, {1, 1, 1}};
  CHECK(*crossing(p, 0.5) == doctest::Approx(1.25));
  CHECK_FALSE(crossing(p, 0.1));
}
