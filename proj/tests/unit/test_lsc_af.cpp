#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lowsig/error.hpp"
#include "lowsig/lsc_af.hpp"

using namespace lowsig;
using namespace lowsig::af;

namespace {

SinogramGrid filled(Dims d, Stage s, double v) { return SinogramGrid(d, s, v); }

SinogramGrid random_grid(Dims d, Stage s, double lo, double hi, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  SinogramGrid g(d, s);
  for (double& v : g.values()) v = u(gen);
  return g;
}

double rms_rel(const SinogramGrid& a, const SinogramGrid& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = (a[i] - b[i]) / b[i];
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

}  // namespace

TEST_CASE("config defaults and validation") {
  AfConfig c;
  CHECK(c.effective_lambda_th() == 10.0);
  c.sigma_e = 5.0;
  CHECK(c.effective_lambda_th() == 15.0);
  c.lambda_th = 30.0;
  CHECK(c.effective_lambda_th() == 30.0);
  CHECK(c.stats_window.cell_count() == 105);
  CHECK(c.bf_window.cell_count() == 273);
  c.validate();
  c.k1 = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("llmmse") {
  const Dims d{1, 1, 1};
  AfConfig c;
  c.sigma_e = std::sqrt(10.0);
  c.lambda_th = 30.0;
  SUBCASE("eta one half") {
    const auto out = llmmse_correct(filled(d, Stage::Counts, -5.0), filled(d, Stage::Counts, 10.0), c);
    CHECK(out[0] == doctest::Approx(2.5).epsilon(1e-14));
  }
  SUBCASE("above the gate") {
    const auto out = llmmse_correct(filled(d, Stage::Counts, 50.0), filled(d, Stage::Counts, 10.0), c);
    CHECK(out[0] == 50.0);
  }
  SUBCASE("zero local mean shrinks to zero") {
    const auto out = llmmse_correct(filled(d, Stage::Counts, 7.0), filled(d, Stage::Counts, 0.0), c);
    CHECK(out[0] == 0.0);
  }
  SUBCASE("no electronic noise is the identity") {
    c.sigma_e = 0.0;
    const auto out = llmmse_correct(filled(d, Stage::Counts, 3.0), filled(d, Stage::Counts, 8.0), c);
    CHECK(out[0] == 3.0);
  }
}

TEST_CASE("anscombe forward") {
  CHECK(anscombe(0.0) == doctest::Approx(1.224744871391589).epsilon(1e-14));
  CHECK(anscombe(100.0) == doctest::Approx(20.03746490951388).epsilon(1e-13));
  CHECK(anscombe(-0.375) == 0.0);
  CHECK(anscombe(-4.0) == 0.0);
  const auto y = vst_forward(filled({2, 1, 1}, Stage::Counts, 100.0));
  CHECK(y.stage() == Stage::Vst);
}

TEST_CASE("adaptive parameters") {
  AfConfig c;
  const Dims d{3, 1, 1};
  SinogramGrid mu(d, Stage::Counts, std::vector<double>{400.0, 40.0, 0.0});
  SinogramGrid sd(d, Stage::Counts, std::vector<double>{20.0, 0.0, 0.0});
  const auto p = adaptive_params(mu, sd, c);
  CHECK(p.sigma_d[0] == doctest::Approx(1.0));
  CHECK(p.sigma_d[1] == doctest::Approx(10.0));
  CHECK(p.sigma_d[2] == doctest::Approx(400.0));  // mu_floor = 1
  CHECK(p.sigma_r[0] == doctest::Approx(5.0 * 20.0 / std::sqrt(400.375)));
  CHECK(p.sigma_r[1] == c.sigma_r_floor);
  c.sigma_r_mode = SigmaRMode::Raw;
  CHECK(adaptive_params(mu, sd, c).sigma_r[0] == doctest::Approx(100.0));
}

TEST_CASE("bilateral identity window is exact") {
  const Dims d{64, 16, 8};
  const auto x = random_grid(d, Stage::Vst, 0.0, 50.0, 11);
  AdaptiveParams p{random_grid(d, Stage::Vst, 0.5, 5.0, 12), random_grid(d, Stage::Vst, 0.1, 3.0, 13)};
  const auto y = bilateral_filter(x, p, {0, 0, 0});
  for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(y[i] == x[i]);
}

TEST_CASE("bilateral keeps a constant") {
  const Dims d{20, 7, 5};
  const auto x = filled(d, Stage::Vst, 6.25);
  AdaptiveParams p{random_grid(d, Stage::Vst, 0.5, 50.0, 1), random_grid(d, Stage::Vst, 0.01, 3.0, 2)};
  const auto y = bilateral_filter(x, p, {6, 3, 1});
  for (double v : y.values()) CHECK(v == doctest::Approx(6.25).epsilon(1e-14));
}

TEST_CASE("bilateral without a range term matches a direct spatial filter") {
  const Dims d{64, 16, 8};
  const WindowSpec w{6, 3, 1};
  const auto x = random_grid(d, Stage::Vst, 0.0, 40.0, 21);
  AdaptiveParams p{random_grid(d, Stage::Vst, 0.3, 8.0, 22),
                   filled(d, Stage::Vst, std::numeric_limits<double>::infinity())};
  const auto y = bilateral_filter(x, p, w);

  double worst = 0.0;
  for (long v = 0; v < 8; ++v)
    for (long r = 0; r < 16; ++r)
      for (long c = 0; c < 64; ++c) {
        const double sd = p.sigma_d(c, r, v);
        double num = 0.0, den = 0.0;
        for (long dv = -w.view; dv <= w.view; ++dv)
          for (long dr = -w.row; dr <= w.row; ++dr)
            for (long dc = -w.channel; dc <= w.channel; ++dc) {
              const long cc = c + dc, rr = r + dr, vv = v + dv;
              if (cc < 0 || rr < 0 || vv < 0 || cc >= 64 || rr >= 16 || vv >= 8) continue;
              const double k = std::exp(-std::sqrt(double(dc * dc + dr * dr + dv * dv)) / sd);
              num += k * x(cc, rr, vv);
              den += k;
            }
        const double want = num / den;
        worst = std::max(worst, std::abs(y(c, r, v) - want) / std::abs(want));
      }
  CHECK(worst <= 1e-9);
}

TEST_CASE("bilateral preserves a step") {
  const Dims d{64, 1, 1};
  SinogramGrid x(d, Stage::Vst);
  for (std::size_t c = 0; c < 64; ++c) x(c, 0, 0) = c < 32 ? 10.0 : 30.0;
  AdaptiveParams p{filled(d, Stage::Vst, 4.0), filled(d, Stage::Vst, 0.5)};
  const auto y = bilateral_filter(x, p, {6, 0, 0});
  for (std::size_t c = 0; c < 64; ++c) {
    const double level = c < 32 ? 10.0 : 30.0;
    CHECK(std::abs(y(c, 0, 0) - level) <= 0.01 * level);
  }
}

TEST_CASE("anscombe inverse") {
  const double y0 = 2.0 * std::sqrt(3.0 / 8.0);
  CHECK(std::abs(anscombe_inverse(y0)) <= 1e-12);
  CHECK(anscombe_inverse(0.5) == 0.0);
  CHECK(anscombe_inverse(20.0) == doctest::Approx(99.88697).epsilon(1e-6));
  const double y = 200.0;
  CHECK(std::abs(anscombe_inverse(y) - (y * y / 4 - 0.125)) / (y * y / 4 - 0.125) < 1e-4);
  // independent evaluation of the five terms
  const double s = std::sqrt(1.5);
  for (double t : {1.5, 3.0, 7.0, 42.0}) {
    const double want = t * t / 4 + s / (4 * t) - 11.0 / (8 * t * t) + 5 * s / (8 * t * t * t) - 0.125;
    CHECK(anscombe_inverse(t) == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("positivity map") {
  CHECK(positivity(0.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(positivity(1.0, 1.0) == 1.0);
  CHECK(positivity(5.0, 1.0) == 5.0);
  CHECK(positivity(-1000.0, 1.0) > 0.0);
  // C1 at the knee: slope 1 from below
  const double h = 1e-6;
  CHECK((positivity(2.0, 2.0) - positivity(2.0 - h, 2.0)) / h == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("af_lsc near passthrough at high counts") {
  const Dims d{48, 8, 6};
  std::mt19937_64 gen(5);
  std::normal_distribution<double> nd(0.0, 1.0);
  SinogramGrid g(d, Stage::Counts);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double lambda = 1.0e4 + 2.0e3 * std::sin(0.1 * static_cast<double>(g.cell(i).channel));
    g[i] = lambda + std::sqrt(lambda) * nd(gen);
  }
  AfConfig c;
  c.sigma_e = 5.0;
  const auto out = af_lsc(g, c);
  CHECK(rms_rel(out, g) <= 0.02);
}

TEST_CASE("af_lsc output is positive") {
  const Dims d{40, 6, 5};
  std::mt19937_64 gen(9);
  std::normal_distribution<double> nd(10.0, 3.0);
  SinogramGrid g(d, Stage::Counts);
  for (double& v : g.values()) v = nd(gen);
  g[17] = -8.0;
  g[100] = -3.0;
  AfConfig c;
  c.sigma_e = 3.0;
  const auto out = af_lsc(g, c);
  for (double v : out.values()) CHECK(v > 0.0);
  CHECK(out.stage() == Stage::Counts);
}

TEST_CASE("af_lsc on zero counts") {
  AfConfig c;
  c.sigma_e = 5.0;
  const auto out = af_lsc(SinogramGrid({30, 5, 4}, Stage::Counts, 0.0), c);
  for (double v : out.values()) {
    CHECK(v > 0.0);
    CHECK(v <= c.lambda_th_prime);
  }
}

TEST_CASE("af_lsc is deterministic and the trace composes") {
  const auto g = random_grid({32, 6, 5}, Stage::Counts, -5.0, 60.0, 4);
  AfConfig c;
  c.sigma_e = 4.0;
  const auto a = af_lsc(g, c);
  const auto t = af_lsc_trace(g, c);
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(a[i] == t.output[i]);
  const auto inv = vst_inverse(t.filtered);
  const auto pos = positivity_map(inv, c.lambda_th_prime);
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(pos[i] == t.output[i]);
}
