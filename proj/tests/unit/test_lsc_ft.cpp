#include <doctest.h>

#include <algorithm>
#include <random>

#include "lowsig/error.hpp"
#include "lowsig/lsc_ft.hpp"

using namespace lowsig;
using namespace lowsig::ft;

TEST_CASE("cells inside the band pass through") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(25.0, 9000.0);
  SinogramGrid g({30, 5, 4}, Stage::Counts);
  for (double& v : g.values()) v = u(gen);
  const auto out = ft_lsc(g, FtConfig{});
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(out[i] == g[i]);
}

TEST_CASE("gated cells take the box-car mean of the input") {
  SinogramGrid g({5, 1, 1}, Stage::Counts, std::vector<double>{0, 0, 9, 0, 0});
  FtConfig c;
  c.lower_th = 1.0;
  c.boxcar_window = {1, 0, 0};
  c.median_window = {1, 0, 0};
  const auto out = ft_lsc(g, c);
  const double want[] = {1e-3, 3, 9, 3, 1e-3};
  for (std::size_t i = 0; i < 5; ++i) CHECK(out[i] == doctest::Approx(want[i]).epsilon(1e-14));
}

TEST_CASE("constant above the upper threshold is unchanged") {
  const auto out = ft_lsc(SinogramGrid({9, 4, 3}, Stage::Counts, 2.0e4), FtConfig{});
  for (double v : out.values()) CHECK(v == 2.0e4);
}

TEST_CASE("upper gate takes the window median") {
  SinogramGrid g({4, 1, 1}, Stage::Counts, std::vector<double>{2e4, 5e4, 3e4, 1e5});
  FtConfig c;
  c.median_window = {1, 0, 0};
  const auto out = ft_lsc(g, c);
  CHECK(out[0] == doctest::Approx(3.5e4));  // {2e4, 5e4}: mean of the middle pair
  CHECK(out[1] == doctest::Approx(3e4));
  CHECK(out[2] == doctest::Approx(5e4));
  CHECK(out[3] == doctest::Approx(6.5e4));
  c.upper_enabled = false;
  const auto off = ft_lsc(g, c);
  for (std::size_t i = 0; i < 4; ++i) CHECK(off[i] == g[i]);
}

TEST_CASE("output is floored and stays within the input range") {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd(5.0, 8.0);
  SinogramGrid g({40, 5, 5}, Stage::Counts);
  for (double& v : g.values()) v = nd(gen);
  const double hi = *std::max_element(g.values().begin(), g.values().end());
  const auto out = ft_lsc(g, FtConfig{});
  for (double v : out.values()) {
    CHECK(v >= 1e-3);
    CHECK(v <= std::max(hi, 1e-3));
  }
}

TEST_CASE("invalid thresholds") {
  FtConfig c;
  c.lower_th = 2e4;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
