#include "lowsig/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lowsig/error.hpp"
#include "lowsig/parallel.hpp"

namespace lowsig::sim {

void NoiseModel::validate() const {
  if (!(i0 > 0.0) || !std::isfinite(i0)) throw ConfigError("noise: i0 must be > 0");
  if (!(sigma_e >= 0.0) || !std::isfinite(sigma_e)) throw ConfigError("noise: sigma_e must be >= 0");
}

double line_integral(const Phantom& phantom, double theta, double offset) {
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  double total = 0.0;
  for (const Ellipse& e : phantom.ellipses) {
    const double s = offset - (e.cx * cs + e.cy * sn);
    const double local = theta - e.angle;
    const double cl = std::cos(local);
    const double sl = std::sin(local);
    const double r2 = e.a * e.a * cl * cl + e.b * e.b * sl * sl;
    if (s * s < r2) total += e.mu * 2.0 * e.a * e.b * std::sqrt(r2 - s * s) / r2;
  }
  if (phantom.wire) {
    const Wire& w = *phantom.wire;
    const double s = offset - (w.cx * cs + w.cy * sn);
    const double r2 = w.radius * w.radius;
    if (s * s < r2) total += w.mu * 2.0 * std::sqrt(r2 - s * s);
  }
  return total;
}

SinogramGrid forward_project(const Phantom& phantom, const Geometry& g) {
  phantom.validate();
  g.validate();
  if (phantom.extent() > g.fov_radius) {
    std::ostringstream msg;
    msg << "phantom extends to " << phantom.extent() << " cm, outside the " << g.fov_radius << " cm field of view";
    throw ConfigError(msg.str());
  }
  SinogramGrid out(Dims{g.channels, g.rows, g.views()}, Stage::Projection);
  parallel_for(g.views(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      for (std::size_t c = 0; c < g.channels; ++c) {
        const double p = line_integral(phantom, g.angles[v], g.channel_offset(c));
        for (std::size_t r = 0; r < g.rows; ++r) out(c, r, v) = p;
      }
    }
  });
  return out;
}

SinogramGrid counts_from_projection(const SinogramGrid& projection, double i0) {
  if (!(i0 > 0.0)) throw ConfigError("i0 must be > 0");
  SinogramGrid out(projection.dims(), Stage::Counts);
  const auto p = projection.values();
  auto y = out.values();
  for (std::size_t i = 0; i < p.size(); ++i) y[i] = i0 * std::exp(-p[i]);
  return out;
}

std::int64_t sample_poisson(double mean, CellRng& rng) {
  if (!(mean > 0.0)) return 0;
  if (mean < kPoissonExactBelow) {
    const double u = rng.uniform();
    double term = std::exp(-mean);
    double cdf = term;
    std::int64_t k = 0;
    while (u > cdf && k < 1000) {
      ++k;
      term *= mean / static_cast<double>(k);
      cdf += term;
    }
    return k;
  }
  const double z = std::clamp(rng.normal(), -6.0, 6.0);
  return std::max<std::int64_t>(0, std::llround(mean + std::sqrt(mean) * z));
}

SinogramGrid add_noise(const SinogramGrid& ideal_counts, const NoiseModel& nm) {
  nm.validate();
  SinogramGrid out(ideal_counts.dims(), Stage::Counts);
  const auto lambda = ideal_counts.values();
  auto y = out.values();
  parallel_for(lambda.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      CellRng rng(nm.seed, i);
      double value = static_cast<double>(sample_poisson(lambda[i], rng));
      if (nm.sigma_e > 0.0) value += nm.sigma_e * rng.normal();
      y[i] = value;
    }
  });
  return out;
}

}  // namespace lowsig::sim
