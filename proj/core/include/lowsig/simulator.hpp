#pragma once

#include <cstdint>

#include "lowsig/grid.hpp"
#include "lowsig/phantom.hpp"
#include "lowsig/rng.hpp"

namespace lowsig::sim {

struct NoiseModel {
  double i0 = 1.0e5;      // air-scan counts per channel
  double sigma_e = 0.0;   // electronic noise std, counts
  std::uint64_t seed = 0;

  void validate() const;
};

/// Below this mean the Poisson sampler inverts the CDF exactly; at or above
/// it draws a rounded normal clamped at +-6 standard deviations.
inline constexpr double kPoissonExactBelow = 30.0;

/// Exact line integral of the phantom along one ray.
double line_integral(const Phantom& phantom, double theta, double offset);

/// Analytic parallel-beam projection, replicated across rows. Throws
/// ConfigError if the phantom does not fit inside the field of view.
SinogramGrid forward_project(const Phantom& phantom, const Geometry& g);

/// Beer-Lambert: I0 * exp(-p).
SinogramGrid counts_from_projection(const SinogramGrid& projection, double i0);

/// One Poisson draw using the sampler described at kPoissonExactBelow.
std::int64_t sample_poisson(double mean, CellRng& rng);

/// Poisson(lambda) + N(0, sigma_e^2) per cell, seeded from (seed, cell).
SinogramGrid add_noise(const SinogramGrid& ideal_counts, const NoiseModel& nm);

}  // namespace lowsig::sim
