#pragma once

#include <optional>

#include "lowsig/grid.hpp"

namespace lowsig::af {

/// How the counts-domain local std is turned into the VST-domain range scale.
enum class SigmaRMode {
  /// sigma_r = K2 * sigma_hat / sqrt(mu_hat + 3/8): local std carried into
  /// VST units through the slope of the forward transform.
  VstSlope,
  /// sigma_r = K2 * sigma_hat with no unit conversion.
  Raw,
};

struct AfConfig {
  double sigma_e = 0.0;                   // electronic-noise std, counts
  std::optional<double> lambda_th;        // LLMMSE gate; default max(10, 3 sigma_e)
  double lambda_th_prime = 1.0;           // positivity gate, counts
  double k1 = 400.0;
  double k2 = 5.0;
  WindowSpec stats_window{3, 2, 1};       // 7x5x3
  WindowSpec bf_window{6, 3, 1};          // 13x7x3
  double mu_floor = 1.0;                  // counts
  double sigma_r_floor = 0.05;            // VST units
  SigmaRMode sigma_r_mode = SigmaRMode::VstSlope;

  double effective_lambda_th() const;

  /// Throws ConfigError when a positivity constraint is violated.
  void validate() const;
};

/// Per-cell bilateral scales: spatial (index units) and range (VST units).
struct AdaptiveParams {
  SinogramGrid sigma_d;
  SinogramGrid sigma_r;
};

/// LLMMSE pre-correction of cells at or below lambda_th:
///   eta = lav / (lav + sigma_e^2),  out = eta * lambda + (1 - eta) * lav
/// with lav floored at 0. Cells above the gate pass through untouched.
SinogramGrid llmmse_correct(const SinogramGrid& counts, const SinogramGrid& local_avg,
                            const AfConfig& cfg);

/// Anscombe transform 2 sqrt(x + 3/8), with x + 3/8 clamped at 0.
double anscombe(double counts);
SinogramGrid vst_forward(const SinogramGrid& counts);

AdaptiveParams adaptive_params(const SinogramGrid& mu_hat, const SinogramGrid& sigma_hat,
                               const AfConfig& cfg);

/// Normalised bilateral filter with Laplacian kernels,
///   W_j = exp(-|i-j| / sigma_d(i)) * exp(-|x_i - x_j| / sigma_r(i)),
/// where |i-j| is the Euclidean length of the integer offset. The centre
/// weight is 1, so the normaliser never vanishes. sigma_r may be +inf to
/// disable the range term.
SinogramGrid bilateral_filter(const SinogramGrid& x, const AdaptiveParams& p, const WindowSpec& w);

/// Closed-form unbiased inverse of the Anscombe transform. Returns 0 below
/// 2 sqrt(3/8), where the closed form is exactly 0.
double anscombe_inverse(double y);
SinogramGrid vst_inverse(const SinogramGrid& y);

/// lambda' * exp(x / lambda' - 1) for x < lambda', identity above.
double positivity(double counts, double lambda_th_prime);
SinogramGrid positivity_map(const SinogramGrid& counts, double lambda_th_prime);

/// Intermediate grids of one pipeline run, kept for inspection.
struct AfTrace {
  SinogramGrid mu_hat;
  SinogramGrid sigma_hat;
  SinogramGrid llmmse;
  SinogramGrid vst;
  AdaptiveParams params;
  SinogramGrid filtered;
  SinogramGrid inverse;
  SinogramGrid output;
};

AfTrace af_lsc_trace(const SinogramGrid& counts, const AfConfig& cfg);

/// Full adaptive-filtering low-signal correction; output strictly positive.
SinogramGrid af_lsc(const SinogramGrid& counts, const AfConfig& cfg);

}  // namespace lowsig::af
