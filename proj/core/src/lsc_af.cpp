#include "lowsig/lsc_af.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lowsig/error.hpp"
#include "lowsig/local_stats.hpp"
#include "lowsig/parallel.hpp"

namespace lowsig::af {

namespace {

constexpr double kThreeEighths = 3.0 / 8.0;

// Neighbours whose combined kernel exponent exceeds this contribute less than
// 4e-18 of the centre weight and are skipped.
constexpr double kExponentCutoff = 40.0;

void require_aligned(const SinogramGrid& a, const SinogramGrid& b, const char* what) {
  if (a.dims() != b.dims()) throw std::invalid_argument(std::string(what) + ": grid dims differ");
}

}  // namespace

double AfConfig::effective_lambda_th() const {
  return lambda_th.value_or(std::max(10.0, 3.0 * sigma_e));
}

void AfConfig::validate() const {
  if (!(sigma_e >= 0.0) || !std::isfinite(sigma_e)) throw ConfigError("sigma_e must be >= 0");
  if (!(lambda_th_prime > 0.0)) throw ConfigError("lambda_th_prime must be > 0");
  if (!(k1 > 0.0)) throw ConfigError("k1 must be > 0");
  if (!(k2 > 0.0)) throw ConfigError("k2 must be > 0");
  if (!(mu_floor > 0.0)) throw ConfigError("mu_floor must be > 0");
  if (!(sigma_r_floor > 0.0)) throw ConfigError("sigma_r_floor must be > 0");
  if (lambda_th && !std::isfinite(*lambda_th)) throw ConfigError("lambda_th must be finite");
  for (const WindowSpec* w : {&stats_window, &bf_window}) {
    if (w->channel < 0 || w->row < 0 || w->view < 0) throw ConfigError("window half-widths must be >= 0");
  }
}

SinogramGrid llmmse_correct(const SinogramGrid& counts, const SinogramGrid& local_avg, const AfConfig& cfg) {
  require_aligned(counts, local_avg, "llmmse_correct");
  const double gate = cfg.effective_lambda_th();
  const double noise_var = cfg.sigma_e * cfg.sigma_e;
  SinogramGrid out = counts;
  auto y = out.values();
  const auto lav = local_avg.values();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] > gate) continue;
    const double avg = std::max(lav[i], 0.0);
    const double denom = avg + noise_var;
    const double eta = denom > 0.0 ? avg / denom : 1.0;
    y[i] = eta * y[i] + (1.0 - eta) * avg;
  }
  return out;
}

double anscombe(double counts) { return 2.0 * std::sqrt(std::max(counts + kThreeEighths, 0.0)); }

SinogramGrid vst_forward(const SinogramGrid& counts) {
  SinogramGrid out = counts.like(Stage::Vst);
  const auto x = counts.values();
  auto y = out.values();
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = anscombe(x[i]);
  return out;
}

AdaptiveParams adaptive_params(const SinogramGrid& mu_hat, const SinogramGrid& sigma_hat, const AfConfig& cfg) {
  require_aligned(mu_hat, sigma_hat, "adaptive_params");
  AdaptiveParams p{SinogramGrid(mu_hat.dims(), Stage::Vst), SinogramGrid(mu_hat.dims(), Stage::Vst)};
  const auto mu = mu_hat.values();
  const auto sd = sigma_hat.values();
  auto sigma_d = p.sigma_d.values();
  auto sigma_r = p.sigma_r.values();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double level = std::max(mu[i], cfg.mu_floor);
    sigma_d[i] = cfg.k1 / level;
    const double spread = cfg.sigma_r_mode == SigmaRMode::VstSlope ? sd[i] / std::sqrt(level + kThreeEighths) : sd[i];
    sigma_r[i] = std::max(cfg.k2 * spread, cfg.sigma_r_floor);
  }
  return p;
}

SinogramGrid bilateral_filter(const SinogramGrid& x, const AdaptiveParams& p, const WindowSpec& w) {
  require_aligned(x, p.sigma_d, "bilateral_filter");
  require_aligned(x, p.sigma_r, "bilateral_filter");
  const Dims& d = x.dims();

  const std::size_t fc = static_cast<std::size_t>(w.full_channels());
  const std::size_t fr = static_cast<std::size_t>(w.full_rows());
  std::vector<double> distance(w.cell_count());
  for (int dv = -w.view; dv <= w.view; ++dv) {
    for (int dr = -w.row; dr <= w.row; ++dr) {
      for (int dc = -w.channel; dc <= w.channel; ++dc) {
        const std::size_t k = static_cast<std::size_t>(dc + w.channel) +
                              fc * (static_cast<std::size_t>(dr + w.row) + fr * static_cast<std::size_t>(dv + w.view));
        distance[k] = std::sqrt(static_cast<double>(dc * dc + dr * dr + dv * dv));
      }
    }
  }

  SinogramGrid out(d, x.stage());
  const auto in = x.values();
  const auto sigma_d = p.sigma_d.values();
  const auto sigma_r = p.sigma_r.values();
  auto y = out.values();

  parallel_for(d.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t c = i % d.channels;
      const std::size_t r = (i / d.channels) % d.rows;
      const std::size_t v = i / (d.channels * d.rows);
      const WindowBounds b = clip_window(d, c, r, v, w);
      const double xi = in[i];
      const double inv_sd = 1.0 / sigma_d[i];
      const double inv_sr = std::isinf(sigma_r[i]) ? 0.0 : 1.0 / sigma_r[i];

      double num = xi;
      double den = 1.0;
      for (std::size_t vv = b.v0; vv <= b.v1; ++vv) {
        const std::size_t kv = fr * (vv + static_cast<std::size_t>(w.view) - v);
        for (std::size_t rr = b.r0; rr <= b.r1; ++rr) {
          const std::size_t base = d.channels * (rr + d.rows * vv);
          const std::size_t kr = fc * (rr + static_cast<std::size_t>(w.row) - r + kv);
          for (std::size_t cc = b.c0; cc <= b.c1; ++cc) {
            const std::size_t j = base + cc;
            if (j == i) continue;
            const double xj = in[j];
            const double arg = distance[kr + cc + static_cast<std::size_t>(w.channel) - c] * inv_sd +
                               std::abs(xj - xi) * inv_sr;
            if (arg > kExponentCutoff) continue;
            const double wt = std::exp(-arg);
            num += wt * xj;
            den += wt;
          }
        }
      }
      y[i] = num / den;
    }
  });
  return out;
}

double anscombe_inverse(double y) {
  static const double y_min = 2.0 * std::sqrt(kThreeEighths);
  static const double root = std::sqrt(1.5);
  if (!(y >= y_min)) return 0.0;
  const double inv = 1.0 / y;
  const double inv2 = inv * inv;
  const double value =
      0.25 * y * y + 0.25 * root * inv - 11.0 / 8.0 * inv2 + 5.0 / 8.0 * root * inv2 * inv - 1.0 / 8.0;
  return std::max(value, 0.0);
}

SinogramGrid vst_inverse(const SinogramGrid& y) {
  SinogramGrid out = y.like(Stage::Counts);
  const auto in = y.values();
  auto x = out.values();
  for (std::size_t i = 0; i < in.size(); ++i) x[i] = anscombe_inverse(in[i]);
  return out;
}

double positivity(double counts, double lambda_th_prime) {
  if (counts >= lambda_th_prime) return counts;
  return std::max(lambda_th_prime * std::exp(counts / lambda_th_prime - 1.0), std::numeric_limits<double>::min());
}

SinogramGrid positivity_map(const SinogramGrid& counts, double lambda_th_prime) {
  if (!(lambda_th_prime > 0.0)) throw ConfigError("lambda_th_prime must be > 0");
  SinogramGrid out = counts;
  for (double& v : out.values()) v = positivity(v, lambda_th_prime);
  return out;
}

AfTrace af_lsc_trace(const SinogramGrid& counts, const AfConfig& cfg) {
  cfg.validate();
  if (counts.stage() != Stage::Counts) throw std::invalid_argument("af_lsc expects a counts grid");
  if (!counts.all_finite()) throw DataError("af_lsc input contains non-finite values");

  AfTrace t;
  LocalStats stats = local_stats(counts, cfg.stats_window);
  t.mu_hat = std::move(stats.mean);
  t.sigma_hat = std::move(stats.std);
  t.llmmse = llmmse_correct(counts, t.mu_hat, cfg);
  t.vst = vst_forward(t.llmmse);
  t.params = adaptive_params(t.mu_hat, t.sigma_hat, cfg);
  t.filtered = bilateral_filter(t.vst, t.params, cfg.bf_window);
  t.inverse = vst_inverse(t.filtered);
  t.output = positivity_map(t.inverse, cfg.lambda_th_prime);
  return t;
}

SinogramGrid af_lsc(const SinogramGrid& counts, const AfConfig& cfg) { return af_lsc_trace(counts, cfg).output; }

}  // namespace lowsig::af
