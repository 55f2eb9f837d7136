#include "lowsig/recon.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "lowsig/error.hpp"
#include "lowsig/parallel.hpp"

namespace lowsig::recon {

SinogramGrid clamp_counts(const SinogramGrid& counts, double floor) {
  SinogramGrid out = counts;
  for (double& v : out.values()) v = std::max(v, floor);
  return out;
}

SinogramGrid neg_log(const SinogramGrid& counts, double i0) {
  if (!(i0 > 0.0)) throw ConfigError("i0 must be > 0");
  SinogramGrid out = counts.like(Stage::Projection);
  const auto x = counts.values();
  auto p = out.values();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) {
      const CellIndex at = counts.cell(i);
      std::ostringstream msg;
      msg << "non-positive counts " << x[i] << " at channel " << at.channel << ", row " << at.row << ", view "
          << at.view << "; apply a low-signal correction or clamp first";
      throw DataError(msg.str());
    }
    p[i] = -std::log(x[i] / i0);
  }
  return out;
}

namespace {

// Spectrum of the band-limited ramp, built from the sampled spatial kernel
// so that the DC term matches the discrete convolution exactly.
std::vector<double> ramp_response(const detail::RealFft& fft, double tau, Apodization window) {
  const std::size_t len = fft.length();
  std::vector<double> kernel(len, 0.0);
  kernel[0] = 1.0 / (4.0 * tau * tau);
  for (std::size_t k = 1; k <= len / 2; ++k) {
    if (k % 2 == 0) continue;
    const double v = -1.0 / (static_cast<double>(k * k) * std::numbers::pi * std::numbers::pi * tau * tau);
    kernel[k] = v;
    if (k != len - k) kernel[len - k] = v;
  }
  const auto spectrum = fft.forward(kernel);
  std::vector<double> response(spectrum.size());
  const double half = static_cast<double>(len / 2);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    double r = spectrum[k].real() * tau / static_cast<double>(len);
    if (window == Apodization::Hann) r *= 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(k) / half));
    response[k] = r;
  }
  return response;
}

}  // namespace

std::vector<double> ramp_filter_row(const SinogramGrid& projection, std::size_t row, const Geometry& g,
                                    Apodization window) {
  const Dims& d = projection.dims();
  if (d.channels != g.channels || d.views != g.views()) throw ConfigError("sinogram does not match geometry");
  if (row >= d.rows) throw ConfigError("row " + std::to_string(row) + " outside sinogram");
  const std::size_t len = std::bit_ceil(std::max<std::size_t>(2 * d.channels, 2));
  const detail::RealFft fft(len);
  const std::vector<double> response = ramp_response(fft, g.channel_pitch, window);

  std::vector<double> filtered(d.views * d.channels);
  parallel_for(d.views, [&](std::size_t begin, std::size_t end) {
    std::vector<double> view(d.channels);
    for (std::size_t v = begin; v < end; ++v) {
      for (std::size_t c = 0; c < d.channels; ++c) view[c] = projection(c, row, v);
      fft.filter(view, response, std::span<double>(filtered).subspan(v * d.channels, d.channels));
    }
  });
  return filtered;
}

Image fbp(const SinogramGrid& projection, std::size_t row, const Geometry& g, const FbpOptions& opts) {
  g.validate();
  const std::size_t views = g.views();
  if (views < 2) throw ConfigError("fbp needs at least 2 views");
  if (opts.n == 0) throw ConfigError("image size must be >= 1");
  const double step = std::numbers::pi / static_cast<double>(views);
  for (std::size_t v = 0; v < views; ++v) {
    if (std::abs(g.angles[v] - step * static_cast<double>(v)) > 1e-9) {
      throw ConfigError("fbp needs uniform view angles over [0, pi)");
    }
  }

  const std::vector<double> q = ramp_filter_row(projection, row, g, opts.window);
  const double pitch = opts.pitch > 0.0 ? opts.pitch : 2.0 * g.fov_radius / static_cast<double>(opts.n);
  Image img(opts.n, pitch);
  const std::size_t n = opts.n;
  const std::size_t channels = g.channels;
  const double tau = g.channel_pitch;
  const double centre = 0.5 * (static_cast<double>(channels) - 1.0);
  const double r2 = g.fov_radius * g.fov_radius;

  std::vector<double> cosines(views), sines(views);
  for (std::size_t v = 0; v < views; ++v) {
    cosines[v] = std::cos(g.angles[v]);
    sines[v] = std::sin(g.angles[v]);
  }

  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = 0; v < views; ++v) {
      const double* qv = q.data() + v * channels;
      const double du = pitch * cosines[v] / tau;
      for (std::size_t i = begin; i < end; ++i) {
        const double y = img.y_of(static_cast<double>(i));
        double u = (img.x_of(0.0) * cosines[v] + y * sines[v]) / tau + centre;
        double* out = img.data.data() + i * n;
        for (std::size_t j = 0; j < n; ++j, u += du) {
          const double fk = std::floor(u);
          if (fk < 0.0 || fk > static_cast<double>(channels - 1)) continue;
          const auto k = static_cast<std::size_t>(fk);
          const double frac = u - fk;
          const double hi = k + 1 < channels ? qv[k + 1] : 0.0;
          out[j] += qv[k] + frac * (hi - qv[k]);
        }
      }
    }
    for (std::size_t i = begin; i < end; ++i) {
      const double y = img.y_of(static_cast<double>(i));
      for (std::size_t j = 0; j < n; ++j) {
        const double x = img.x_of(static_cast<double>(j));
        double& px = img.at(i, j);
        px = x * x + y * y <= r2 ? px * step : 0.0;
      }
    }
  });
  return img;
}

}  // namespace lowsig::recon
