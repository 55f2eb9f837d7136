#include "lowsig/metrics.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "fft.hpp"
#include "lowsig/error.hpp"

namespace lowsig::metrics {

namespace {

template <typename Fn>
void for_each_roi_pixel(const recon::Image& img, const RoiSpec& roi, Fn&& fn) {
  const double last = static_cast<double>(img.n) - 1.0;
  if (const auto* disc = std::get_if<DiscRoi>(&roi)) {
    if (!(disc->radius >= 0.0) || disc->col - disc->radius < 0.0 || disc->row - disc->radius < 0.0 ||
        disc->col + disc->radius > last || disc->row + disc->radius > last) {
      throw ConfigError("disc ROI at (" + std::to_string(disc->row) + ", " + std::to_string(disc->col) +
                        ") radius " + std::to_string(disc->radius) + " is not inside the image");
    }
    const auto i0 = static_cast<std::size_t>(std::ceil(disc->row - disc->radius));
    const auto i1 = static_cast<std::size_t>(std::floor(disc->row + disc->radius));
    const auto j0 = static_cast<std::size_t>(std::ceil(disc->col - disc->radius));
    const auto j1 = static_cast<std::size_t>(std::floor(disc->col + disc->radius));
    const double r2 = disc->radius * disc->radius;
    for (std::size_t i = i0; i <= i1; ++i) {
      for (std::size_t j = j0; j <= j1; ++j) {
        const double di = static_cast<double>(i) - disc->row;
        const double dj = static_cast<double>(j) - disc->col;
        if (di * di + dj * dj <= r2) fn(img.at(i, j));
      }
    }
    return;
  }
  const auto& rect = std::get<RectRoi>(roi);
  if (rect.row0 > rect.row1 || rect.col0 > rect.col1 || rect.row1 >= img.n || rect.col1 >= img.n) {
    throw ConfigError("rectangular ROI is not inside the image");
  }
  for (std::size_t i = rect.row0; i <= rect.row1; ++i)
    for (std::size_t j = rect.col0; j <= rect.col1; ++j) fn(img.at(i, j));
}

std::ptrdiff_t signed_frequency(std::size_t k, std::size_t n) {
  return k <= n / 2 ? static_cast<std::ptrdiff_t>(k) : static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(n);
}

}  // namespace

RoiStats roi_stats(const recon::Image& img, const RoiSpec& roi) {
  RoiStats s;
  double sum = 0.0;
  for_each_roi_pixel(img, roi, [&](double v) {
    sum += v;
    ++s.count;
  });
  if (s.count == 0) throw ConfigError("ROI contains no pixels");
  s.mean = sum / static_cast<double>(s.count);
  double acc = 0.0;
  for_each_roi_pixel(img, roi, [&](double v) { acc += (v - s.mean) * (v - s.mean); });
  s.std = s.count > 1 ? std::sqrt(acc / static_cast<double>(s.count - 1)) : 0.0;
  return s;
}

Patch extract_patch(const recon::Image& img, std::size_t row0, std::size_t col0, std::size_t size) {
  if (size == 0 || row0 + size > img.n || col0 + size > img.n) {
    throw ConfigError("patch at (" + std::to_string(row0) + ", " + std::to_string(col0) + ") size " +
                      std::to_string(size) + " is not inside the image");
  }
  Patch p{size, std::vector<double>(size * size)};
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) p.data[i * size + j] = img.at(row0 + i, col0 + j);
  return p;
}

RadialProfile radial_average(std::span<const double> spectrum, std::size_t size, double frequency_step,
                             std::size_t max_bin) {
  std::vector<double> sum(max_bin + 1, 0.0);
  std::vector<std::size_t> count(max_bin + 1, 0);
  for (std::size_t ky = 0; ky < size; ++ky) {
    const auto fy = static_cast<double>(signed_frequency(ky, size));
    for (std::size_t kx = 0; kx < size; ++kx) {
      const auto fx = static_cast<double>(signed_frequency(kx, size));
      const auto bin = static_cast<std::size_t>(std::lround(std::sqrt(fx * fx + fy * fy)));
      if (bin > max_bin) continue;
      sum[bin] += spectrum[ky * size + kx];
      ++count[bin];
    }
  }
  RadialProfile p;
  for (std::size_t b = 0; b <= max_bin; ++b) {
    if (count[b] == 0) continue;
    p.frequency.push_back(static_cast<double>(b) * frequency_step);
    p.value.push_back(sum[b] / static_cast<double>(count[b]));
    p.count.push_back(count[b]);
  }
  return p;
}

NpsResult nps_radial(std::span<const Patch> patches, double pitch) {
  if (patches.size() < 8) throw ConfigError("NPS needs at least 8 patches, got " + std::to_string(patches.size()));
  if (!(pitch > 0.0)) throw ConfigError("pixel pitch must be > 0");
  const std::size_t size = patches.front().size;
  for (const Patch& p : patches) {
    if (p.size != size || p.data.size() != size * size) throw ConfigError("NPS patches must share one shape");
  }
  const std::size_t cells = size * size;
  const auto m = static_cast<double>(patches.size());

  std::vector<double> mean(cells, 0.0);
  for (const Patch& p : patches)
    for (std::size_t k = 0; k < cells; ++k) mean[k] += p.data[k];
  for (double& v : mean) v /= m;

  NpsResult r;
  r.size = size;
  r.patches = patches.size();
  r.frequency_step = 1.0 / (static_cast<double>(size) * pitch);
  r.nps2d.assign(cells, 0.0);
  const double scale = pitch * pitch / static_cast<double>(cells) / m * (m / (m - 1.0));
  std::vector<double> residual(cells);
  for (const Patch& p : patches) {
    for (std::size_t k = 0; k < cells; ++k) residual[k] = p.data[k] - mean[k];
    const auto spectrum = detail::dft2(residual, size);
    for (std::size_t k = 0; k < cells; ++k) r.nps2d[k] += std::norm(spectrum[k]) * scale;
  }
  double total = 0.0;
  for (double v : r.nps2d) total += v;
  r.integral = total * r.frequency_step * r.frequency_step;
  r.profile = radial_average(r.nps2d, size, r.frequency_step, size / 2);
  return r;
}

std::optional<double> crossing(const RadialProfile& profile, double level) {
  for (std::size_t k = 1; k < profile.value.size(); ++k) {
    const double prev = profile.value[k - 1];
    const double cur = profile.value[k];
    if (prev > level && cur <= level) {
      const double t = (prev - level) / (prev - cur);
      return profile.frequency[k - 1] + t * (profile.frequency[k] - profile.frequency[k - 1]);
    }
  }
  return std::nullopt;
}

MtfResult mtf_from_psf(const Patch& psf, double pitch, const MtfOptions& opts) {
  if (!(pitch > 0.0)) throw ConfigError("pixel pitch must be > 0");
  const std::size_t size = psf.size;
  const double centre = static_cast<double>(size / 2);

  double bg_sum = 0.0;
  std::size_t bg_count = 0;
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      const double r = std::hypot(static_cast<double>(i) - centre, static_cast<double>(j) - centre);
      if (r >= opts.background_inner && r <= opts.background_outer) {
        bg_sum += psf.data[i * size + j];
        ++bg_count;
      }
    }
  }
  const double background = bg_count > 0 ? bg_sum / static_cast<double>(bg_count) : 0.0;

  std::vector<double> clean(size * size);
  double total = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      double v = psf.data[i * size + j] - background;
      const double r = std::hypot(static_cast<double>(i) - centre, static_cast<double>(j) - centre);
      if (r > opts.core_radius && v < 0.0) v = 0.0;
      clean[i * size + j] = v;
      total += v;
    }
  }
  if (!(total > 0.0)) throw DataError("wire not found: background-corrected PSF sum is not positive");

  const auto spectrum = detail::dft2(clean, size);
  std::vector<double> magnitude(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) magnitude[k] = std::abs(spectrum[k]);

  MtfResult r;
  r.profile = radial_average(magnitude, size, 1.0 / (static_cast<double>(size) * pitch), size / 2);
  const double dc = r.profile.value.front();
  for (double& v : r.profile.value) v /= dc;
  r.profile.value.front() = 1.0;
  r.crossings = {crossing(r.profile, 0.5), crossing(r.profile, 0.1), crossing(r.profile, 0.04)};
  return r;
}

MtfResult mtf_from_wire(const recon::Image& img, double wire_row, double wire_col, const MtfOptions& opts) {
  const long half = static_cast<long>(opts.patch / 2);
  const long row0 = std::lround(wire_row) - half;
  const long col0 = std::lround(wire_col) - half;
  if (row0 < 0 || col0 < 0) throw ConfigError("wire patch is not inside the image");
  const Patch p = extract_patch(img, static_cast<std::size_t>(row0), static_cast<std::size_t>(col0), opts.patch);
  return mtf_from_psf(p, img.pitch, opts);
}

}  // namespace lowsig::metrics
