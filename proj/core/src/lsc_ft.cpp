#include "lowsig/lsc_ft.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "lowsig/error.hpp"
#include "lowsig/parallel.hpp"

namespace lowsig::ft {

void FtConfig::validate() const {
  if (!(upper_th > lower_th)) throw ConfigError("ft upper threshold must exceed the lower threshold");
  for (const WindowSpec* w : {&boxcar_window, &median_window}) {
    if (w->channel < 0 || w->row < 0 || w->view < 0) throw ConfigError("window half-widths must be >= 0");
  }
  if (!(floor > 0.0)) throw ConfigError("ft floor must be > 0");
}

namespace {

double boxcar(const SinogramGrid& g, const WindowBounds& b) {
  double sum = 0.0;
  for (std::size_t v = b.v0; v <= b.v1; ++v)
    for (std::size_t r = b.r0; r <= b.r1; ++r)
      for (std::size_t c = b.c0; c <= b.c1; ++c) sum += g(c, r, v);
  return sum / static_cast<double>(b.count());
}

double median(const SinogramGrid& g, const WindowBounds& b, std::vector<double>& scratch) {
  scratch.clear();
  for (std::size_t v = b.v0; v <= b.v1; ++v)
    for (std::size_t r = b.r0; r <= b.r1; ++r)
      for (std::size_t c = b.c0; c <= b.c1; ++c) scratch.push_back(g(c, r, v));
  const std::size_t n = scratch.size();
  const auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(scratch.begin(), mid, scratch.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(scratch.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

SinogramGrid ft_lsc(const SinogramGrid& counts, const FtConfig& cfg) {
  cfg.validate();
  if (counts.stage() != Stage::Counts) throw std::invalid_argument("ft_lsc expects a counts grid");
  const Dims& d = counts.dims();
  SinogramGrid out = counts;
  const auto in = counts.values();
  auto y = out.values();

  parallel_for(d.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch;
    scratch.reserve(cfg.median_window.cell_count());
    for (std::size_t i = begin; i < end; ++i) {
      const double x = in[i];
      const std::size_t c = i % d.channels;
      const std::size_t r = (i / d.channels) % d.rows;
      const std::size_t v = i / (d.channels * d.rows);
      double value = x;
      if (x < cfg.lower_th) {
        value = boxcar(counts, clip_window(d, c, r, v, cfg.boxcar_window));
      } else if (cfg.upper_enabled && x > cfg.upper_th) {
        value = median(counts, clip_window(d, c, r, v, cfg.median_window), scratch);
      }
      y[i] = std::max(value, cfg.floor);
    }
  });
  return out;
}

}  // namespace lowsig::ft
