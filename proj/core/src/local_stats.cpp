#include "lowsig/local_stats.hpp"

#include <cmath>

#include "lowsig/parallel.hpp"

namespace lowsig {

namespace {

// Visits every cell with its clipped window bounds; `fn(flat, bounds)`.
template <typename Fn>
void for_each_window(const Dims& d, const WindowSpec& w, Fn&& fn) {
  parallel_for(d.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t flat = begin; flat < end; ++flat) {
      const std::size_t c = flat % d.channels;
      const std::size_t r = (flat / d.channels) % d.rows;
      const std::size_t v = flat / (d.channels * d.rows);
      fn(flat, clip_window(d, c, r, v, w));
    }
  });
}

double window_sum(const SinogramGrid& g, const WindowBounds& b) {
  const Dims& d = g.dims();
  const auto x = g.values();
  double sum = 0.0;
  for (std::size_t v = b.v0; v <= b.v1; ++v) {
    for (std::size_t r = b.r0; r <= b.r1; ++r) {
      const std::size_t base = d.channels * (r + d.rows * v);
      for (std::size_t c = b.c0; c <= b.c1; ++c) sum += x[base + c];
    }
  }
  return sum;
}

double window_sq_dev(const SinogramGrid& g, const WindowBounds& b, double mean) {
  const Dims& d = g.dims();
  const auto x = g.values();
  double acc = 0.0;
  for (std::size_t v = b.v0; v <= b.v1; ++v) {
    for (std::size_t r = b.r0; r <= b.r1; ++r) {
      const std::size_t base = d.channels * (r + d.rows * v);
      for (std::size_t c = b.c0; c <= b.c1; ++c) {
        const double e = x[base + c] - mean;
        acc += e * e;
      }
    }
  }
  return acc;
}

}  // namespace

SinogramGrid local_mean(const SinogramGrid& grid, const WindowSpec& w) {
  SinogramGrid out(grid.dims(), grid.stage());
  for_each_window(grid.dims(), w, [&](std::size_t flat, const WindowBounds& b) {
    out[flat] = window_sum(grid, b) / static_cast<double>(b.count());
  });
  return out;
}

SinogramGrid local_std(const SinogramGrid& grid, const WindowSpec& w) {
  return local_stats(grid, w).std;
}

LocalStats local_stats(const SinogramGrid& grid, const WindowSpec& w) {
  LocalStats s{SinogramGrid(grid.dims(), grid.stage()), SinogramGrid(grid.dims(), grid.stage())};
  for_each_window(grid.dims(), w, [&](std::size_t flat, const WindowBounds& b) {
    const std::size_t n = b.count();
    const double mean = window_sum(grid, b) / static_cast<double>(n);
    s.mean[flat] = mean;
    s.std[flat] = n > 1 ? std::sqrt(window_sq_dev(grid, b, mean) / static_cast<double>(n - 1)) : 0.0;
  });
  return s;
}

}  // namespace lowsig
