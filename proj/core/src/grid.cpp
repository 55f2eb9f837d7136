#include "lowsig/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lowsig/error.hpp"

namespace lowsig {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Counts:
      return "counts";
    case Stage::Vst:
      return "vst";
    case Stage::Projection:
      return "projection";
  }
  return "unknown";
}

Stage stage_from_string(std::string_view name) {
  if (name == "counts") return Stage::Counts;
  if (name == "vst") return Stage::Vst;
  if (name == "projection") return Stage::Projection;
  throw DataError("unknown stage tag '" + std::string(name) + "'");
}

bool is_valid_transition(Stage from, Stage to) {
  return (from == Stage::Counts && to == Stage::Vst) || (from == Stage::Vst && to == Stage::Counts) ||
         (from == Stage::Counts && to == Stage::Projection);
}

SinogramGrid::SinogramGrid(Dims dims, Stage stage, double fill)
    : dims_(dims), stage_(stage), data_(dims.size(), fill) {
  if (dims.channels == 0 || dims.rows == 0 || dims.views == 0) {
    throw ConfigError("sinogram dimensions must be positive");
  }
}

SinogramGrid::SinogramGrid(Dims dims, Stage stage, std::vector<double> values)
    : dims_(dims), stage_(stage), data_(std::move(values)) {
  if (dims.channels == 0 || dims.rows == 0 || dims.views == 0) {
    throw ConfigError("sinogram dimensions must be positive");
  }
  if (data_.size() != dims.size()) {
    throw DataError("sinogram holds " + std::to_string(data_.size()) + " values, dims require " +
                    std::to_string(dims.size()));
  }
}

CellIndex SinogramGrid::cell(std::size_t flat) const {
  const std::size_t c = flat % dims_.channels;
  const std::size_t rest = flat / dims_.channels;
  return {static_cast<long>(c), static_cast<long>(rest % dims_.rows),
          static_cast<long>(rest / dims_.rows)};
}

SinogramGrid SinogramGrid::like(Stage next) const {
  if (next != stage_ && !is_valid_transition(stage_, next)) {
    throw std::logic_error("illegal stage transition " + std::string(to_string(stage_)) + " -> " +
                           std::string(to_string(next)));
  }
  return SinogramGrid(dims_, next, 0.0);
}

bool SinogramGrid::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

WindowSpec WindowSpec::from_full(int channels, int rows, int views) {
  for (int n : {channels, rows, views}) {
    if (n <= 0 || n % 2 == 0) {
      throw ConfigError("window sizes must be positive and odd, got " + std::to_string(channels) +
                        "x" + std::to_string(rows) + "x" + std::to_string(views));
    }
  }
  return {channels / 2, rows / 2, views / 2};
}

namespace {

void clip_axis(std::size_t extent, std::size_t at, int half, std::size_t& lo, std::size_t& hi) {
  const auto h = static_cast<std::size_t>(half);
  lo = at >= h ? at - h : 0;
  hi = std::min(extent - 1, at + h);
}

}  // namespace

WindowBounds clip_window(const Dims& dims, std::size_t channel, std::size_t row, std::size_t view,
                         const WindowSpec& w) {
  WindowBounds b{};
  clip_axis(dims.channels, channel, w.channel, b.c0, b.c1);
  clip_axis(dims.rows, row, w.row, b.r0, b.r1);
  clip_axis(dims.views, view, w.view, b.v0, b.v1);
  return b;
}

std::vector<Neighbor> window_indices(const Dims& dims, const CellIndex& center, const WindowSpec& w) {
  const auto in = [](long v, std::size_t extent) { return v >= 0 && static_cast<std::size_t>(v) < extent; };
  if (!in(center.channel, dims.channels) || !in(center.row, dims.rows) || !in(center.view, dims.views)) {
    throw std::out_of_range("window centre (" + std::to_string(center.channel) + "," +
                            std::to_string(center.row) + "," + std::to_string(center.view) +
                            ") outside grid");
  }
  const auto c = static_cast<std::size_t>(center.channel);
  const auto r = static_cast<std::size_t>(center.row);
  const auto v = static_cast<std::size_t>(center.view);
  const WindowBounds b = clip_window(dims, c, r, v, w);

  std::vector<Neighbor> out;
  out.reserve(b.count());
  for (std::size_t vv = b.v0; vv <= b.v1; ++vv) {
    for (std::size_t rr = b.r0; rr <= b.r1; ++rr) {
      for (std::size_t cc = b.c0; cc <= b.c1; ++cc) {
        out.push_back({cc + dims.channels * (rr + dims.rows * vv), static_cast<int>(cc) - static_cast<int>(c),
                       static_cast<int>(rr) - static_cast<int>(r), static_cast<int>(vv) - static_cast<int>(v)});
      }
    }
  }
  return out;
}

}  // namespace lowsig
