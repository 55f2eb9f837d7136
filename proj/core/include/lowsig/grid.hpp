#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace lowsig {

/// What the values in a sinogram currently mean.
enum class Stage { Counts, Vst, Projection };

std::string_view to_string(Stage stage);
Stage stage_from_string(std::string_view name);

/// Pipeline stages move Counts -> Vst -> Counts -> Projection only.
bool is_valid_transition(Stage from, Stage to);

struct Dims {
  std::size_t channels = 1;
  std::size_t rows = 1;
  std::size_t views = 1;

  std::size_t size() const { return channels * rows * views; }
  bool operator==(const Dims&) const = default;
};

/// Integer position of a cell. Signed so that window offsets can be applied
/// before bounds checks.
struct CellIndex {
  long channel = 0;
  long row = 0;
  long view = 0;

  bool operator==(const CellIndex&) const = default;
};

/// Dense channel x row x view array, channel-fastest.
class SinogramGrid {
 public:
  SinogramGrid() = default;
  SinogramGrid(Dims dims, Stage stage, double fill = 0.0);
  SinogramGrid(Dims dims, Stage stage, std::vector<double> values);

  const Dims& dims() const { return dims_; }
  Stage stage() const { return stage_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  std::size_t index(std::size_t channel, std::size_t row, std::size_t view) const {
    return channel + dims_.channels * (row + dims_.rows * view);
  }
  CellIndex cell(std::size_t flat) const;

  double& operator()(std::size_t channel, std::size_t row, std::size_t view) {
    return data_[index(channel, row, view)];
  }
  double operator()(std::size_t channel, std::size_t row, std::size_t view) const {
    return data_[index(channel, row, view)];
  }
  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  /// Same dims, new stage tag, zero-filled. Throws std::logic_error if the
  /// stage change is not a legal pipeline transition.
  SinogramGrid like(Stage next) const;

  bool all_finite() const;

 private:
  Dims dims_{};
  Stage stage_ = Stage::Counts;
  std::vector<double> data_;
};

/// Per-axis half widths of a box window; the full window is (2h+1) per axis.
struct WindowSpec {
  int channel = 0;
  int row = 0;
  int view = 0;

  /// From odd full sizes, e.g. 7x5x3 -> (3,2,1). Throws ConfigError on even
  /// or non-positive sizes.
  static WindowSpec from_full(int channels, int rows, int views);

  int full_channels() const { return 2 * channel + 1; }
  int full_rows() const { return 2 * row + 1; }
  int full_views() const { return 2 * view + 1; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(full_channels()) * full_rows() * full_views();
  }
  bool operator==(const WindowSpec&) const = default;
};

/// In-bounds part of the window centred on one cell.
struct WindowBounds {
  std::size_t c0, c1, r0, r1, v0, v1;  // inclusive

  std::size_t count() const { return (c1 - c0 + 1) * (r1 - r0 + 1) * (v1 - v0 + 1); }
};

WindowBounds clip_window(const Dims& dims, std::size_t channel, std::size_t row,
                         std::size_t view, const WindowSpec& w);

struct Neighbor {
  std::size_t flat;
  int d_channel;
  int d_row;
  int d_view;
};

/// Every in-bounds cell within the window around `center`, including the
/// centre itself. Throws std::out_of_range if `center` is outside the grid.
std::vector<Neighbor> window_indices(const Dims& dims, const CellIndex& center,
                                     const WindowSpec& w);

}  // namespace lowsig
