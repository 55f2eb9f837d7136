#pragma once

#include <cstddef>
#include <vector>

#include "lowsig/grid.hpp"
#include "lowsig/phantom.hpp"

namespace lowsig::recon {

/// N x N slice in cm^-1, row-major. Pixel (i, j) sits at
///   x = (j - (N-1)/2) * pitch,  y = ((N-1)/2 - i) * pitch,
/// so row 0 is the top of the image (largest y).
struct Image {
  std::size_t n = 0;
  double pitch = 0.0;  // cm
  std::vector<double> data;

  Image() = default;
  Image(std::size_t size, double pixel_pitch, double fill = 0.0)
      : n(size), pitch(pixel_pitch), data(size * size, fill) {}

  double& at(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * n + j]; }

  double x_of(double j) const { return (j - 0.5 * (static_cast<double>(n) - 1.0)) * pitch; }
  double y_of(double i) const { return (0.5 * (static_cast<double>(n) - 1.0) - i) * pitch; }
  /// Fractional column/row of a physical position.
  double col_of(double x) const { return x / pitch + 0.5 * (static_cast<double>(n) - 1.0); }
  double row_of(double y) const { return 0.5 * (static_cast<double>(n) - 1.0) - y / pitch; }
};

/// Counts floor used by the uncorrected pipeline before the log.
inline constexpr double kUncorrectedFloor = 1.0e-3;

SinogramGrid clamp_counts(const SinogramGrid& counts, double floor);

/// p = -ln(counts / I0). Throws DataError naming the first non-positive cell.
SinogramGrid neg_log(const SinogramGrid& counts, double i0);

enum class Apodization { RamLak, Hann };

struct FbpOptions {
  std::size_t n = 512;
  double pitch = 0.0;  // cm; 0 means the image square inscribes the FOV circle
  Apodization window = Apodization::RamLak;
};

/// Filtered backprojection of one detector row. Views must be uniform over
/// [0, pi); pixels outside the FOV circle are 0.
Image fbp(const SinogramGrid& projection, std::size_t row, const Geometry& g,
          const FbpOptions& opts = {});

/// The ramp-filtered views of one row (view-major, C values per view).
std::vector<double> ramp_filter_row(const SinogramGrid& projection, std::size_t row,
                                    const Geometry& g, Apodization window);

}  // namespace lowsig::recon
