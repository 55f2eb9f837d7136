#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "lowsig/recon.hpp"

namespace lowsig::metrics {

/// Disc ROI in pixel coordinates (col = x, row = y).
struct DiscRoi {
  double col = 0.0;
  double row = 0.0;
  double radius = 0.0;
};

/// Inclusive pixel rectangle.
struct RectRoi {
  std::size_t row0 = 0, col0 = 0, row1 = 0, col1 = 0;
};

using RoiSpec = std::variant<DiscRoi, RectRoi>;

struct RoiStats {
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
};

/// Sample mean and (n-1) std over the ROI. Throws ConfigError if any part of
/// the ROI lies outside the image.
RoiStats roi_stats(const recon::Image& img, const RoiSpec& roi);

/// Square patch of an image.
struct Patch {
  std::size_t size = 0;
  std::vector<double> data;  // row-major
};

/// size x size patch whose top-left corner is (row0, col0).
Patch extract_patch(const recon::Image& img, std::size_t row0, std::size_t col0, std::size_t size);

struct RadialProfile {
  std::vector<double> frequency;  // bin centres, cm^-1
  std::vector<double> value;
  std::vector<std::size_t> count;
};

struct NpsResult {
  RadialProfile profile;
  std::size_t size = 0;
  std::size_t patches = 0;
  double frequency_step = 0.0;  // cm^-1
  std::vector<double> nps2d;    // size x size, DC at index 0
  double integral = 0.0;        // sum(nps2d) * df^2, ~ pixel variance
};

/// Ensemble noise power spectrum. Each patch has the ensemble-mean patch
/// removed; |DFT|^2 * pitch^2 / (size^2) is averaged over patches and scaled
/// by M/(M-1) for the lost degree of freedom. Needs at least 8 patches of
/// identical size.
NpsResult nps_radial(std::span<const Patch> patches, double pitch);

struct MtfOptions {
  std::size_t patch = 64;
  double background_inner = 24.0;  // pixels
  double background_outer = 31.0;
  // Negatives are zeroed only outside the background annulus: clamping inside
  // it rectifies the noise and inflates the DC bin.
  double core_radius = 31.0;
};

struct MtfCrossings {
  std::optional<double> f50;
  std::optional<double> f10;
  std::optional<double> f4;
};

struct MtfResult {
  RadialProfile profile;  // normalised to 1 at DC, bins up to Nyquist
  MtfCrossings crossings;
};

/// Radial MTF of a wire image. `wire_row`/`wire_col` are pixel coordinates;
/// the patch is centred on the nearest pixel.
MtfResult mtf_from_wire(const recon::Image& img, double wire_row, double wire_col,
                        const MtfOptions& opts = {});

/// Same procedure on an already extracted PSF patch.
MtfResult mtf_from_psf(const Patch& psf, double pitch, const MtfOptions& opts = {});

/// First frequency where the profile drops to `level`, linearly
/// interpolated between adjacent bins.
std::optional<double> crossing(const RadialProfile& profile, double level);

/// Radial average of a size x size spectrum (DC at index 0) in bins one
/// frequency step wide; bins beyond `max_bin` are dropped.
RadialProfile radial_average(std::span<const double> spectrum, std::size_t size,
                             double frequency_step, std::size_t max_bin);

}  // namespace lowsig::metrics
