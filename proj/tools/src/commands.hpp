#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "lowsig/metrics.hpp"
#include "manifest.hpp"

namespace lowsig::cli {

enum class Method { Af, Ft, None };

/// Throws ConfigError for anything but "af", "ft" or "none".
Method parse_method(const std::string& name);
std::string to_string(Method m);

/// Inclusive detector-row range, written "a..b" or "a".
struct RowRange {
  std::size_t first = 0;
  std::size_t last = 0;
};
RowRange parse_rows(const std::string& text);

/// Writes projections_ideal, counts_ideal and counts_noisy grids.
ManifestEntry cmd_simulate(const RunConfig& cfg, const std::optional<std::filesystem::path>& phantom,
                           std::optional<std::uint64_t> seed, const std::filesystem::path& out);

/// Writes counts_corrected.
ManifestEntry cmd_correct(const std::filesystem::path& in, Method method, const RunConfig& cfg,
                          const std::filesystem::path& out);

/// Writes image_row<r> for every selected row. Counts inputs go through the
/// negative log with the configured i0 first.
ManifestEntry cmd_recon(const std::filesystem::path& in, const RunConfig& cfg, const std::filesystem::path& out,
                        std::optional<RowRange> rows);

struct RoiRecord {
  std::string image;
  std::string roi;
  double truth = 0.0;  // phantom attenuation at the ROI centre when known, else NaN
  metrics::RoiStats stats;
};

struct MetricsReport {
  std::vector<RoiRecord> rois;
  std::optional<metrics::NpsResult> nps;
  std::optional<metrics::MtfResult> mtf;
  ManifestEntry entry;
};

/// ROI statistics per image, one NPS over every (image, patch centre) and
/// the wire MTF of the image average. Writes roi_stats.csv, nps_profile.csv,
/// nps_integral.csv, mtf_profile.csv and mtf_crossings.csv as applicable.
MetricsReport cmd_metrics(const std::vector<std::filesystem::path>& images, const RunConfig& cfg,
                          const std::filesystem::path& out);

/// Runs every experiment of a repro description, writing all intermediates
/// and summary.{json,csv,md}. Returns the summary.
nlohmann::json cmd_repro(const std::filesystem::path& config, const std::filesystem::path& out,
                         std::optional<std::uint64_t> seed);

}  // namespace lowsig::cli
