#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lowsig/lsc_af.hpp"
#include "lowsig/lsc_ft.hpp"
#include "lowsig/phantom.hpp"
#include "lowsig/recon.hpp"
#include "lowsig/simulator.hpp"

namespace lowsig::cli {

/// A flat JSON run configuration plus the directory relative paths resolve
/// against. Unknown keys are rejected so that typos surface as errors.
struct RunConfig {
  nlohmann::json doc = nlohmann::json::object();
  std::filesystem::path base_dir = ".";
  std::string origin = "<defaults>";

  static RunConfig load(const std::filesystem::path& path);
  static RunConfig from_json(nlohmann::json doc, std::filesystem::path base_dir, std::string origin);

  bool has(const char* key) const { return doc.contains(key); }
  std::filesystem::path resolve(const std::string& relative) const;
};

nlohmann::json load_json(const std::filesystem::path& path);

af::AfConfig af_config(const RunConfig& cfg);
ft::FtConfig ft_config(const RunConfig& cfg);
Geometry geometry(const RunConfig& cfg);
sim::NoiseModel noise_model(const RunConfig& cfg);
recon::FbpOptions fbp_options(const RunConfig& cfg);

nlohmann::json to_json(const af::AfConfig& c);
nlohmann::json to_json(const ft::FtConfig& c);
nlohmann::json to_json(const Geometry& g);
nlohmann::json to_json(const sim::NoiseModel& n);
nlohmann::json to_json(const recon::FbpOptions& o);
nlohmann::json to_json(const Phantom& p);

/// Phantom description file: {"ellipses": [{"center": [x, y], "axes": [a, b],
/// "angle": rad, "mu": cm^-1}, ...], "wire": {"center": [x, y], "radius": r,
/// "mu": cm^-1}}. Lengths in cm.
Phantom load_phantom(const std::filesystem::path& path);
Phantom phantom_from_json(const nlohmann::json& j, const std::string& origin);

struct RoiDef {
  std::string name;
  double x = 0.0;  // cm
  double y = 0.0;
  double radius = 0.0;
};

struct NpsDef {
  std::size_t patch = 64;
  std::vector<std::pair<double, double>> centers;  // cm
};

struct WireDef {
  double x = 0.0;
  double y = 0.0;
  std::size_t patch = 64;
};

struct MetricsConfig {
  std::vector<RoiDef> rois;
  std::optional<NpsDef> nps;
  std::optional<WireDef> wire;
};

MetricsConfig metrics_config(const RunConfig& cfg);

/// Sinogram files are written as f64 unless "grid_dtype" is "f32".
bool grid_dtype_f32(const RunConfig& cfg);

/// FNV-1a over the canonical (sorted-key) dump.
std::string config_hash(const nlohmann::json& j);

}  // namespace lowsig::cli
