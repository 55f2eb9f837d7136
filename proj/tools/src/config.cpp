#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "lowsig/error.hpp"

namespace lowsig::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "description",    "phantom",          "channels",         "channel_pitch",   "rows",
      "views",          "fov_radius",       "i0",               "sigma_e",         "seed",
      "lambda_th",      "lambda_th_prime",  "k1",               "k2",              "stats_window",
      "bf_window",      "mu_floor",         "sigma_r_floor",    "sigma_r_mode",    "ft_lower_th",
      "ft_upper_th",    "ft_boxcar_window", "ft_median_window", "ft_upper_enabled", "recon_n",
      "recon_pitch",    "recon_window",     "metrics",          "grid_dtype",
  };
  return keys;
}

[[noreturn]] void bad_field(const std::string& origin, const std::string& key, const std::string& problem) {
  throw ConfigError(origin + ": field '" + key + "': " + problem);
}

double number(const json& j, const std::string& key, const std::string& origin) {
  const json& v = j.at(key);
  if (!v.is_number()) bad_field(origin, key, "expected a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& origin) {
  return j.contains(key) ? number(j, key, origin) : fallback;
}

std::size_t count_or(const json& j, const std::string& key, std::size_t fallback, const std::string& origin) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) bad_field(origin, key, "expected a positive integer");
  return v.get<std::size_t>();
}

WindowSpec window_or(const json& j, const std::string& key, WindowSpec fallback, const std::string& origin) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number_integer() || !v[1].is_number_integer() ||
      !v[2].is_number_integer()) {
    bad_field(origin, key, "expected [channels, rows, views] full window sizes");
  }
  try {
    return WindowSpec::from_full(v[0].get<int>(), v[1].get<int>(), v[2].get<int>());
  } catch (const ConfigError& e) {
    bad_field(origin, key, e.what());
  }
}

json window_json(const WindowSpec& w) { return json::array({w.full_channels(), w.full_rows(), w.full_views()}); }

std::pair<double, double> point(const json& v, const std::string& key, const std::string& origin) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    bad_field(origin, key, "expected [x, y] in cm");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    // parse_error messages carry "line L, column C".
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RunConfig RunConfig::load(const fs::path& path) {
  return from_json(load_json(path), path.parent_path().empty() ? fs::path(".") : path.parent_path(), path.string());
}

RunConfig RunConfig::from_json(json doc, fs::path base_dir, std::string origin) {
  if (!doc.is_object()) throw ConfigError(origin + ": configuration must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) throw ConfigError(origin + ": unknown field '" + key + "'");
  }
  RunConfig c;
  c.doc = std::move(doc);
  c.base_dir = std::move(base_dir);
  c.origin = std::move(origin);
  return c;
}

fs::path RunConfig::resolve(const std::string& relative) const {
  const fs::path p(relative);
  return p.is_absolute() ? p : base_dir / p;
}

af::AfConfig af_config(const RunConfig& cfg) {
  const json& j = cfg.doc;
  const std::string& o = cfg.origin;
  af::AfConfig c;
  c.sigma_e = number_or(j, "sigma_e", c.sigma_e, o);
  if (j.contains("lambda_th") && !j.at("lambda_th").is_null()) c.lambda_th = number(j, "lambda_th", o);
  c.lambda_th_prime = number_or(j, "lambda_th_prime", c.lambda_th_prime, o);
  c.k1 = number_or(j, "k1", c.k1, o);
  c.k2 = number_or(j, "k2", c.k2, o);
  c.stats_window = window_or(j, "stats_window", c.stats_window, o);
  c.bf_window = window_or(j, "bf_window", c.bf_window, o);
  c.mu_floor = number_or(j, "mu_floor", c.mu_floor, o);
  c.sigma_r_floor = number_or(j, "sigma_r_floor", c.sigma_r_floor, o);
  if (j.contains("sigma_r_mode")) {
    const json& v = j.at("sigma_r_mode");
    if (v == "vst_slope") {
      c.sigma_r_mode = af::SigmaRMode::VstSlope;
    } else if (v == "raw") {
      c.sigma_r_mode = af::SigmaRMode::Raw;
    } else {
      bad_field(o, "sigma_r_mode", "expected \"vst_slope\" or \"raw\"");
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(o + ": " + e.what());
  }
  return c;
}

ft::FtConfig ft_config(const RunConfig& cfg) {
  const json& j = cfg.doc;
  const std::string& o = cfg.origin;
  ft::FtConfig c;
  c.lower_th = number_or(j, "ft_lower_th", c.lower_th, o);
  c.upper_th = number_or(j, "ft_upper_th", c.upper_th, o);
  c.boxcar_window = window_or(j, "ft_boxcar_window", c.boxcar_window, o);
  c.median_window = window_or(j, "ft_median_window", c.median_window, o);
  if (j.contains("ft_upper_enabled")) {
    if (!j.at("ft_upper_enabled").is_boolean()) bad_field(o, "ft_upper_enabled", "expected true or false");
    c.upper_enabled = j.at("ft_upper_enabled").get<bool>();
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(o + ": " + e.what());
  }
  return c;
}

Geometry geometry(const RunConfig& cfg) {
  const json& j = cfg.doc;
  const std::string& o = cfg.origin;
  for (const char* key : {"channels", "channel_pitch", "views"}) {
    if (!j.contains(key)) bad_field(o, key, "required");
  }
  Geometry g = Geometry::parallel(count_or(j, "channels", 1, o), number(j, "channel_pitch", o),
                                  count_or(j, "rows", 1, o), count_or(j, "views", 1, o));
  g.fov_radius = number_or(j, "fov_radius", g.fov_radius, o);
  try {
    g.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(o + ": " + e.what());
  }
  return g;
}

sim::NoiseModel noise_model(const RunConfig& cfg) {
  const json& j = cfg.doc;
  const std::string& o = cfg.origin;
  if (!j.contains("i0")) bad_field(o, "i0", "required");
  sim::NoiseModel n;
  n.i0 = number(j, "i0", o);
  n.sigma_e = number_or(j, "sigma_e", 0.0, o);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) bad_field(o, "seed", "expected a non-negative integer");
    n.seed = j.at("seed").get<std::uint64_t>();
  }
  try {
    n.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(o + ": " + e.what());
  }
  return n;
}

recon::FbpOptions fbp_options(const RunConfig& cfg) {
  const json& j = cfg.doc;
  const std::string& o = cfg.origin;
  recon::FbpOptions f;
  f.n = count_or(j, "recon_n", f.n, o);
  f.pitch = number_or(j, "recon_pitch", 0.0, o);
  if (f.pitch < 0.0) bad_field(o, "recon_pitch", "must be >= 0 (0 selects the FOV-inscribing pitch)");
  if (j.contains("recon_window")) {
    const json& v = j.at("recon_window");
    if (v == "ramlak") {
      f.window = recon::Apodization::RamLak;
    } else if (v == "hann") {
      f.window = recon::Apodization::Hann;
    } else {
      bad_field(o, "recon_window", "expected \"ramlak\" or \"hann\"");
    }
  }
  return f;
}

json to_json(const af::AfConfig& c) {
  return {{"sigma_e", c.sigma_e},
          {"lambda_th", c.effective_lambda_th()},
          {"lambda_th_prime", c.lambda_th_prime},
          {"k1", c.k1},
          {"k2", c.k2},
          {"stats_window", window_json(c.stats_window)},
          {"bf_window", window_json(c.bf_window)},
          {"mu_floor", c.mu_floor},
          {"sigma_r_floor", c.sigma_r_floor},
          {"sigma_r_mode", c.sigma_r_mode == af::SigmaRMode::VstSlope ? "vst_slope" : "raw"}};
}

json to_json(const ft::FtConfig& c) {
  return {{"ft_lower_th", c.lower_th},
          {"ft_upper_th", c.upper_th},
          {"ft_boxcar_window", window_json(c.boxcar_window)},
          {"ft_median_window", window_json(c.median_window)},
          {"ft_upper_enabled", c.upper_enabled},
          {"ft_floor", c.floor}};
}

json to_json(const Geometry& g) {
  return {{"channels", g.channels},
          {"channel_pitch", g.channel_pitch},
          {"rows", g.rows},
          {"views", g.views()},
          {"fov_radius", g.fov_radius}};
}

json to_json(const sim::NoiseModel& n) { return {{"i0", n.i0}, {"sigma_e", n.sigma_e}, {"seed", n.seed}}; }

json to_json(const recon::FbpOptions& o) {
  return {{"recon_n", o.n},
          {"recon_pitch", o.pitch},
          {"recon_window", o.window == recon::Apodization::Hann ? "hann" : "ramlak"}};
}

json to_json(const Phantom& p) {
  json out = {{"ellipses", json::array()}};
  for (const Ellipse& e : p.ellipses) {
    out["ellipses"].push_back(
        {{"center", {e.cx, e.cy}}, {"axes", {e.a, e.b}}, {"angle", e.angle}, {"mu", e.mu}});
  }
  if (p.wire) {
    out["wire"] = {{"center", {p.wire->cx, p.wire->cy}}, {"radius", p.wire->radius}, {"mu", p.wire->mu}};
  }
  return out;
}

Phantom phantom_from_json(const json& j, const std::string& origin) {
  if (!j.is_object()) throw ConfigError(origin + ": phantom must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "name" && key != "version" && key != "description" && key != "ellipses" && key != "wire") {
      throw ConfigError(origin + ": unknown phantom field '" + key + "'");
    }
  }
  if (!j.contains("ellipses") || !j.at("ellipses").is_array()) {
    throw ConfigError(origin + ": field 'ellipses': expected an array");
  }
  Phantom p;
  std::size_t k = 0;
  for (const json& e : j.at("ellipses")) {
    const std::string tag = "ellipses[" + std::to_string(k++) + "]";
    if (!e.is_object()) bad_field(origin, tag, "expected an object");
    for (const char* key : {"center", "axes", "mu"}) {
      if (!e.contains(key)) bad_field(origin, tag + "." + key, "required");
    }
    Ellipse el;
    std::tie(el.cx, el.cy) = point(e.at("center"), tag + ".center", origin);
    std::tie(el.a, el.b) = point(e.at("axes"), tag + ".axes", origin);
    el.angle = number_or(e, "angle", 0.0, origin + " " + tag);
    el.mu = number(e, "mu", origin + " " + tag);
    p.ellipses.push_back(el);
  }
  if (j.contains("wire") && !j.at("wire").is_null()) {
    const json& w = j.at("wire");
    for (const char* key : {"center", "radius", "mu"}) {
      if (!w.contains(key)) bad_field(origin, std::string("wire.") + key, "required");
    }
    Wire wire;
    std::tie(wire.cx, wire.cy) = point(w.at("center"), "wire.center", origin);
    wire.radius = number(w, "radius", origin + " wire");
    wire.mu = number(w, "mu", origin + " wire");
    p.wire = wire;
  }
  try {
    p.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return p;
}

Phantom load_phantom(const fs::path& path) { return phantom_from_json(load_json(path), path.string()); }

MetricsConfig metrics_config(const RunConfig& cfg) {
  MetricsConfig m;
  if (!cfg.has("metrics")) return m;
  const json& j = cfg.doc.at("metrics");
  const std::string o = cfg.origin + " metrics";
  if (!j.is_object()) bad_field(cfg.origin, "metrics", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "rois" && key != "nps" && key != "wire") throw ConfigError(o + ": unknown field '" + key + "'");
  }
  if (j.contains("rois")) {
    std::size_t k = 0;
    for (const json& r : j.at("rois")) {
      const std::string tag = "rois[" + std::to_string(k++) + "]";
      if (!r.contains("center_cm") || !r.contains("radius_cm")) bad_field(o, tag, "needs center_cm and radius_cm");
      RoiDef def;
      def.name = r.value("name", tag);
      std::tie(def.x, def.y) = point(r.at("center_cm"), tag + ".center_cm", o);
      def.radius = number(r, "radius_cm", o);
      m.rois.push_back(def);
    }
  }
  if (j.contains("nps")) {
    const json& n = j.at("nps");
    NpsDef def;
    def.patch = count_or(n, "patch", def.patch, o);
    if (!n.contains("centers_cm") || !n.at("centers_cm").is_array()) bad_field(o, "nps.centers_cm", "expected an array");
    for (const json& c : n.at("centers_cm")) def.centers.push_back(point(c, "nps.centers_cm", o));
    m.nps = def;
  }
  if (j.contains("wire")) {
    const json& w = j.at("wire");
    WireDef def;
    if (!w.contains("center_cm")) bad_field(o, "wire.center_cm", "required");
    std::tie(def.x, def.y) = point(w.at("center_cm"), "wire.center_cm", o);
    def.patch = count_or(w, "patch", def.patch, o);
    m.wire = def;
  }
  return m;
}

bool grid_dtype_f32(const RunConfig& cfg) {
  if (!cfg.has("grid_dtype")) return false;
  const json& v = cfg.doc.at("grid_dtype");
  if (v == "f32") return true;
  if (v == "f64") return false;
  bad_field(cfg.origin, "grid_dtype", "expected \"f32\" or \"f64\"");
}

std::string config_hash(const json& j) {
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lowsig::cli
