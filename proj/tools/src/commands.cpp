#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csv.hpp"
#include "grid_io.hpp"
#include "lowsig/error.hpp"
#include "lowsig/lsc_af.hpp"
#include "lowsig/lsc_ft.hpp"
#include "lowsig/recon.hpp"
#include "lowsig/simulator.hpp"

namespace lowsig::cli {

namespace fs = std::filesystem;
using nlohmann::json;

Method parse_method(const std::string& name) {
  if (name == "af") return Method::Af;
  if (name == "ft") return Method::Ft;
  if (name == "none") return Method::None;
  throw ConfigError("unknown method '" + name + "' (expected af, ft or none)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Af:
      return "af";
    case Method::Ft:
      return "ft";
    case Method::None:
      return "none";
  }
  return "";
}

RowRange parse_rows(const std::string& text) {
  const auto parse_index = [&text](const std::string& s) -> std::size_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw ConfigError("invalid row selection '" + text + "' (expected a..b)");
    }
    return std::stoul(s);
  };
  const auto dots = text.find("..");
  RowRange r;
  if (dots == std::string::npos) {
    r.first = r.last = parse_index(text);
  } else {
    r.first = parse_index(text.substr(0, dots));
    r.last = parse_index(text.substr(dots + 2));
  }
  if (r.last < r.first) throw ConfigError("invalid row selection '" + text + "': end before start");
  return r;
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
}

std::string stem_of(const fs::path& p) {
  fs::path s = p.filename();
  if (s.extension() == ".json" || s.extension() == ".raw") s.replace_extension();
  return s.string();
}

}  // namespace

ManifestEntry cmd_simulate(const RunConfig& cfg, const std::optional<fs::path>& phantom_path,
                           std::optional<std::uint64_t> seed, const fs::path& out) {
  fs::path source;
  if (phantom_path) {
    source = *phantom_path;
  } else if (cfg.has("phantom") && cfg.doc.at("phantom").is_string()) {
    source = cfg.resolve(cfg.doc.at("phantom").get<std::string>());
  } else {
    throw ConfigError(cfg.origin + ": no phantom given (use --phantom or the 'phantom' field)");
  }
  if (!fs::exists(source)) throw ConfigError("phantom file not found: " + source.string());
  const Phantom phantom = load_phantom(source);
  const Geometry g = geometry(cfg);
  sim::NoiseModel nm = noise_model(cfg);
  if (seed) nm.seed = *seed;

  const io::DType dtype = grid_dtype_f32(cfg) ? io::DType::F32 : io::DType::F64;
  ensure_dir(out);
  const SinogramGrid projection = sim::forward_project(phantom, g);
  const SinogramGrid ideal = sim::counts_from_projection(projection, nm.i0);
  const SinogramGrid noisy = sim::add_noise(ideal, nm);

  ManifestEntry e;
  e.stage = "simulate";
  e.config = {{"phantom", to_json(phantom)}, {"geometry", to_json(g)}, {"noise", to_json(nm)}};
  e.seed = nm.seed;
  e.inputs = {source.string()};
  for (const auto& [name, grid] : {std::pair{"projections_ideal", &projection}, std::pair{"counts_ideal", &ideal},
                                   std::pair{"counts_noisy", &noisy}}) {
    e.outputs.push_back(io::write_grid(out / name, *grid, dtype).header.string());
  }
  write_manifest(out, {e});
  return e;
}

ManifestEntry cmd_correct(const fs::path& in, Method method, const RunConfig& cfg, const fs::path& out) {
  const SinogramGrid counts = io::read_grid(in);
  if (counts.stage() != Stage::Counts) throw DataError(in.string() + ": correction needs a counts grid");
  if (!counts.all_finite()) throw DataError(in.string() + ": grid contains non-finite values");

  ManifestEntry e;
  e.stage = "correct";
  e.inputs = {io::grid_paths(in).header.string()};
  SinogramGrid corrected;
  switch (method) {
    case Method::Af: {
      const af::AfConfig c = af_config(cfg);
      e.config = {{"method", "af"}, {"af", to_json(c)}};
      corrected = af::af_lsc(counts, c);
      break;
    }
    case Method::Ft: {
      const ft::FtConfig c = ft_config(cfg);
      e.config = {{"method", "ft"}, {"ft", to_json(c)}};
      corrected = ft::ft_lsc(counts, c);
      break;
    }
    case Method::None:
      e.config = {{"method", "none"}, {"floor", recon::kUncorrectedFloor}};
      corrected = recon::clamp_counts(counts, recon::kUncorrectedFloor);
      break;
  }
  ensure_dir(out);
  e.outputs = {io::write_grid(out / "counts_corrected", corrected, grid_dtype_f32(cfg) ? io::DType::F32 : io::DType::F64).header.string()};
  write_manifest(out, {e});
  return e;
}

ManifestEntry cmd_recon(const fs::path& in, const RunConfig& cfg, const fs::path& out, std::optional<RowRange> rows) {
  const SinogramGrid grid = io::read_grid(in);
  const Geometry g = geometry(cfg);
  const recon::FbpOptions opts = fbp_options(cfg);
  if (grid.dims().channels != g.channels || grid.dims().views != g.views()) {
    throw ConfigError(cfg.origin + ": geometry (" + std::to_string(g.channels) + " channels, " +
                      std::to_string(g.views()) + " views) does not match " + in.string());
  }
  const std::size_t nrows = grid.dims().rows;
  const RowRange sel = rows.value_or(RowRange{0, nrows - 1});
  if (sel.last >= nrows) {
    throw ConfigError("row selection " + std::to_string(sel.first) + ".." + std::to_string(sel.last) +
                      " out of range (grid has " + std::to_string(nrows) + " rows)");
  }

  ManifestEntry e;
  e.stage = "recon";
  e.inputs = {io::grid_paths(in).header.string()};
  json c = {{"geometry", to_json(g)}, {"fbp", to_json(opts)}, {"rows", {sel.first, sel.last}}};

  SinogramGrid projection;
  if (grid.stage() == Stage::Projection) {
    projection = grid;
  } else if (grid.stage() == Stage::Counts) {
    if (!cfg.has("i0")) throw ConfigError(cfg.origin + ": field 'i0': required to log-convert counts");
    const double i0 = noise_model(cfg).i0;
    c["i0"] = i0;
    projection = recon::neg_log(grid, i0);
  } else {
    throw DataError(in.string() + ": cannot reconstruct a VST-domain grid");
  }
  e.config = c;

  ensure_dir(out);
  for (std::size_t r = sel.first; r <= sel.last; ++r) {
    const recon::Image img = recon::fbp(projection, r, g, opts);
    e.outputs.push_back(io::write_image(out / ("image_row" + std::to_string(r)), img).header.string());
  }
  write_manifest(out, {e});
  return e;
}

MetricsReport cmd_metrics(const std::vector<fs::path>& images, const RunConfig& cfg, const fs::path& out) {
  if (images.empty()) throw ConfigError("metrics needs at least one image");
  const MetricsConfig mc = metrics_config(cfg);
  std::optional<Phantom> phantom;
  if (cfg.has("phantom") && cfg.doc.at("phantom").is_string()) {
    const fs::path p = cfg.resolve(cfg.doc.at("phantom").get<std::string>());
    if (fs::exists(p)) phantom = load_phantom(p);
  }

  std::vector<recon::Image> loaded;
  MetricsReport report;
  report.entry.stage = "metrics";
  for (const fs::path& p : images) {
    loaded.push_back(io::read_image(p));
    report.entry.inputs.push_back(io::grid_paths(p).header.string());
    if (loaded.back().n != loaded.front().n || loaded.back().pitch != loaded.front().pitch) {
      throw DataError(p.string() + ": image size or pitch differs from " + images.front().string());
    }
  }
  const recon::Image& first = loaded.front();
  ensure_dir(out);

  json c = json::object();
  std::vector<std::vector<std::string>> roi_rows;
  for (std::size_t k = 0; k < loaded.size(); ++k) {
    for (const RoiDef& r : mc.rois) {
      const recon::Image& img = loaded[k];
      const metrics::DiscRoi disc{img.col_of(r.x), img.row_of(r.y), r.radius / img.pitch};
      RoiRecord rec{stem_of(images[k]), r.name,
                    phantom ? phantom->attenuation_at(r.x, r.y) : std::numeric_limits<double>::quiet_NaN(),
                    metrics::roi_stats(img, disc)};
      roi_rows.push_back({rec.image, rec.roi, format_number(rec.stats.mean), format_number(rec.stats.std),
                          std::to_string(rec.stats.count), format_number(rec.truth)});
      report.rois.push_back(rec);
    }
  }
  if (!mc.rois.empty()) {
    c["rois"] = cfg.doc.at("metrics").at("rois");
    write_csv(out / "roi_stats.csv", {"image", "roi", "mean", "std", "count", "truth"}, roi_rows);
    report.entry.outputs.push_back((out / "roi_stats.csv").string());
  }

  if (mc.nps) {
    std::vector<metrics::Patch> patches;
    const long half = static_cast<long>(mc.nps->patch / 2);
    for (const recon::Image& img : loaded) {
      for (const auto& [x, y] : mc.nps->centers) {
        const long r0 = std::lround(img.row_of(y)) - half;
        const long c0 = std::lround(img.col_of(x)) - half;
        if (r0 < 0 || c0 < 0) throw ConfigError(cfg.origin + ": NPS patch outside the image");
        patches.push_back(metrics::extract_patch(img, static_cast<std::size_t>(r0), static_cast<std::size_t>(c0),
                                                 mc.nps->patch));
      }
    }
    metrics::NpsResult nps = metrics::nps_radial(patches, first.pitch);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t b = 0; b < nps.profile.value.size(); ++b) {
      rows.push_back({format_number(nps.profile.frequency[b]), format_number(nps.profile.value[b])});
    }
    write_csv(out / "nps_profile.csv", {"frequency_cm_inv", "value"}, rows);
    write_csv(out / "nps_integral.csv", {"patches", "integral"},
              {{std::to_string(patches.size()), format_number(nps.integral)}});
    report.entry.outputs.push_back((out / "nps_profile.csv").string());
    report.entry.outputs.push_back((out / "nps_integral.csv").string());
    c["nps"] = cfg.doc.at("metrics").at("nps");
    report.nps = std::move(nps);
  }

  if (mc.wire) {
    recon::Image mean(first.n, first.pitch);
    for (const recon::Image& img : loaded)
      for (std::size_t k = 0; k < mean.data.size(); ++k) mean.data[k] += img.data[k];
    for (double& v : mean.data) v /= static_cast<double>(loaded.size());
    metrics::MtfOptions opts;
    opts.patch = mc.wire->patch;
    metrics::MtfResult mtf = metrics::mtf_from_wire(mean, mean.row_of(mc.wire->y), mean.col_of(mc.wire->x), opts);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t b = 0; b < mtf.profile.value.size(); ++b) {
      rows.push_back({format_number(mtf.profile.frequency[b]), format_number(mtf.profile.value[b])});
    }
    write_csv(out / "mtf_profile.csv", {"frequency_cm_inv", "value"}, rows);
    const auto cell = [](const std::optional<double>& f) { return f ? format_number(*f) : std::string("beyond_nyquist"); };
    write_csv(out / "mtf_crossings.csv", {"level_percent", "frequency_cm_inv"},
              {{"50", cell(mtf.crossings.f50)}, {"10", cell(mtf.crossings.f10)}, {"4", cell(mtf.crossings.f4)}});
    report.entry.outputs.push_back((out / "mtf_profile.csv").string());
    report.entry.outputs.push_back((out / "mtf_crossings.csv").string());
    c["wire"] = cfg.doc.at("metrics").at("wire");
    report.mtf = std::move(mtf);
  }
  report.entry.config = c;
  write_manifest(out, {report.entry});
  return report;
}

}  // namespace lowsig::cli
