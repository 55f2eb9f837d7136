#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "csv.hpp"
#include "grid_io.hpp"
#include "lowsig/error.hpp"

namespace lowsig::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Resolution-table values for the two corrections (cm^-1 at 50/10/4 %),
// reported next to our crossings for qualitative comparison only.
const json kPublishedMtf = {{"ft", {1.61, 5.32, 7.37}}, {"af", {2.14, 6.29, 8.27}}};

struct Experiment {
  std::string name;
  json config;
  std::vector<Method> methods;
  std::optional<RowRange> rows;
};

std::vector<Experiment> parse_experiments(const json& doc, const fs::path& base_dir, const std::string& origin,
                                          std::optional<std::uint64_t> seed) {
  if (!doc.contains("experiments") || !doc.at("experiments").is_array()) {
    throw ConfigError(origin + ": field 'experiments': expected an array");
  }
  const json base = doc.value("base", json::object());
  std::vector<Experiment> out;
  for (const json& x : doc.at("experiments")) {
    Experiment e;
    if (!x.contains("name") || !x.at("name").is_string()) throw ConfigError(origin + ": experiment needs a name");
    e.name = x.at("name").get<std::string>();
    e.config = base;
    if (x.contains("overrides")) e.config.merge_patch(x.at("overrides"));
    if (x.contains("phantom")) {
      const fs::path p(x.at("phantom").get<std::string>());
      e.config["phantom"] = fs::absolute(p.is_absolute() ? p : base_dir / p).lexically_normal().string();
    }
    if (x.contains("metrics")) e.config["metrics"] = x.at("metrics");
    if (seed) e.config["seed"] = *seed;
    for (const json& m : x.value("methods", json::array({"none", "ft", "af"}))) {
      e.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (x.contains("rows")) e.rows = parse_rows(x.at("rows").get<std::string>());
    out.push_back(std::move(e));
  }
  return out;
}

double rms_relative_difference(const std::vector<fs::path>& a, const std::vector<fs::path>& b) {
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const recon::Image ia = io::read_image(a[k]);
    const recon::Image ib = io::read_image(b[k]);
    for (std::size_t i = 0; i < ia.data.size(); ++i) {
      diff += (ia.data[i] - ib.data[i]) * (ia.data[i] - ib.data[i]);
      ref += ib.data[i] * ib.data[i];
    }
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : 0.0;
}

json crossing_json(const std::optional<double>& f) { return f ? json(*f) : json(nullptr); }

void write_summary_tables(const json& summary, const fs::path& out) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [exp, body] : summary.at("experiments").items()) {
    for (const auto& [method, m] : body.at("methods").items()) {
      const json rois = m.value("rois", json::object());
      for (const auto& [roi, s] : rois.items()) {
        for (const char* key : {"mean", "std", "truth", "abs_bias"}) {
          if (s.at(key).is_number()) rows.push_back({exp, method, roi + "." + key, format_number(s.at(key).get<double>())});
        }
      }
      if (m.contains("nps_integral")) {
        rows.push_back({exp, method, "nps_integral", format_number(m.at("nps_integral").get<double>())});
      }
      if (m.contains("mtf")) {
        for (const char* key : {"f50", "f10", "f4"}) {
          const json& v = m.at("mtf").at(key);
          rows.push_back({exp, method, std::string("mtf.") + key, v.is_null() ? "beyond_nyquist" : format_number(v.get<double>())});
        }
      }
    }
    if (body.contains("rms_rel_diff_af_vs_none")) {
      rows.push_back({exp, "af", "rms_rel_diff_vs_none", format_number(body.at("rms_rel_diff_af_vs_none").get<double>())});
    }
  }
  write_csv(out / "summary.csv", {"experiment", "method", "metric", "value"}, rows);

  std::ofstream md(out / "summary.md", std::ios::trunc);
  md << "# lowsig reproduction summary\n\n";
  for (const auto& [exp, body] : summary.at("experiments").items()) {
    md << "## " << exp << " (I0 = " << format_number(body.at("i0").get<double>()) << ")\n\n";
    md << "| method | metric | value |\n|---|---|---|\n";
    for (const auto& r : rows) {
      if (r[0] == exp) md << "| " << r[1] << " | " << r[2] << " | " << r[3] << " |\n";
    }
    md << '\n';
  }
  if (summary.contains("mtf_ordering")) {
    md << "## MTF crossings, AF vs FT (cm^-1)\n\n";
    md << "| level | FT (ours) | AF (ours) | AF >= FT | FT (published) | AF (published) |\n|---|---|---|---|---|---|\n";
    const json& o = summary.at("mtf_ordering");
    const char* levels[] = {"f50", "f10", "f4"};
    const char* names[] = {"50%", "10%", "4%"};
    for (int k = 0; k < 3; ++k) {
      const json& row = o.at(levels[k]);
      const auto show = [](const json& v) { return v.is_null() ? std::string("beyond Nyquist") : format_number(v.get<double>()); };
      md << "| " << names[k] << " | " << show(row.at("ft")) << " | " << show(row.at("af")) << " | "
         << (row.at("af_ge_ft").is_null() ? "n/a" : (row.at("af_ge_ft").get<bool>() ? "yes" : "no")) << " | "
         << format_number(kPublishedMtf.at("ft")[k].get<double>()) << " | "
         << format_number(kPublishedMtf.at("af")[k].get<double>()) << " |\n";
    }
  }
}

}  // namespace

json cmd_repro(const fs::path& config, const fs::path& out, std::optional<std::uint64_t> seed) {
  const json doc = load_json(config);
  const fs::path base_dir = config.parent_path().empty() ? fs::path(".") : config.parent_path();
  const std::vector<Experiment> experiments = parse_experiments(doc, base_dir, config.string(), seed);
  fs::create_directories(out);

  std::vector<ManifestEntry> manifest;
  json summary = {{"tool", "lowsig"}, {"version", kToolVersion}, {"experiments", json::object()}};
  const auto t0 = std::chrono::steady_clock::now();
  const auto log = [&](const std::string& msg) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "[repro " << static_cast<long>(s) << "s] " << msg << '\n';
  };

  for (const Experiment& x : experiments) {
    const fs::path dir = out / x.name;
    fs::create_directories(dir);
    {
      std::ofstream f(dir / "config.json", std::ios::trunc);
      f << x.config.dump(2) << '\n';
    }
    const RunConfig cfg = RunConfig::load(dir / "config.json");

    log(x.name + ": simulate");
    manifest.push_back(cmd_simulate(cfg, std::nullopt, std::nullopt, dir / "sim"));

    json exp = {{"i0", noise_model(cfg).i0}, {"seed", noise_model(cfg).seed}, {"methods", json::object()}};
    std::map<Method, std::vector<fs::path>> images;
    for (Method m : x.methods) {
      const std::string name = to_string(m);
      log(x.name + ": correct " + name);
      manifest.push_back(cmd_correct(dir / "sim" / "counts_noisy.json", m, cfg, dir / name / "correct"));
      log(x.name + ": recon " + name);
      ManifestEntry rec = cmd_recon(dir / name / "correct" / "counts_corrected.json", cfg, dir / name / "recon", x.rows);
      for (const std::string& p : rec.outputs) images[m].push_back(p);
      manifest.push_back(rec);
      log(x.name + ": metrics " + name);
      MetricsReport rep = cmd_metrics(images[m], cfg, dir / name / "metrics");
      manifest.push_back(rep.entry);

      json mj = json::object();
      std::map<std::string, std::vector<const RoiRecord*>> by_roi;
      for (const RoiRecord& r : rep.rois) by_roi[r.roi].push_back(&r);
      for (const auto& [roi, recs] : by_roi) {
        double mean = 0.0, sd = 0.0;
        for (const RoiRecord* r : recs) {
          mean += r->stats.mean;
          sd += r->stats.std;
        }
        mean /= static_cast<double>(recs.size());
        sd /= static_cast<double>(recs.size());
        const double truth = recs.front()->truth;
        mj["rois"][roi] = {{"mean", mean},
                           {"std", sd},
                           {"truth", std::isnan(truth) ? json(nullptr) : json(truth)},
                           {"abs_bias", std::isnan(truth) ? json(nullptr) : json(std::abs(mean - truth))},
                           {"images", recs.size()}};
      }
      if (rep.nps) {
        mj["nps_integral"] = rep.nps->integral;
        mj["nps_patches"] = rep.nps->patches;
      }
      if (rep.mtf) {
        mj["mtf"] = {{"f50", crossing_json(rep.mtf->crossings.f50)},
                     {"f10", crossing_json(rep.mtf->crossings.f10)},
                     {"f4", crossing_json(rep.mtf->crossings.f4)}};
      }
      exp["methods"][name] = mj;
    }
    if (images.contains(Method::Af) && images.contains(Method::None)) {
      exp["rms_rel_diff_af_vs_none"] = rms_relative_difference(images[Method::Af], images[Method::None]);
    }
    summary["experiments"][x.name] = exp;

    const json& methods = exp.at("methods");
    if (methods.contains("af") && methods.contains("ft") && methods.at("af").contains("mtf") &&
        methods.at("ft").contains("mtf")) {
      json ordering = {{"experiment", x.name}};
      for (const char* key : {"f50", "f10", "f4"}) {
        const json& fa = methods.at("af").at("mtf").at(key);
        const json& ff = methods.at("ft").at("mtf").at(key);
        ordering[key] = {{"af", fa},
                         {"ft", ff},
                         {"af_ge_ft", fa.is_null() || ff.is_null() ? json(nullptr) : json(fa.get<double>() >= ff.get<double>())}};
      }
      ordering["published"] = kPublishedMtf;
      summary["mtf_ordering"] = ordering;
    }
  }

  {
    std::ofstream f(out / "summary.json", std::ios::trunc);
    f << summary.dump(2) << '\n';
  }
  write_summary_tables(summary, out);
  ManifestEntry top;
  top.stage = "repro";
  top.config = doc;
  top.inputs = {config.string()};
  top.outputs = {(out / "summary.json").string(), (out / "summary.csv").string(), (out / "summary.md").string()};
  manifest.push_back(top);
  write_manifest(out, manifest);
  log("done");
  return summary;
}

}  // namespace lowsig::cli
