#include "manifest.hpp"

#include <fstream>

#include "config.hpp"
#include "lowsig/error.hpp"

namespace lowsig::cli {

nlohmann::json to_json(const ManifestEntry& e) {
  nlohmann::json j = {{"stage", e.stage},
                      {"config", e.config},
                      {"config_hash", config_hash(e.config)},
                      {"inputs", e.inputs},
                      {"outputs", e.outputs}};
  j["seed"] = e.seed ? nlohmann::json(*e.seed) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json manifest_json(const std::vector<ManifestEntry>& entries) {
  nlohmann::json stages = nlohmann::json::array();
  for (const ManifestEntry& e : entries) stages.push_back(to_json(e));
  return {{"tool", "lowsig"}, {"version", kToolVersion}, {"stages", stages}};
}

void write_manifest(const std::filesystem::path& dir, const std::vector<ManifestEntry>& entries) {
  const auto path = dir / "manifest.json";
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << manifest_json(entries).dump(2) << '\n';
}

}  // namespace lowsig::cli
