#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace lowsig::cli {

inline constexpr const char* kToolVersion = LOWSIG_VERSION;

/// One pipeline stage: what ran, with which effective configuration, on
/// which files.
struct ManifestEntry {
  std::string stage;
  nlohmann::json config = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

nlohmann::json to_json(const ManifestEntry& e);
nlohmann::json manifest_json(const std::vector<ManifestEntry>& entries);
void write_manifest(const std::filesystem::path& dir, const std::vector<ManifestEntry>& entries);

}  // namespace lowsig::cli
