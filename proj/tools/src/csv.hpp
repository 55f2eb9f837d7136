#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lowsig::cli {

/// Shortest round-trip decimal form, always with '.' as separator.
std::string format_number(double v);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace lowsig::cli
