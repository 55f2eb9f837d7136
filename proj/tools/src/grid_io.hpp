#pragma once

#include <filesystem>
#include <string>

#include "lowsig/grid.hpp"
#include "lowsig/recon.hpp"

namespace lowsig::io {

enum class DType { F32, F64 };

/// Grid files are a JSON header `<stem>.json` plus a raw little-endian body
/// `<stem>.raw` holding channels*rows*views values, channel fastest.
/// `path` may name either file or the stem.
struct GridFile {
  std::filesystem::path header;
  std::filesystem::path body;
};

GridFile grid_paths(const std::filesystem::path& path);

GridFile write_grid(const std::filesystem::path& path, const SinogramGrid& grid, DType dtype = DType::F64);
SinogramGrid read_grid(const std::filesystem::path& path);

/// Images use the same layout: header with n, pitch and a row-major body.
GridFile write_image(const std::filesystem::path& path, const recon::Image& img, DType dtype = DType::F32);
recon::Image read_image(const std::filesystem::path& path);

std::string units_of(Stage stage);

}  // namespace lowsig::io
