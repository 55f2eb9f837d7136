#include "grid_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <vector>

#include "lowsig/error.hpp"

namespace lowsig::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

std::string dtype_name(DType t) { return t == DType::F32 ? "f32" : "f64"; }

DType dtype_from(const std::string& s, const fs::path& where) {
  if (s == "f32") return DType::F32;
  if (s == "f64") return DType::F64;
  throw DataError(where.string() + ": unsupported dtype '" + s + "'");
}

template <typename U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    U r = 0;
    for (std::size_t b = 0; b < sizeof(U); ++b) r |= ((v >> (8 * b)) & 0xff) << (8 * (sizeof(U) - 1 - b));
    return r;
  }
  return v;
}

void write_body(const fs::path& path, std::span<const double> values, DType dtype) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  std::vector<char> bytes;
  if (dtype == DType::F64) {
    bytes.resize(values.size() * 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto bits = to_little(std::bit_cast<std::uint64_t>(values[i]));
      std::memcpy(bytes.data() + 8 * i, &bits, 8);
    }
  } else {
    bytes.resize(values.size() * 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto bits = to_little(std::bit_cast<std::uint32_t>(static_cast<float>(values[i])));
      std::memcpy(bytes.data() + 4 * i, &bits, 4);
    }
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<double> read_body(const fs::path& path, std::size_t count, DType dtype) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::size_t width = dtype == DType::F64 ? 8 : 4;
  std::vector<char> bytes(count * width);
  in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size() || in.peek() != std::char_traits<char>::eof()) {
    throw DataError(path.string() + ": body size does not match header (expected " + std::to_string(bytes.size()) +
                    " bytes)");
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (dtype == DType::F64) {
      std::uint64_t bits;
      std::memcpy(&bits, bytes.data() + 8 * i, 8);
      values[i] = std::bit_cast<double>(to_little(bits));
    } else {
      std::uint32_t bits;
      std::memcpy(&bits, bytes.data() + 4 * i, 4);
      values[i] = static_cast<double>(std::bit_cast<float>(to_little(bits)));
    }
  }
  return values;
}

json read_header(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_header(const fs::path& path, const json& header) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << header.dump(2) << '\n';
}

template <typename T>
T field(const json& j, const char* key, const fs::path& where) {
  if (!j.contains(key)) throw DataError(where.string() + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DataError(where.string() + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

GridFile grid_paths(const fs::path& path) {
  fs::path stem = path;
  if (stem.extension() == ".json" || stem.extension() == ".raw") stem.replace_extension();
  return {fs::path(stem).concat(".json"), fs::path(stem).concat(".raw")};
}

std::string units_of(Stage stage) {
  switch (stage) {
    case Stage::Counts:
      return "counts";
    case Stage::Vst:
      return "anscombe";
    case Stage::Projection:
      return "line_integral";
  }
  return "";
}

GridFile write_grid(const fs::path& path, const SinogramGrid& grid, DType dtype) {
  const GridFile f = grid_paths(path);
  const Dims& d = grid.dims();
  json h = {
      {"format", "lowsig-grid"},
      {"version", kFormatVersion},
      {"dims", {{"channels", d.channels}, {"rows", d.rows}, {"views", d.views}}},
      {"axis_order", "channel,row,view"},
      {"dtype", dtype_name(dtype)},
      {"byte_order", "little"},
      {"stage", std::string(to_string(grid.stage()))},
      {"units", units_of(grid.stage())},
      {"data", f.body.filename().string()},
  };
  write_body(f.body, grid.values(), dtype);
  write_header(f.header, h);
  return f;
}

SinogramGrid read_grid(const fs::path& path) {
  const GridFile f = grid_paths(path);
  const json h = read_header(f.header);
  if (h.value("format", "") != "lowsig-grid") throw DataError(f.header.string() + ": not a lowsig grid header");
  if (h.value("axis_order", "") != "channel,row,view") {
    throw DataError(f.header.string() + ": unsupported axis order");
  }
  const json dims = field<json>(h, "dims", f.header);
  const Dims d{field<std::size_t>(dims, "channels", f.header), field<std::size_t>(dims, "rows", f.header),
               field<std::size_t>(dims, "views", f.header)};
  if (d.size() == 0) throw DataError(f.header.string() + ": dims must be positive");
  const DType dtype = dtype_from(field<std::string>(h, "dtype", f.header), f.header);
  const Stage stage = stage_from_string(field<std::string>(h, "stage", f.header));
  const fs::path body = f.header.parent_path() / h.value("data", f.body.filename().string());
  return SinogramGrid(d, stage, read_body(body, d.size(), dtype));
}

GridFile write_image(const fs::path& path, const recon::Image& img, DType dtype) {
  const GridFile f = grid_paths(path);
  json h = {
      {"format", "lowsig-image"},
      {"version", kFormatVersion},
      {"n", img.n},
      {"pitch_cm", img.pitch},
      {"axis_order", "row,col"},
      {"origin", "isocenter"},
      {"dtype", dtype_name(dtype)},
      {"byte_order", "little"},
      {"units", "cm^-1"},
      {"data", f.body.filename().string()},
  };
  write_body(f.body, img.data, dtype);
  write_header(f.header, h);
  return f;
}

recon::Image read_image(const fs::path& path) {
  const GridFile f = grid_paths(path);
  const json h = read_header(f.header);
  if (h.value("format", "") != "lowsig-image") throw DataError(f.header.string() + ": not a lowsig image header");
  recon::Image img;
  img.n = field<std::size_t>(h, "n", f.header);
  img.pitch = field<double>(h, "pitch_cm", f.header);
  if (img.n == 0 || !(img.pitch > 0.0)) throw DataError(f.header.string() + ": invalid image size or pitch");
  const DType dtype = dtype_from(field<std::string>(h, "dtype", f.header), f.header);
  const fs::path body = f.header.parent_path() / h.value("data", f.body.filename().string());
  img.data = read_body(body, img.n * img.n, dtype);
  return img;
}

}  // namespace lowsig::io
