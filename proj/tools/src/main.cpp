#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "commands.hpp"
#include "lowsig/error.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

}  // namespace

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  using namespace lowsig::cli;

  CLI::App app{"lowsig: low-signal correction of CT photon-count sinograms"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string config_path, phantom_path, in_path, out_dir, method, rows;
  std::vector<std::string> images;
  std::optional<std::uint64_t> seed;

  auto* simulate = app.add_subcommand("simulate", "Project a phantom and draw noisy counts");
  simulate->add_option("--config", config_path, "Run configuration (JSON)")->required();
  simulate->add_option("--phantom", phantom_path, "Phantom description (overrides the config field)");
  simulate->add_option("--seed", seed, "Noise seed (overrides the config field)");
  simulate->add_option("--out", out_dir, "Output directory")->required();

  auto* correct = app.add_subcommand("correct", "Apply a low-signal correction to a counts grid");
  correct->add_option("--in", in_path, "Counts grid (header .json)")->required();
  correct->add_option("--method", method, "af | ft | none")->required();
  correct->add_option("--config", config_path, "Run configuration (JSON)");
  correct->add_option("--out", out_dir, "Output directory")->required();

  auto* recon = app.add_subcommand("recon", "Filtered backprojection of selected rows");
  recon->add_option("--in", in_path, "Counts or projection grid")->required();
  recon->add_option("--config", config_path, "Run configuration (JSON)")->required();
  recon->add_option("--rows", rows, "Row range a..b (default: all)");
  recon->add_option("--out", out_dir, "Output directory")->required();

  auto* metrics = app.add_subcommand("metrics", "ROI statistics, NPS and wire MTF");
  metrics->add_option("--images", images, "Reconstructed images")->required();
  metrics->add_option("--config", config_path, "Run configuration with a 'metrics' section")->required();
  metrics->add_option("--out", out_dir, "Output directory")->required();

  auto* repro = app.add_subcommand("repro", "Run the full evaluation and write a summary");
  repro->add_option("--config", config_path, "Experiment description (JSON)")->required();
  repro->add_option("--seed", seed, "Noise seed for every experiment");
  repro->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const auto load = [&]() { return config_path.empty() ? RunConfig{} : RunConfig::load(config_path); };
    if (*simulate) {
      cmd_simulate(load(), phantom_path.empty() ? std::nullopt : std::optional<fs::path>(phantom_path), seed, out_dir);
    } else if (*correct) {
      const Method m = parse_method(method);
      cmd_correct(in_path, m, load(), out_dir);
    } else if (*recon) {
      cmd_recon(in_path, load(), out_dir, rows.empty() ? std::nullopt : std::optional<RowRange>(parse_rows(rows)));
    } else if (*metrics) {
      std::vector<fs::path> paths(images.begin(), images.end());
      cmd_metrics(paths, load(), out_dir);
    } else if (*repro) {
      cmd_repro(config_path, out_dir, seed);
    }
  } catch (const lowsig::ConfigError& e) {
    std::cerr << "lowsig: " << e.what() << '\n';
    return kExitUsage;
  } catch (const lowsig::DataError& e) {
    std::cerr << "lowsig: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "lowsig: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
