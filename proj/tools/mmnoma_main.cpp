// mmnoma command-line driver.
//
//   mmnoma run --config <file|preset> [--seed S] [--out DIR] [--format csv|json] [--threads T]
//   mmnoma presets list
//
// Exit codes: 0 success, 2 config error, 3 every sweep point infeasible, 4 I/O error.

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmnoma/error.hpp"
#include "mmnoma/experiment.hpp"

#ifndef MMNOMA_PRESET_DIR
#define MMNOMA_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

fs::path preset_dir() {
  if (const char* env = std::getenv("MMNOMA_PRESET_DIR"); env && *env) return env;
  return MMNOMA_PRESET_DIR;
}

std::vector<fs::path> preset_files() {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(preset_dir(), ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

// A path that exists wins; otherwise the argument names a preset.
fs::path resolve_config(const std::string& arg) {
  if (fs::is_regular_file(arg)) return arg;
  const fs::path candidate = preset_dir() / (arg + ".json");
  if (fs::is_regular_file(candidate)) return candidate;
  throw mmnoma::Error(mmnoma::Errc::io_error,
                      "config '" + arg + "' is neither a file nor a preset in " +
                          preset_dir().string());
}

int exit_code_for(mmnoma::Errc code) {
  switch (code) {
    case mmnoma::Errc::io_error: return kExitIo;
    case mmnoma::Errc::infeasible_constraint:
    case mmnoma::Errc::infeasible_gain: return kExitInfeasible;
    default: return kExitConfig;
  }
}

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  int threads = 0;
};

int run(const RunOptions& opt) {
  auto config = mmnoma::load_config(resolve_config(opt.config));
  if (opt.seed) config.seed = *opt.seed;
  if (opt.format == "csv") config.format = mmnoma::OutputFormat::csv;
  if (opt.format == "json") config.format = mmnoma::OutputFormat::json;
  if (opt.threads > 0) omp_set_num_threads(opt.threads);

  fs::path out_dir;
  if (!opt.out.empty()) {
    out_dir = opt.out;
  } else if (const char* env = std::getenv("MMNOMA_OUT_DIR"); env && *env) {
    out_dir = env;
  } else if (!config.out_dir.empty()) {
    out_dir = config.out_dir;
  } else {
    out_dir = fs::path("out") / config.name;
  }

  const auto artifacts = mmnoma::run_experiment(config, out_dir);
  const auto& t = artifacts.table;
  std::cout << config.name << ": " << t.rows.size() << " rows, " << t.points << " points, "
            << t.infeasible_points << " infeasible\n"
            << "  " << artifacts.results.string() << "\n"
            << "  " << artifacts.manifest.string() << "\n";
  if (t.points > 0 && t.infeasible_points == t.points) {
    std::cerr << "error: every sweep point is infeasible\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int list_presets() {
  const auto files = preset_files();
  if (files.empty()) {
    std::cerr << "no presets found in " << preset_dir().string() << "\n";
    return kExitIo;
  }
  for (const auto& file : files) {
    const auto config = mmnoma::load_config(file);
    std::cout << file.stem().string() << "\t" << mmnoma::to_string(config.experiment);
    if (!config.description.empty()) std::cout << "\t" << config.description;
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint power control and constant-modulus beamforming for 2-user uplink mmWave NOMA"};
  app.set_version_flag("--version", std::string(mmnoma::library_version()));
  app.require_subcommand(1);

  RunOptions opt;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment and write results + manifest");
  run_cmd->add_option("--config", opt.config, "Config file or preset name")->required();
  run_cmd->add_option("--seed", opt.seed, "Override the base seed");
  run_cmd->add_option("--out", opt.out, "Output directory (overrides MMNOMA_OUT_DIR)");
  run_cmd->add_option("--format", opt.format, "Results format")
      ->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--threads", opt.threads, "OpenMP threads (0: runtime default)")
      ->check(CLI::NonNegativeNumber);

  auto* presets_cmd = app.add_subcommand("presets", "Shipped experiment presets");
  presets_cmd->require_subcommand(1);
  auto* list_cmd = presets_cmd->add_subcommand("list", "List preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return run(opt);
    if (*list_cmd) return list_presets();
  } catch (const mmnoma::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
