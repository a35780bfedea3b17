#pragma once

// Experiment configuration, orchestration and result emission.
//
// Configs are JSON objects; see presets/ for one file per reproduced figure.
// All numbers are written with std::to_chars shortest round-trip formatting,
// so results are independent of locale and byte-stable across runs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mmnoma/allocation.hpp"
#include "mmnoma/channel_gen.hpp"

namespace mmnoma {

enum class ExperimentKind {
  beampattern,         // designed vs ideal pattern for fixed AoAs
  gain_vs_n,           // designed vs ideal gains over N
  gain_error,          // Monte Carlo relative gain errors over N
  rate_vs_constraint,  // designed vs bound rates over r1 = r2
  rate_vs_snr,         // designed vs bound rates over P/sigma^2
  noma_vs_oma,         // Monte Carlo NOMA (theoretical/practical) vs OMA
};

enum class SweepVariable { antennas, rate, snr_db };
enum class OutputFormat { csv, json };

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(SweepVariable variable);

struct FixedUsers {
  double lambda1 = 0.9;
  double lambda2 = 0.4;
  double omega1 = -0.7;
  double omega2 = 0.5;

  bool operator==(const FixedUsers&) const = default;
};

struct StochasticChannels {
  std::vector<ChannelKind> kinds{ChannelKind::los};
  int paths = 4;
  double user1_scale = 1.0;
  double user2_scale = 0.3;
  double los_power = 1.0;
  double los_nlos_path_power_db = -15.0;
  NlosPowerConvention nlos_convention = NlosPowerConvention::unit_total;
  bool separate_aoas = true;

  ChannelScenario scenario(ChannelKind kind, int num_antennas, double user_scale) const;
  bool operator==(const StochasticChannels&) const = default;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::beampattern;
  std::string name;
  std::string description;
  SystemParams params;
  FixedUsers users;
  StochasticChannels channels;
  double target_fraction = 2.0 / 3.0;
  SweepVariable sweep_variable = SweepVariable::antennas;
  std::vector<double> sweep;
  int trials = 1000;
  std::uint64_t seed = 1;
  int grid_points = 1001;
  double tol = 1e-8;
  OutputFormat format = OutputFormat::csv;
  std::string out_dir;  // empty: caller decides

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates a config. Throws Errc::parse_error with line/column
/// for malformed JSON and Errc::validation_error listing every problem.
/// A run manifest is accepted too; its embedded config is used.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved config, re-parseable by parse_config.
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  int points = 0;             // sweep points evaluated
  int infeasible_points = 0;  // sweep points with no feasible result
};

ResultTable compute_results(const ExperimentConfig& config);

std::string to_csv(const ResultTable& table);
nlohmann::ordered_json to_json(const ResultTable& table, const ExperimentConfig& config);

struct RunArtifacts {
  std::filesystem::path results;
  std::filesystem::path manifest;
  ResultTable table;
};

/// Computes results and writes `results.{csv,json}` plus `manifest.json`
/// into out_dir. Throws Errc::io_error on filesystem failures.
RunArtifacts run_experiment(const ExperimentConfig& config,
                            const std::filesystem::path& out_dir);

std::string_view library_version();

}  // namespace mmnoma
