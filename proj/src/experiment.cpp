#include "mmnoma/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mmnoma/beamformer.hpp"
#include "mmnoma/error.hpp"
#include "mmnoma/evaluation.hpp"

#ifndef MMNOMA_VERSION
#define MMNOMA_VERSION "0.0.0"
#endif

namespace mmnoma {

using json = nlohmann::ordered_json;

std::string_view library_version() { return MMNOMA_VERSION; }

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kExperimentNames[] = {
    {ExperimentKind::beampattern, "beampattern"},
    {ExperimentKind::gain_vs_n, "gain-vs-N"},
    {ExperimentKind::gain_error, "gain-error"},
    {ExperimentKind::rate_vs_constraint, "rate-vs-constraint"},
    {ExperimentKind::rate_vs_snr, "rate-vs-snr"},
    {ExperimentKind::noma_vs_oma, "noma-vs-oma"},
};

constexpr std::pair<SweepVariable, std::string_view> kSweepNames[] = {
    {SweepVariable::antennas, "N"},
    {SweepVariable::rate, "r"},
    {SweepVariable::snr_db, "snr_db"},
};

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kExperimentNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::string_view to_string(SweepVariable variable) {
  for (const auto& [v, name] : kSweepNames) {
    if (v == variable) return name;
  }
  return "unknown";
}

ChannelScenario StochasticChannels::scenario(ChannelKind kind, int num_antennas,
                                             double user_scale) const {
  if (kind == ChannelKind::los) {
    auto s = los_scenario(num_antennas, paths, user_scale);
    s.los_power = los_power;
    s.nlos_path_power = std::pow(10.0, los_nlos_path_power_db / 10.0);
    return s;
  }
  return nlos_scenario(num_antennas, paths, user_scale, nlos_convention);
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

bool sweep_required(ExperimentKind kind) { return kind != ExperimentKind::beampattern; }

class FieldReader {
 public:
  FieldReader(const json& object, std::string prefix, std::vector<std::string>& problems)
      : object_(object), prefix_(std::move(prefix)), problems_(problems) {}

  bool has(const std::string& key) {
    seen_.insert(key);
    return object_.contains(key);
  }

  template <typename T>
  bool read(const std::string& key, T& out) {
    if (!has(key)) return false;
    const auto& v = object_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) return type_error(key, "boolean");
      out = v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) return type_error(key, "string");
      out = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        return type_error(key, "non-negative integer");
      }
      out = v.get<std::uint64_t>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) return type_error(key, "integer");
      const auto wide = v.get<std::int64_t>();
      if (wide < std::numeric_limits<T>::min() || wide > std::numeric_limits<T>::max()) {
        return type_error(key, "integer in range");
      }
      out = static_cast<T>(wide);
    } else {
      if (!v.is_number()) return type_error(key, "number");
      out = v.get<double>();
    }
    return true;
  }

  bool read_numbers(const std::string& key, std::vector<double>& out) {
    if (!has(key)) return false;
    const auto& v = object_.at(key);
    if (!v.is_array()) return type_error(key, "array of numbers");
    std::vector<double> values;
    for (const auto& e : v) {
      if (!e.is_number()) return type_error(key, "array of numbers");
      values.push_back(e.get<double>());
    }
    out = std::move(values);
    return true;
  }

  const json* object(const std::string& key) {
    if (!has(key)) return nullptr;
    const auto& v = object_.at(key);
    if (!v.is_object()) {
      type_error(key, "object");
      return nullptr;
    }
    return &v;
  }

  void problem(const std::string& key, const std::string& what) {
    problems_.push_back("field '" + prefix_ + key + "': " + what);
  }

  void check_unknown() {
    for (const auto& [key, value] : object_.items()) {
      if (!seen_.contains(key)) problem(key, "unknown field");
    }
  }

 private:
  bool type_error(const std::string& key, const char* expected) {
    problem(key, std::string("expected ") + expected + ", got " +
                     object_.at(key).type_name());
    return false;
  }

  const json& object_;
  std::string prefix_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

// Defaults follow the reproduced figures: beam experiments use
// |lambda2| = 0.4, fixed-channel rate experiments |lambda2| = 0.2.
void apply_experiment_defaults(ExperimentConfig& c) {
  c.sweep_variable = SweepVariable::antennas;
  switch (c.experiment) {
    case ExperimentKind::beampattern:
    case ExperimentKind::gain_vs_n:
    case ExperimentKind::gain_error:
      c.users.lambda2 = 0.4;
      break;
    case ExperimentKind::rate_vs_constraint:
      c.users.lambda2 = 0.2;
      c.sweep_variable = SweepVariable::rate;
      break;
    case ExperimentKind::rate_vs_snr:
      c.users.lambda2 = 0.2;
      c.params.min_rate1 = c.params.min_rate2 = 3.0;
      c.sweep_variable = SweepVariable::snr_db;
      break;
    case ExperimentKind::noma_vs_oma:
      c.params.max_power = std::pow(10.0, 2.5);
      c.params.min_rate1 = c.params.min_rate2 = 2.0;
      c.sweep_variable = SweepVariable::rate;
      break;
  }
}

void parse_channels(const json& obj, StochasticChannels& ch, std::vector<std::string>& problems) {
  FieldReader r(obj, "channel.", problems);
  if (r.has("kinds")) {
    const auto& v = obj.at("kinds");
    std::vector<ChannelKind> kinds;
    bool ok = v.is_array() && !v.empty();
    if (ok) {
      for (const auto& e : v) {
        const std::string s = e.is_string() ? e.get<std::string>() : "";
        if (s == "LOS") {
          kinds.push_back(ChannelKind::los);
        } else if (s == "NLOS") {
          kinds.push_back(ChannelKind::nlos);
        } else {
          ok = false;
        }
      }
    }
    if (ok) {
      ch.kinds = kinds;
    } else {
      r.problem("kinds", "expected non-empty array of \"LOS\" / \"NLOS\"");
    }
  }
  r.read("paths", ch.paths);
  std::vector<double> scales;
  if (r.read_numbers("user_scale", scales)) {
    if (scales.size() == 2) {
      ch.user1_scale = scales[0];
      ch.user2_scale = scales[1];
    } else {
      r.problem("user_scale", "expected exactly two amplitude scales");
    }
  }
  r.read("los_power", ch.los_power);
  r.read("nlos_path_power_db", ch.los_nlos_path_power_db);
  std::string convention;
  if (r.read("nlos_power", convention)) {
    if (convention == "unit_total") {
      ch.nlos_convention = NlosPowerConvention::unit_total;
    } else if (convention == "inverse_sqrt_paths") {
      ch.nlos_convention = NlosPowerConvention::inverse_sqrt_paths;
    } else {
      r.problem("nlos_power", "expected \"unit_total\" or \"inverse_sqrt_paths\"");
    }
  }
  r.read("separate_aoas", ch.separate_aoas);
  r.check_unknown();

  if (ch.paths < 1) r.problem("paths", "must be >= 1");
  if (!(ch.user1_scale > 0.0) || !(ch.user2_scale > 0.0)) r.problem("user_scale", "must be > 0");
  if (!(ch.los_power >= 0.0)) r.problem("los_power", "must be >= 0");
}

void validate(const ExperimentConfig& c, FieldReader& r) {
  const auto& p = c.params;
  if (p.num_antennas < 2) r.problem("N", "must be >= 2");
  if (!(p.max_power > 0.0) || !std::isfinite(p.max_power)) r.problem("P_mW", "must be > 0");
  if (!(p.noise_power > 0.0) || !std::isfinite(p.noise_power)) r.problem("sigma2_mW", "must be > 0");
  if (!(p.min_rate1 >= 0.0)) r.problem("r1", "must be >= 0");
  if (!(p.min_rate2 >= 0.0)) r.problem("r2", "must be >= 0");
  if (p.num_phases < 1) r.problem("M", "must be >= 1");
  if (!(c.tol > 0.0)) r.problem("tol", "must be > 0");
  if (c.trials < 1) r.problem("trials", "must be >= 1");
  if (c.grid_points < 2) r.problem("grid_points", "must be >= 2");

  const auto& u = c.users;
  if (!(u.lambda2 > 0.0)) r.problem("lambda2", "must be > 0");
  if (!(u.lambda1 >= u.lambda2)) r.problem("lambda1", "must be >= lambda2 (label the stronger user 1)");
  if (!(u.omega1 >= -1.0 && u.omega1 <= 1.0)) r.problem("omega1", "must lie in [-1, 1]");
  if (!(u.omega2 >= -1.0 && u.omega2 <= 1.0)) r.problem("omega2", "must lie in [-1, 1]");
  if (!(c.target_fraction > 0.0) || c.target_fraction > u.lambda1 * u.lambda1) {
    r.problem("target_gain_fraction", "must lie in (0, lambda1^2]");
  }

  if (c.sweep.empty()) {
    r.problem("sweep", "required and non-empty for experiment " +
                           std::string(to_string(c.experiment)));
  }
  for (double x : c.sweep) {
    switch (c.sweep_variable) {
      case SweepVariable::antennas: {
        const int minimum = c.experiment == ExperimentKind::gain_error ? 3 : 2;
        if (x != std::floor(x) || x < minimum || x > 4096) {
          r.problem("sweep", "antenna counts must be integers in [" + std::to_string(minimum) +
                                 ", 4096]");
          return;
        }
        break;
      }
      case SweepVariable::rate:
        if (!(x >= 0.0) || !std::isfinite(x)) {
          r.problem("sweep", "rate constraints must be finite and >= 0");
          return;
        }
        break;
      case SweepVariable::snr_db:
        if (!std::isfinite(x)) {
          r.problem("sweep", "P/sigma^2 values must be finite");
          return;
        }
        break;
    }
  }
  if (c.experiment == ExperimentKind::noma_vs_oma && c.channels.separate_aoas &&
      p.num_antennas < 3) {
    r.problem("N", "AoA separation needs N >= 3");
  }
}

ExperimentConfig parse_object(const json& root) {
  std::vector<std::string> problems;
  FieldReader r(root, "", problems);
  ExperimentConfig c;

  std::string experiment;
  if (!r.read("experiment", experiment)) {
    if (!r.has("experiment")) r.problem("experiment", "required");
    throw Error(Errc::validation_error, "config invalid: " + problems.front());
  }
  bool known = false;
  for (const auto& [kind, name] : kExperimentNames) {
    if (name == experiment) {
      c.experiment = kind;
      known = true;
    }
  }
  if (!known) {
    throw Error(Errc::validation_error,
                "config invalid: field 'experiment': unknown experiment '" + experiment + "'");
  }
  apply_experiment_defaults(c);
  c.name = experiment;

  r.read("name", c.name);
  r.read("description", c.description);
  r.read("N", c.params.num_antennas);
  r.read("sigma2_mW", c.params.noise_power);
  const bool has_power = r.read("P_mW", c.params.max_power);
  double snr_db = 0.0;
  if (r.read("snr_db", snr_db)) {
    if (has_power) r.problem("snr_db", "give either P_mW or snr_db, not both");
    c.params.max_power = c.params.noise_power * std::pow(10.0, snr_db / 10.0);
  }
  r.read("r1", c.params.min_rate1);
  r.read("r2", c.params.min_rate2);
  r.read("M", c.params.num_phases);
  r.read("tol", c.tol);
  r.read("lambda1", c.users.lambda1);
  r.read("lambda2", c.users.lambda2);
  r.read("omega1", c.users.omega1);
  r.read("omega2", c.users.omega2);
  r.read("target_gain_fraction", c.target_fraction);
  if (const json* ch = r.object("channel")) parse_channels(*ch, c.channels, problems);

  std::string variable;
  if (r.read("sweep_variable", variable)) {
    if (c.experiment != ExperimentKind::noma_vs_oma) {
      r.problem("sweep_variable", "only configurable for noma-vs-oma");
    } else if (variable == "r") {
      c.sweep_variable = SweepVariable::rate;
    } else if (variable == "snr_db") {
      c.sweep_variable = SweepVariable::snr_db;
    } else {
      r.problem("sweep_variable", "expected \"r\" or \"snr_db\"");
    }
  }
  if (!r.read_numbers("sweep", c.sweep) && !sweep_required(c.experiment)) {
    c.sweep = {static_cast<double>(c.params.num_antennas)};
  }
  r.read("trials", c.trials);
  r.read("seed", c.seed);
  r.read("grid_points", c.grid_points);
  std::string format;
  if (r.read("format", format)) {
    if (format == "csv") {
      c.format = OutputFormat::csv;
    } else if (format == "json") {
      c.format = OutputFormat::json;
    } else {
      r.problem("format", "expected \"csv\" or \"json\"");
    }
  }
  r.read("out_dir", c.out_dir);
  r.check_unknown();
  validate(c, r);

  if (!problems.empty()) {
    std::string msg = "config invalid (" + std::to_string(problems.size()) + " problem" +
                      (problems.size() == 1 ? "" : "s") + "):";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw Error(Errc::validation_error, msg);
  }
  return c;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse_error, std::string(source) + ": " +
                                       line_col(text, e.byte == 0 ? 0 : e.byte - 1) +
                                       ": malformed JSON (" + e.what() + ")");
  }
  if (!root.is_object()) {
    throw Error(Errc::parse_error, std::string(source) + ": top level must be a JSON object");
  }
  if (root.contains("manifest_version")) {
    if (!root.contains("config") || !root.at("config").is_object()) {
      throw Error(Errc::validation_error, std::string(source) + ": manifest has no config object");
    }
    return parse_object(root.at("config"));
  }
  return parse_object(root);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["name"] = c.name;
  if (!c.description.empty()) j["description"] = c.description;
  j["N"] = c.params.num_antennas;
  j["P_mW"] = c.params.max_power;
  j["sigma2_mW"] = c.params.noise_power;
  j["r1"] = c.params.min_rate1;
  j["r2"] = c.params.min_rate2;
  j["M"] = c.params.num_phases;
  j["tol"] = c.tol;
  j["lambda1"] = c.users.lambda1;
  j["lambda2"] = c.users.lambda2;
  j["omega1"] = c.users.omega1;
  j["omega2"] = c.users.omega2;
  j["target_gain_fraction"] = c.target_fraction;
  json ch;
  json kinds = json::array();
  for (auto k : c.channels.kinds) kinds.push_back(k == ChannelKind::los ? "LOS" : "NLOS");
  ch["kinds"] = kinds;
  ch["paths"] = c.channels.paths;
  ch["user_scale"] = {c.channels.user1_scale, c.channels.user2_scale};
  ch["los_power"] = c.channels.los_power;
  ch["nlos_path_power_db"] = c.channels.los_nlos_path_power_db;
  ch["nlos_power"] = c.channels.nlos_convention == NlosPowerConvention::unit_total
                         ? "unit_total"
                         : "inverse_sqrt_paths";
  ch["separate_aoas"] = c.channels.separate_aoas;
  j["channel"] = ch;
  if (c.experiment == ExperimentKind::noma_vs_oma) {
    j["sweep_variable"] = to_string(c.sweep_variable);
  }
  j["sweep"] = c.sweep;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["grid_points"] = c.grid_points;
  j["format"] = c.format == OutputFormat::csv ? "csv" : "json";
  if (!c.out_dir.empty()) j["out_dir"] = c.out_dir;
  return j;
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

GeometrySpec geometry(const ExperimentConfig& c, int n) {
  return GeometrySpec{n,
                      c.users.lambda1,
                      c.users.lambda2,
                      c.users.omega1,
                      c.users.omega2,
                      c.target_fraction,
                      c.params.num_phases,
                      c.tol};
}

double wrapped_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0);
  return std::min(d, 2.0 - d);
}

// Rectangular beams of width 2/N holding the ideal array gains.
double ideal_pattern(double omega, int n, const FixedUsers& u, const BeamGains& ideal) {
  const double half_width = 1.0 / static_cast<double>(n);
  double gain = 0.0;
  if (wrapped_distance(omega, u.omega1) <= half_width) gain += ideal.c1 / (u.lambda1 * u.lambda1);
  if (wrapped_distance(omega, u.omega2) <= half_width) gain += ideal.c2 / (u.lambda2 * u.lambda2);
  return gain;
}

bool is_infeasible(const Error& e) {
  return e.code() == Errc::infeasible_constraint || e.code() == Errc::infeasible_gain;
}

void beampattern(const ExperimentConfig& c, ResultTable& t) {
  t.columns = {"N", "omega", "gain_designed", "gain_ideal"};
  const auto grid = uniform_grid(static_cast<std::size_t>(c.grid_points));
  for (double x : c.sweep) {
    const int n = static_cast<int>(x);
    ++t.points;
    try {
      const auto design = design_for_targets(geometry(c, n));
      for (const auto& pt : beam_pattern(design.solution.w, grid)) {
        t.rows.push_back({std::int64_t{n}, pt.omega, pt.gain,
                          ideal_pattern(pt.omega, n, c.users, design.ideal)});
      }
    } catch (const Error& e) {
      if (!is_infeasible(e)) throw;
      ++t.infeasible_points;
    }
  }
}

void gain_vs_n(const ExperimentConfig& c, ResultTable& t) {
  t.columns = {"N", "c1_designed", "c2_designed", "sum_designed",
               "c1_ideal", "c2_ideal", "sum_ideal", "status"};
  for (double x : c.sweep) {
    const int n = static_cast<int>(x);
    ++t.points;
    try {
      const auto d = design_for_targets(geometry(c, n));
      t.rows.push_back({std::int64_t{n}, d.designed.c1, d.designed.c2,
                        d.designed.c1 + d.designed.c2, d.ideal.c1, d.ideal.c2,
                        d.ideal.c1 + d.ideal.c2, std::string("ok")});
    } catch (const Error& e) {
      if (!is_infeasible(e)) throw;
      ++t.infeasible_points;
      t.rows.push_back({std::int64_t{n}, {}, {}, {}, {}, {}, {}, std::string("infeasible")});
    }
  }
}

void append_summary(ResultTable& t, const std::vector<Cell>& prefix,
                    const MonteCarloSummary& s) {
  for (const auto& stat : s.stats) {
    auto row = prefix;
    row.emplace_back(stat.name);
    if (stat.count > 0) {
      row.emplace_back(stat.mean);
      row.emplace_back(stat.stddev);
    } else {
      row.emplace_back(std::monostate{});
      row.emplace_back(std::monostate{});
    }
    row.emplace_back(std::int64_t{stat.count});
    row.emplace_back(std::int64_t{s.trials});
    row.emplace_back(std::int64_t{s.infeasible});
    t.rows.push_back(std::move(row));
  }
}

const std::vector<std::string> kSummaryColumns = {"statistic", "mean",   "stddev",
                                                  "count",     "trials", "infeasible"};

void gain_error_experiment(const ExperimentConfig& c, ResultTable& t) {
  t.columns = {"N"};
  t.columns.insert(t.columns.end(), kSummaryColumns.begin(), kSummaryColumns.end());
  for (double x : c.sweep) {
    const int n = static_cast<int>(x);
    ++t.points;
    GainTrialConfig g{n, c.users.lambda1, c.users.lambda2, c.target_fraction,
                      c.params.num_phases, c.tol};
    try {
      append_summary(t, {std::int64_t{n}}, run_monte_carlo(g, c.trials, c.seed));
    } catch (const Error& e) {
      if (!is_infeasible(e)) throw;
      ++t.infeasible_points;
    }
  }
}

void fixed_rate_experiment(const ExperimentConfig& c, ResultTable& t) {
  const bool by_rate = c.sweep_variable == SweepVariable::rate;
  t.columns = {by_rate ? "r" : "snr_db", "R1_designed", "R2_designed", "sum_designed",
               "R1_bound", "R2_bound", "sum_bound", "status"};
  const int n = c.params.num_antennas;
  const EffectiveChannel u1(c.users.lambda1, c.users.omega1, n);
  const EffectiveChannel u2(c.users.lambda2, c.users.omega2, n);
  for (double x : c.sweep) {
    ++t.points;
    SystemParams p = c.params;
    if (by_rate) {
      p.min_rate1 = p.min_rate2 = x;
    } else {
      p.max_power = p.noise_power * std::pow(10.0, x / 10.0);
    }
    const auto o = evaluate_fixed_channels(p, u1, u2, c.tol);
    if (o.status == TrialStatus::infeasible_r2) {
      ++t.infeasible_points;
      t.rows.push_back({x, {}, {}, {}, {}, {}, {}, std::string(to_string(o.status))});
      continue;
    }
    if (o.status != TrialStatus::ok) ++t.infeasible_points;
    t.rows.push_back({x, o.designed_rates.r1, o.designed_rates.r2, o.designed_rates.sum(),
                      o.bound_rates.r1, o.bound_rates.r2, o.bound,
                      std::string(to_string(o.status))});
  }
}

void noma_vs_oma(const ExperimentConfig& c, ResultTable& t) {
  const bool by_rate = c.sweep_variable == SweepVariable::rate;
  t.columns = {"channel", by_rate ? "r" : "snr_db"};
  t.columns.insert(t.columns.end(), kSummaryColumns.begin(), kSummaryColumns.end());
  const int n = c.params.num_antennas;
  for (auto kind : c.channels.kinds) {
    RateTrialConfig rc;
    rc.user1 = c.channels.scenario(kind, n, c.channels.user1_scale);
    rc.user2 = c.channels.scenario(kind, n, c.channels.user2_scale);
    rc.separate_effective_aoas = c.channels.separate_aoas;
    rc.tol = c.tol;
    const std::string label = kind == ChannelKind::los ? "LOS" : "NLOS";
    for (double x : c.sweep) {
      ++t.points;
      rc.params = c.params;
      if (by_rate) {
        rc.params.min_rate1 = rc.params.min_rate2 = x;
      } else {
        rc.params.max_power = c.params.noise_power * std::pow(10.0, x / 10.0);
      }
      const auto s = run_monte_carlo(rc, c.trials, c.seed);
      if (s.infeasible == s.trials) ++t.infeasible_points;
      append_summary(t, {label, x}, s);
    }
  }
}

void append_cell(std::string& out, const Cell& cell) {
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return;
        } else if constexpr (std::is_same_v<T, std::string>) {
          out += v;
        } else {
          char buf[64];
          const auto res = std::to_chars(buf, buf + sizeof buf, v);
          out.append(buf, res.ptr);
        }
      },
      cell);
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw Error(Errc::io_error, "failed writing " + path.string());
}

}  // namespace

ResultTable compute_results(const ExperimentConfig& config) {
  ResultTable t;
  switch (config.experiment) {
    case ExperimentKind::beampattern: beampattern(config, t); break;
    case ExperimentKind::gain_vs_n: gain_vs_n(config, t); break;
    case ExperimentKind::gain_error: gain_error_experiment(config, t); break;
    case ExperimentKind::rate_vs_constraint:
    case ExperimentKind::rate_vs_snr: fixed_rate_experiment(config, t); break;
    case ExperimentKind::noma_vs_oma: noma_vs_oma(config, t); break;
  }
  return t;
}

std::string to_csv(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      append_cell(out, row[i]);
    }
    out += '\n';
  }
  return out;
}

json to_json(const ResultTable& table, const ExperimentConfig& config) {
  json j;
  j["experiment"] = to_string(config.experiment);
  j["name"] = config.name;
  j["columns"] = table.columns;
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r;
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              r[table.columns[i]] = nullptr;
            } else {
              r[table.columns[i]] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["points"] = table.points;
  j["infeasible_points"] = table.infeasible_points;
  return j;
}

RunArtifacts run_experiment(const ExperimentConfig& config,
                            const std::filesystem::path& out_dir) {
  RunArtifacts a;
  a.table = compute_results(config);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + out_dir.string() + ": " + ec.message());

  const bool csv = config.format == OutputFormat::csv;
  a.results = out_dir / (csv ? "results.csv" : "results.json");
  write_file(a.results, csv ? to_csv(a.table) : to_json(a.table, config).dump(2) + "\n");

  json manifest;
  manifest["manifest_version"] = 1;
  manifest["tool"] = "mmnoma";
  manifest["library_version"] = library_version();
  manifest["seed"] = config.seed;
  manifest["results"] = a.results.filename().string();
  manifest["points"] = a.table.points;
  manifest["infeasible_points"] = a.table.infeasible_points;
  manifest["config"] = config_to_json(config);
  a.manifest = out_dir / "manifest.json";
  write_file(a.manifest, manifest.dump(2) + "\n");
  return a;
}

}  // namespace mmnoma
