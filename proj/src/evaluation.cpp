#include "mmnoma/evaluation.hpp"

#include <cmath>
#include <exception>
#include <optional>
#include <string>

#include "mmnoma/error.hpp"

namespace mmnoma {

RatePair rates_case1(const ComplexVector& h1, const ComplexVector& h2,
                     const ComplexVector& w, double p1, double p2, double sigma2) {
  const double s1 = beam_gain(h1, w) * p1;
  const double s2 = beam_gain(h2, w) * p2;
  return {std::log2(1.0 + s1 / (s2 + sigma2)), std::log2(1.0 + s2 / sigma2)};
}

RatePair rates_case2(const ComplexVector& h1, const ComplexVector& h2,
                     const ComplexVector& w, double p1, double p2, double sigma2) {
  const double s1 = beam_gain(h1, w) * p1;
  const double s2 = beam_gain(h2, w) * p2;
  return {std::log2(1.0 + s1 / sigma2), std::log2(1.0 + s2 / (s1 + sigma2))};
}

double oma_sum_rate(double lambda1, double lambda2, int num_antennas, double max_power,
                    double sigma2) {
  const double half_gain = 0.5 * static_cast<double>(num_antennas);
  const double burst = 2.0 * max_power / sigma2;
  return 0.5 * std::log2(1.0 + half_gain * lambda1 * lambda1 * burst) +
         0.5 * std::log2(1.0 + half_gain * lambda2 * lambda2 * burst);
}

GainErrorReport gain_error(const BeamGains& designed, const BeamGains& ideal) {
  if (!(ideal.c1 > 0.0) || !(ideal.c2 >= 0.0)) {
    throw Error(Errc::invalid_argument, "ideal gains must satisfy c1 > 0, c2 >= 0");
  }
  GainErrorReport r;
  r.err_user1 = std::abs(designed.c1 - ideal.c1) / ideal.c1;
  r.err_user2 = ideal.c2 > 0.0 ? std::abs(designed.c2 - ideal.c2) / ideal.c2 : 0.0;
  const double ideal_sum = ideal.c1 + ideal.c2;
  r.err_sum = std::abs((designed.c1 + designed.c2) - ideal_sum) / ideal_sum;
  return r;
}

BeamGains target_gains(int num_antennas, double lambda1, double lambda2, double fraction) {
  if (!(fraction > 0.0) || !(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw Error(Errc::invalid_argument, "target gains need positive fraction and moduli");
  }
  const double n = static_cast<double>(num_antennas);
  BeamGains g;
  g.c1 = fraction * n;
  g.c2 = (n - g.c1 / (lambda1 * lambda1)) * lambda2 * lambda2;
  if (g.c2 < 0.0) {
    throw Error(Errc::infeasible_constraint,
                "User-1 target exceeds the ideal gain budget |lambda1|^2 N");
  }
  return g;
}

namespace {

BeamGains designed_gains(const ComplexVector& w, const ComplexVector& a1,
                         const ComplexVector& a2, double lambda1, double lambda2) {
  return {lambda1 * lambda1 * beam_gain(a1, w), lambda2 * lambda2 * beam_gain(a2, w)};
}

double amplitude_for_gain(double c2, double lambda2) {
  return std::sqrt(c2 / (lambda2 * lambda2));
}

}  // namespace

GainDesign design_for_targets(const GeometrySpec& spec) {
  const auto ideal = target_gains(spec.num_antennas, spec.lambda1, spec.lambda2,
                                  spec.target_fraction);
  BeamformingRequest req{steering_vector(spec.num_antennas, spec.omega1),
                         steering_vector(spec.num_antennas, spec.omega2),
                         amplitude_for_gain(ideal.c2, spec.lambda2), spec.num_phases,
                         spec.tol};
  auto sol = solve_cm_beamforming(req);
  const auto designed = designed_gains(sol.w, req.a1, req.a2, spec.lambda1, spec.lambda2);
  return GainDesign{ideal, designed, gain_error(designed, ideal), std::move(sol)};
}

std::string_view to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::ok: return "ok";
    case TrialStatus::infeasible_r2: return "infeasible-r2";
    case TrialStatus::infeasible_r1: return "infeasible-r1";
  }
  return "unknown";
}

FixedChannelOutcome evaluate_fixed_channels(const SystemParams& params,
                                            const EffectiveChannel& user1,
                                            const EffectiveChannel& user2, double tol) {
  params.validate();
  if (user1.num_antennas() != params.num_antennas ||
      user2.num_antennas() != params.num_antennas) {
    throw Error(Errc::length_mismatch, "channel antenna count differs from N");
  }
  const double l1 = user1.modulus();
  const double l2 = user2.modulus();
  FixedChannelOutcome out;
  try {
    out.alloc = allocate_case1(l1, l2, params);
  } catch (const Error& e) {
    if (e.code() != Errc::infeasible_constraint) throw;
    out.status = TrialStatus::infeasible_r2;
    return out;
  }
  out.bound = sum_rate_bound(out.alloc, params);
  out.bound_rates = allocation_rates(out.alloc, params);
  if (!check_r1_feasibility(out.alloc, l1, l2, params)) {
    out.status = TrialStatus::infeasible_r1;
  }

  BeamformingRequest req{steering_vector(params.num_antennas, user1.cos_aoa()),
                         steering_vector(params.num_antennas, user2.cos_aoa()),
                         amplitude_for_gain(out.alloc.c2, l2), params.num_phases, tol};
  auto sol = solve_cm_beamforming(req);
  out.designed_rates = rates_case1(user1.response(), user2.response(), sol.w, out.alloc.p1,
                                   out.alloc.p2, params.noise_power);
  out.errors = gain_error(designed_gains(sol.w, req.a1, req.a2, l1, l2),
                          {out.alloc.c1, out.alloc.c2});
  out.solution.emplace(std::move(sol));
  return out;
}

void RateTrialConfig::validate() const {
  params.validate();
  user1.validate();
  user2.validate();
  if (user1.num_antennas != params.num_antennas || user2.num_antennas != params.num_antennas) {
    throw Error(Errc::invalid_argument, "scenario antenna count differs from N");
  }
  if (separate_effective_aoas && params.num_antennas <= 2) {
    throw Error(Errc::invalid_argument, "AoA separation needs N >= 3");
  }
}

namespace {

// Upper bound on channel redraws while looking for a separated pair. With
// uniform AoAs the acceptance probability is above 0.5 for every N >= 3.
constexpr int kMaxChannelDraws = 100000;

MultipathChannel draw_user(const ChannelScenario& scenario, Rng& rng,
                           std::vector<double>& aoas) {
  aoas.resize(static_cast<std::size_t>(scenario.num_paths));
  for (auto& a : aoas) a = rng.uniform(-1.0, 1.0);
  return sample_channel(scenario, aoas, rng);
}

RateReport make_report(const RatePair& rates, double bound, double oma) {
  return {rates.r1, rates.r2, rates.sum(), bound, oma, DecodeFirst::user1};
}

}  // namespace

TrialOutcome run_trial(const RateTrialConfig& config, RngSeed seed) {
  Rng rng(seed);
  const int n = config.params.num_antennas;
  std::vector<double> aoas;
  std::optional<MultipathChannel> ch1, ch2;
  std::optional<EffectiveChannel> e1, e2;
  for (int draw = 0;; ++draw) {
    ch1.emplace(draw_user(config.user1, rng, aoas));
    ch2.emplace(draw_user(config.user2, rng, aoas));
    e1.emplace(effective_channel(*ch1));
    e2.emplace(effective_channel(*ch2));
    if (!config.separate_effective_aoas ||
        aoa_pair_separated(n, e1->cos_aoa(), e2->cos_aoa())) {
      break;
    }
    if (draw + 1 >= kMaxChannelDraws) {
      throw Error(Errc::invalid_argument, "could not draw a separated channel pair");
    }
  }

  TrialOutcome out;
  const auto ordering = order_users(e1->modulus(), e2->modulus());
  out.swapped = ordering.swapped();
  SystemParams params = config.params;
  const MultipathChannel* strong_ch = &*ch1;
  const MultipathChannel* weak_ch = &*ch2;
  const EffectiveChannel* strong = &*e1;
  const EffectiveChannel* weak = &*e2;
  if (out.swapped) {
    std::swap(strong_ch, weak_ch);
    std::swap(strong, weak);
    std::swap(params.min_rate1, params.min_rate2);
  }

  const double l1 = strong->modulus();
  const double l2 = weak->modulus();
  GainAllocation alloc;
  try {
    alloc = allocate_case1(l1, l2, params);
  } catch (const Error& e) {
    if (e.code() != Errc::infeasible_constraint) throw;
    out.status = TrialStatus::infeasible_r2;
    return out;
  }
  if (!check_r1_feasibility(alloc, l1, l2, params)) {
    out.status = TrialStatus::infeasible_r1;
    return out;
  }

  BeamformingRequest req{steering_vector(n, strong->cos_aoa()),
                         steering_vector(n, weak->cos_aoa()),
                         amplitude_for_gain(alloc.c2, l2), params.num_phases, config.tol};
  const auto sol = solve_cm_beamforming(req);

  const double bound = sum_rate_bound(alloc, params);
  const double oma = oma_sum_rate(l1, l2, n, params.max_power, params.noise_power);
  out.theoretical = make_report(rates_case1(strong->response(), weak->response(), sol.w,
                                            alloc.p1, alloc.p2, params.noise_power),
                                bound, oma);
  out.practical = make_report(rates_case1(strong_ch->response(), weak_ch->response(), sol.w,
                                          alloc.p1, alloc.p2, params.noise_power),
                              bound, oma);
  out.ideal = {alloc.c1, alloc.c2};
  out.designed = designed_gains(sol.w, req.a1, req.a2, l1, l2);
  out.errors = gain_error(out.designed, out.ideal);
  return out;
}

void GainTrialConfig::validate() const {
  if (num_antennas < 3) throw Error(Errc::invalid_argument, "gain trials need N >= 3");
  if (num_phases < 1) throw Error(Errc::invalid_argument, "M must be >= 1");
  if (lambda1 < lambda2) throw Error(Errc::invalid_ordering, "gain trials need |lambda1| >= |lambda2|");
  target_gains(num_antennas, lambda1, lambda2, target_fraction);
}

GainTrialOutcome run_gain_trial(const GainTrialConfig& config, RngSeed seed) {
  const auto [o1, o2] = sample_aoa_pair(config.num_antennas, seed);
  GeometrySpec spec{config.num_antennas, config.lambda1, config.lambda2, o1, o2,
                    config.target_fraction, config.num_phases, config.tol};
  auto design = design_for_targets(spec);
  return {o1, o2, design.ideal, design.designed, design.errors};
}

namespace {

// Neumaier-compensated running moments over an ordered sample stream.
class Accumulator {
 public:
  void add(double x) {
    add_compensated(sum_, comp_, x);
    add_compensated(sq_, sq_comp_, x * x);
    ++count_;
  }

  Statistic finish(std::string name) const {
    Statistic s;
    s.name = std::move(name);
    s.count = count_;
    if (count_ == 0) return s;
    const double n = static_cast<double>(count_);
    s.mean = (sum_ + comp_) / n;
    if (count_ > 1) {
      const double var = ((sq_ + sq_comp_) - n * s.mean * s.mean) / (n - 1.0);
      s.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return s;
  }

 private:
  static void add_compensated(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double sum_ = 0, comp_ = 0, sq_ = 0, sq_comp_ = 0;
  int count_ = 0;
};

// noma_wins is the 0/1 indicator practical NOMA sum rate > OMA sum rate.
constexpr std::array<std::string_view, 12> kRateStats = {
    "R1_theoretical", "R2_theoretical", "sum_theoretical", "R1_practical", "R2_practical",
    "sum_practical",  "bound",          "oma",             "noma_wins",    "err_user1",
    "err_user2",      "err_sum"};

constexpr std::array<std::string_view, 7> kGainStats = {
    "c1_designed", "c2_designed", "c1_ideal", "c2_ideal", "err_user1", "err_user2", "err_sum"};

MonteCarloSummary summarize(std::span<const TrialOutcome> outcomes) {
  std::array<Accumulator, kRateStats.size()> acc;
  MonteCarloSummary s;
  s.trials = static_cast<int>(outcomes.size());
  for (const auto& o : outcomes) {
    if (o.status != TrialStatus::ok) {
      ++s.infeasible;
      continue;
    }
    const std::array<double, kRateStats.size()> values = {
        o.theoretical.rate1, o.theoretical.rate2, o.theoretical.sum_rate,
        o.practical.rate1,   o.practical.rate2,   o.practical.sum_rate,
        o.theoretical.bound, o.theoretical.oma_sum_rate,
        o.practical.sum_rate > o.theoretical.oma_sum_rate ? 1.0 : 0.0, o.errors.err_user1,
        o.errors.err_user2,  o.errors.err_sum};
    for (std::size_t i = 0; i < values.size(); ++i) acc[i].add(values[i]);
  }
  for (std::size_t i = 0; i < kRateStats.size(); ++i) {
    s.stats.push_back(acc[i].finish(std::string(kRateStats[i])));
  }
  return s;
}

MonteCarloSummary summarize(std::span<const GainTrialOutcome> outcomes) {
  std::array<Accumulator, kGainStats.size()> acc;
  MonteCarloSummary s;
  s.trials = static_cast<int>(outcomes.size());
  for (const auto& o : outcomes) {
    const std::array<double, kGainStats.size()> values = {
        o.designed.c1,     o.designed.c2,     o.ideal.c1,       o.ideal.c2,
        o.errors.err_user1, o.errors.err_user2, o.errors.err_sum};
    for (std::size_t i = 0; i < values.size(); ++i) acc[i].add(values[i]);
  }
  for (std::size_t i = 0; i < kGainStats.size(); ++i) {
    s.stats.push_back(acc[i].finish(std::string(kGainStats[i])));
  }
  return s;
}

void check_trials(int trials) {
  if (trials < 1) throw Error(Errc::invalid_argument, "trials must be >= 1");
}

template <typename Outcome, typename Config, typename TrialFn>
std::vector<Outcome> run_parallel(const Config& config, int trials, std::uint64_t base_seed,
                                  TrialFn trial) {
  std::vector<std::optional<Outcome>> slots(static_cast<std::size_t>(trials));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (int t = 0; t < trials; ++t) {
    try {
      slots[static_cast<std::size_t>(t)].emplace(
          trial(config, RngSeed{base_seed + static_cast<std::uint64_t>(t)}));
    } catch (...) {
#pragma omp critical(mmnoma_mc_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Outcome> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace

const Statistic& MonteCarloSummary::at(std::string_view name) const {
  for (const auto& s : stats) {
    if (s.name == name) return s;
  }
  throw Error(Errc::invalid_argument, "no statistic named " + std::string(name));
}

MonteCarloSummary run_monte_carlo(const RateTrialConfig& config, int trials,
                                  std::uint64_t base_seed) {
  config.validate();
  check_trials(trials);
  const auto outcomes = run_parallel<TrialOutcome>(config, trials, base_seed, run_trial);
  return summarize(outcomes);
}

MonteCarloSummary run_monte_carlo(const GainTrialConfig& config, int trials,
                                  std::uint64_t base_seed) {
  config.validate();
  check_trials(trials);
  const auto outcomes =
      run_parallel<GainTrialOutcome>(config, trials, base_seed, run_gain_trial);
  return summarize(outcomes);
}

namespace reference {

MonteCarloSummary run_monte_carlo(const RateTrialConfig& config, int trials,
                                  std::uint64_t base_seed) {
  config.validate();
  check_trials(trials);
  std::vector<TrialOutcome> outcomes;
  for (int t = 0; t < trials; ++t) {
    outcomes.push_back(run_trial(config, RngSeed{base_seed + static_cast<std::uint64_t>(t)}));
  }
  return summarize(outcomes);
}

MonteCarloSummary run_monte_carlo(const GainTrialConfig& config, int trials,
                                  std::uint64_t base_seed) {
  config.validate();
  check_trials(trials);
  std::vector<GainTrialOutcome> outcomes;
  for (int t = 0; t < trials; ++t) {
    outcomes.push_back(
        run_gain_trial(config, RngSeed{base_seed + static_cast<std::uint64_t>(t)}));
  }
  return summarize(outcomes);
}

}  // namespace reference

}  // namespace mmnoma
