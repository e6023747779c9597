#include "qopt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "qopt/errors.hpp"
#include "qopt/parallel.hpp"

namespace qopt::experiments {

namespace {

constexpr std::uint64_t kSatDomain = 0x5A7;
constexpr std::uint64_t kAtspDomain = 0xA757;
constexpr std::uint64_t kGsatDomain = 0x65A7;

std::uint64_t tag(std::uint64_t domain, std::uint64_t size, std::uint64_t index) {
  return (domain << 48) ^ (size << 32) ^ index;
}

std::optional<stats::MedianCI> try_median_ci(const std::vector<double>& values, double level) {
  try {
    return stats::median_ci(values, level);
  } catch (const StatisticsError&) {
    return std::nullopt;
  }
}

double mean_of(const std::vector<double>& v) { return v.empty() ? 0.0 : stats::mean(v); }

}  // namespace

AtspScheduleParams table_parameters(int n_cities, int sigma_percent) {
  // columns: sigma = 5, 10, 15, 20, 30, 40 (% of mu)
  static const std::map<int, int> column{{5, 0}, {10, 1}, {15, 2}, {20, 3}, {30, 4}, {40, 5}};
  static constexpr double init6[] = {.32, .28, .36, .32, .32, .32};
  static constexpr double rate6[] = {.84, .44, .32, .24, .16, .12};
  static constexpr double init7[] = {.36, .32, .36, .36, .36, .32};
  static constexpr double rate7[] = {.84, .44, .36, .24, .16, .12};
  const auto it = column.find(sigma_percent);
  if (it == column.end() || (n_cities != 6 && n_cities != 7))
    throw ConfigError("no tabulated parameters for N=" + std::to_string(n_cities) +
                      ", sigma=" + std::to_string(sigma_percent) + "%");
  const int col = it->second;
  if (n_cities == 6) return {init6[col], rate6[col], 0.12, 20};
  return {init7[col], rate7[col], 0.12, 20};
}

AtspScheduleParams scaling_parameters(int n_cities, int sigma_percent) {
  if (n_cities <= 6) return table_parameters(6, sigma_percent);
  if (n_cities == 7) return table_parameters(7, sigma_percent);
  return table_parameters(7, 40);
}

SatSampleSet sample_sat_instances(int n_vars, int k, double density, int count, std::uint64_t master_seed,
                                  bool insoluble_only) {
  if (count < 1) throw ConfigError("instance count must be >= 1");
  const int m = static_cast<int>(std::lround(density * n_vars));
  SatSampleSet out;
  for (std::uint64_t attempt = 0; static_cast<int>(out.samples.size()) < count; ++attempt) {
    if (attempt > 1000u * static_cast<std::uint64_t>(count) + 10000u)
      throw ConfigError("could not find enough insoluble instances; raise the clause density");
    const std::uint64_t seed = derive_seed(master_seed, tag(kSatDomain, static_cast<std::uint64_t>(n_vars), attempt));
    Rng rng(seed);
    auto instance = sat::generate_random_ksat(n_vars, k, m, rng);
    const auto oracle = sat::exhaustive_min_conflicts(instance);
    if (insoluble_only && oracle.soluble()) {
      ++out.discarded_soluble;
      continue;
    }
    out.samples.push_back({std::move(instance), oracle, seed});
  }
  return out;
}

std::vector<AtspSample> sample_atsp_instances(int n_cities, double mu, double sigma_percent, int count,
                                              std::uint64_t master_seed) {
  if (count < 1) throw ConfigError("instance count must be >= 1");
  std::vector<AtspSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = derive_seed(
        master_seed, tag(kAtspDomain, static_cast<std::uint64_t>(n_cities), static_cast<std::uint64_t>(i)));
    Rng rng(seed);
    auto instance = atsp::generate_atsp(n_cities, mu, mu * sigma_percent / 100.0, rng);
    auto optimum = atsp::brute_force_optimum(instance);
    out.push_back({std::move(instance), std::move(optimum), seed});
  }
  return out;
}

tune::TuneInstance to_tune_instance(const SatSample& s) {
  return {s.instance.n_vars(), sat::sat_cost_vector(s.instance), static_cast<double>(s.oracle.min_conflicts)};
}

tune::TuneInstance to_tune_instance(const AtspSample& s) {
  const auto space = atsp::TourIndexSpace::for_cities(s.instance.n_cities());
  const double min_cost =
      static_cast<double>(s.optimum.min_length) / (s.instance.n_cities() * s.instance.mu());
  return {space.n_bits, atsp::atsp_cost_vector(s.instance), min_cost};
}

std::vector<SatScalingPoint> run_sat_scaling(const SatScalingSpec& spec) {
  if (spec.sizes.empty()) throw ConfigError("no problem sizes given");
  std::vector<SatScalingPoint> points;
  for (int n : spec.sizes) {
    const auto sampled = sample_sat_instances(n, spec.k, spec.density, spec.num_instances, spec.master_seed);
    SatScalingPoint point;
    point.n_vars = n;
    point.steps = spec.steps.value_or(n);
    point.discarded_soluble = sampled.discarded_soluble;
    point.instances.resize(sampled.samples.size());
    auto params = spec.params;
    params.steps = point.steps;
    const Schedule schedule = sat_schedule(params);

    parallel_for(sampled.samples.size(), spec.threads, [&](std::size_t i) {
      const auto& s = sampled.samples[i];
      const auto costs = sat::sat_cost_vector(s.instance);
      const auto state = evolve(n, costs, schedule);
      SatInstanceRecord rec;
      rec.index = static_cast<int>(i);
      rec.seed = s.seed;
      rec.clauses = s.instance.num_clauses();
      rec.min_conflicts = s.oracle.min_conflicts;
      rec.num_minima = s.oracle.num_minima;
      rec.p_min = p_min(state, costs, s.oracle.min_conflicts);
      rec.quantum_cost = expected_steps_or_inf(point.steps, rec.p_min);
      rec.gsat = sat::gsat_expected_cost(s.instance, spec.gsat_trials, spec.gsat_flip_factor * n,
                                         s.oracle.min_conflicts, derive_seed(s.seed, kGsatDomain));
      point.instances[i] = rec;
    });

    std::vector<double> quantum, gsat, pmins;
    for (const auto& r : point.instances) {
      quantum.push_back(r.quantum_cost);
      gsat.push_back(r.gsat.expected_cost);
      pmins.push_back(r.p_min);
    }
    point.mean_p_min = mean_of(pmins);
    point.quantum = try_median_ci(quantum, spec.level);
    point.gsat = try_median_ci(gsat, spec.level);
    points.push_back(std::move(point));
  }
  return points;
}

std::vector<AtspScalingPoint> run_atsp_scaling(const AtspScalingSpec& spec) {
  if (spec.cities.empty()) throw ConfigError("no city counts given");
  std::vector<AtspScalingPoint> points;
  for (int n_cities : spec.cities) {
    const auto space = atsp::TourIndexSpace::for_cities(n_cities);
    check_bits(space.n_bits);
    AtspScalingPoint point;
    point.n_cities = n_cities;
    point.n_bits = space.n_bits;
    point.params = spec.params ? *spec.params : scaling_parameters(n_cities, spec.sigma_percent);
    point.params.steps = spec.steps;
    point.random_baseline = atsp::random_selection_cost(n_cities);
    if (spec.subproblems) point.classical_estimate = atsp::classical_cost_estimate(n_cities, *spec.subproblems);
    const Schedule schedule = atsp_schedule(point.params);

    const auto samples =
        sample_atsp_instances(n_cities, spec.mu, spec.sigma_percent, spec.num_instances, spec.master_seed);
    point.instances.resize(samples.size());
    parallel_for(samples.size(), spec.threads, [&](std::size_t i) {
      const auto& s = samples[i];
      const auto inst = to_tune_instance(s);
      const auto state = evolve(inst.n_bits, inst.costs, schedule);
      AtspInstanceRecord rec;
      rec.index = static_cast<int>(i);
      rec.seed = s.seed;
      rec.min_length = s.optimum.min_length;
      rec.num_optima = s.optimum.num_optima;
      rec.p_min = p_min(state, inst.costs, inst.min_cost);
      for (std::uint64_t x = space.num_tours; x < space.num_states(); ++x) rec.padding_mass += std::norm(state[x]);
      double initial = 0.0;
      for (double c : inst.costs) initial += c;
      rec.initial_expected_cost = initial / static_cast<double>(inst.costs.size());
      rec.final_expected_cost = expected_result_cost(state, inst.costs);
      rec.quantum_cost = expected_steps_or_inf(spec.steps, rec.p_min);
      point.instances[i] = rec;
    });

    std::vector<double> costs, pmins;
    for (const auto& r : point.instances) {
      costs.push_back(r.quantum_cost);
      pmins.push_back(r.p_min);
    }
    point.mean_p_min = mean_of(pmins);
    point.quantum = try_median_ci(costs, spec.level);
    points.push_back(std::move(point));
  }
  return points;
}

HistogramResult run_histogram(const HistogramSpec& spec) {
  if (spec.instance_index < 0) throw ConfigError("instance index must be >= 0");
  HistogramResult out;
  tune::TuneInstance inst;
  Schedule schedule({{0.0, 0.0}});
  CostBinning binning;
  if (spec.problem == HistogramSpec::Problem::sat) {
    out.problem = "sat";
    auto sampled =
        sample_sat_instances(spec.n_vars, spec.k, spec.density, spec.instance_index + 1, spec.master_seed);
    const auto& s = sampled.samples.back();
    out.instance_seed = s.seed;
    inst = to_tune_instance(s);
    auto params = spec.sat_params;
    params.steps = spec.steps;
    schedule = sat_schedule(params);
  } else {
    out.problem = "atsp";
    auto samples =
        sample_atsp_instances(spec.n_cities, spec.mu, spec.sigma_percent, spec.instance_index + 1, spec.master_seed);
    const auto& s = samples.back();
    out.instance_seed = s.seed;
    inst = to_tune_instance(s);
    auto params = spec.atsp_params ? *spec.atsp_params : scaling_parameters(spec.n_cities, spec.sigma_percent);
    params.steps = spec.steps;
    schedule = atsp_schedule(params);
    binning.width = spec.bin_width;
  }
  out.min_cost = inst.min_cost;
  out.bin_width = binning.width;

  StateVector state = uniform_state(inst.n_bits);
  auto record = [&] {
    out.steps.push_back(cost_histogram(state.probabilities(), inst.costs, binning));
    out.p_min_by_step.push_back(p_min(state, inst.costs, inst.min_cost));
  };
  record();
  for (const auto& step : schedule.entries()) {
    apply_diagonal(state, DiagonalSpec::exp_linear(step.rho, DiagonalBasis::cost), inst.costs);
    apply_mixing(state, step.tau);
    record();
  }
  return out;
}

TuneSweepResult run_tune_sweep(const TuneSweepSpec& spec) {
  TuneSweepResult out;
  std::vector<tune::TuneInstance> sample;
  if (spec.family == tune::ScheduleFamily::sat) {
    const auto sampled = sample_sat_instances(spec.n_vars, spec.k, spec.density, spec.num_instances, spec.master_seed);
    out.discarded_soluble = sampled.discarded_soluble;
    for (const auto& s : sampled.samples) sample.push_back(to_tune_instance(s));
  } else {
    for (const auto& s : sample_atsp_instances(spec.n_cities, spec.mu, spec.sigma_percent, spec.num_instances,
                                               spec.master_seed))
      sample.push_back(to_tune_instance(s));
  }
  out.result = tune::tune_parameters(spec.config, sample, spec.family);
  return out;
}

}  // namespace qopt::experiments
