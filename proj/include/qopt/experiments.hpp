#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qopt/atsp.hpp"
#include "qopt/heuristic.hpp"
#include "qopt/sat.hpp"
#include "qopt/stats.hpp"
#include "qopt/tune.hpp"

namespace qopt::experiments {

// Default SAT schedule parameters for clause densities 4 and 6.
inline constexpr SatScheduleParams kSatParamsDensity4{4.0, -3.4, 0.539298, 3.5105, 20};
inline constexpr SatScheduleParams kSatParamsDensity6{2.57, -1.73, 0.87, 2.7, 20};

/// Best 20-step ATSP parameters for N in {6, 7} and sigma in
/// {5, 10, 15, 20, 30, 40} percent of mu. Throws ConfigError otherwise.
AtspScheduleParams table_parameters(int n_cities, int sigma_percent);

/// Parameters used for an N-city scaling point: the table entry for N <= 7
/// (N < 6 borrows the 6-city column), the 7-city sigma=40% entry beyond.
AtspScheduleParams scaling_parameters(int n_cities, int sigma_percent);

// ---------------------------------------------------------------- sampling

struct SatSample {
  sat::SatInstance instance;
  sat::SatOracleResult oracle;
  std::uint64_t seed = 0;
};

struct SatSampleSet {
  std::vector<SatSample> samples;
  std::uint64_t discarded_soluble = 0;
};

/// m = round(density * n). Attempts are drawn from Rng(derive_seed(master,
/// (n, attempt))) in order; soluble draws are discarded when insoluble_only.
SatSampleSet sample_sat_instances(int n_vars, int k, double density, int count, std::uint64_t master_seed,
                                  bool insoluble_only = true);

struct AtspSample {
  atsp::AtspInstance instance;
  atsp::AtspOptimum optimum;
  std::uint64_t seed = 0;
};

/// sigma is given as a percentage of mu.
std::vector<AtspSample> sample_atsp_instances(int n_cities, double mu, double sigma_percent, int count,
                                              std::uint64_t master_seed);

tune::TuneInstance to_tune_instance(const SatSample& s);
tune::TuneInstance to_tune_instance(const AtspSample& s);

// ---------------------------------------------------------------- SAT scaling

struct SatScalingSpec {
  std::vector<int> sizes;
  int k = 3;
  double density = 4.0;
  SatScheduleParams params = kSatParamsDensity4;
  std::optional<int> steps;  // default j = n
  int num_instances = 100;
  int gsat_trials = 1000;
  int gsat_flip_factor = 2;  // max flips per try = factor * n
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
  double level = 0.95;
};

struct SatInstanceRecord {
  int index = 0;
  std::uint64_t seed = 0;
  int clauses = 0;
  int min_conflicts = 0;
  std::uint64_t num_minima = 0;
  double p_min = 0.0;
  double quantum_cost = 0.0;  // j / P_min, +inf if P_min = 0
  sat::GsatEstimate gsat;
};

struct SatScalingPoint {
  int n_vars = 0;
  int steps = 0;
  std::uint64_t discarded_soluble = 0;
  double mean_p_min = 0.0;
  std::optional<stats::MedianCI> quantum;  // empty when too few instances for a CI
  std::optional<stats::MedianCI> gsat;
  std::vector<SatInstanceRecord> instances;
};

std::vector<SatScalingPoint> run_sat_scaling(const SatScalingSpec& spec);

// ---------------------------------------------------------------- ATSP scaling

struct AtspScalingSpec {
  std::vector<int> cities;
  double mu = 100.0;
  int sigma_percent = 40;
  std::optional<AtspScheduleParams> params;  // default: scaling_parameters(N, sigma)
  int steps = 20;
  int num_instances = 100;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
  double level = 0.95;
  std::optional<std::int64_t> subproblems;  // b for the classical estimate
};

struct AtspInstanceRecord {
  int index = 0;
  std::uint64_t seed = 0;
  std::int64_t min_length = 0;
  std::uint64_t num_optima = 0;
  double p_min = 0.0;
  double padding_mass = 0.0;
  double initial_expected_cost = 0.0;
  double final_expected_cost = 0.0;
  double quantum_cost = 0.0;  // steps / P_min
};

struct AtspScalingPoint {
  int n_cities = 0;
  int n_bits = 0;
  AtspScheduleParams params;
  double mean_p_min = 0.0;
  std::optional<stats::MedianCI> quantum;
  double random_baseline = 0.0;
  std::optional<double> classical_estimate;
  std::vector<AtspInstanceRecord> instances;
};

std::vector<AtspScalingPoint> run_atsp_scaling(const AtspScalingSpec& spec);

// ---------------------------------------------------------------- histograms

struct HistogramSpec {
  enum class Problem { sat, atsp };
  Problem problem = Problem::sat;
  // SAT
  int n_vars = 20;
  int k = 3;
  double density = 4.0;
  SatScheduleParams sat_params = kSatParamsDensity4;
  // ATSP
  int n_cities = 6;
  double mu = 100.0;
  int sigma_percent = 40;
  std::optional<AtspScheduleParams> atsp_params;
  double bin_width = 0.05;

  int steps = 20;
  int instance_index = 0;
  std::uint64_t master_seed = 1;
};

struct HistogramResult {
  std::string problem;
  std::uint64_t instance_seed = 0;
  double min_cost = 0.0;
  double bin_width = 0.0;
  std::vector<CostHistogram> steps;  // steps[0] is the initial distribution
  std::vector<double> p_min_by_step;
};

HistogramResult run_histogram(const HistogramSpec& spec);

// ---------------------------------------------------------------- tuning

struct TuneSweepSpec {
  tune::ScheduleFamily family = tune::ScheduleFamily::atsp;
  // SAT sample
  int n_vars = 10;
  int k = 3;
  double density = 4.0;
  // ATSP sample
  int n_cities = 6;
  double mu = 100.0;
  int sigma_percent = 40;

  int num_instances = 100;
  std::uint64_t master_seed = 1;
  tune::TuneConfig config;
};

struct TuneSweepResult {
  tune::TuneResult result;
  std::uint64_t discarded_soluble = 0;
};

TuneSweepResult run_tune_sweep(const TuneSweepSpec& spec);

}  // namespace qopt::experiments
