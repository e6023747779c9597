#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qopt/heuristic.hpp"
#include "qopt/rng.hpp"

namespace qopt::tune {

/// sat: (R0, R1, T0, T1). atsp: (rho_init, rho_rate, tau).
enum class ScheduleFamily { sat, atsp };

std::size_t parameter_count(ScheduleFamily family);
Schedule make_schedule(ScheduleFamily family, std::span<const double> params, int steps);

struct ParamRange {
  double min = 0.0;
  double max = 0.0;
  double step = 0.04;
};

/// One sample problem: its dense cost vector and verified minimum cost.
struct TuneInstance {
  int n_bits = 0;
  std::vector<double> costs;
  double min_cost = 0.0;
};

struct TuneConfig {
  std::vector<ParamRange> box;
  int steps = 20;
  int refinement_rounds = 2;
  unsigned threads = 1;
};

struct EvaluatedPoint {
  std::vector<double> params;
  double objective = 0.0;
};

struct TuneResult {
  std::vector<double> best;
  double objective = 0.0;
  /// Every distinct point evaluated, in evaluation order.
  std::vector<EvaluatedPoint> ledger;
};

/// Mean over the sample of P_min after running `schedule`.
double mean_p_min(std::span<const TuneInstance> sample, const Schedule& schedule);

/// Coarse grid over the box, then refinement_rounds passes of coordinate
/// search at halved steps (clamped to the box). Maximizes mean P_min; ties
/// go to the lexicographically smallest parameter tuple.
TuneResult tune_parameters(const TuneConfig& config, std::span<const TuneInstance> sample, ScheduleFamily family);

/// nu(c', d, c): average number of states of cost c at Hamming distance d
/// from a state of cost c'. Costs are non-negative integers; anything above
/// max_cost is lumped into the max_cost class.
class NeighborhoodTable {
 public:
  NeighborhoodTable(int n_bits, int max_cost);

  int n_bits() const { return n_bits_; }
  int max_cost() const { return max_cost_; }
  int num_costs() const { return max_cost_ + 1; }

  double& nu(int from_cost, int distance, int to_cost);
  double nu(int from_cost, int distance, int to_cost) const;
  /// Average number of states per cost class.
  double& state_count(int cost) { return state_counts_[static_cast<std::size_t>(cost)]; }
  double state_count(int cost) const { return state_counts_[static_cast<std::size_t>(cost)]; }

  double row_sum(int from_cost, int distance) const;

 private:
  std::size_t index(int from_cost, int distance, int to_cost) const;

  int n_bits_;
  int max_cost_;
  std::vector<double> nu_;
  std::vector<double> state_counts_;
};

/// Exact table pooled over the sample (Walsh-domain correlation of the
/// per-cost indicator vectors).
NeighborhoodTable exhaustive_neighborhood_table(std::span<const std::vector<double>> cost_vectors, int n_bits,
                                                int max_cost);

/// Monte-Carlo table: for each of samples_per_instance random states and each
/// distance d, one uniformly random neighbor at distance d. Rows are scaled
/// to sum to C(n, d). samples_per_instance == 0 selects the exact table.
NeighborhoodTable estimate_neighborhood_table(std::span<const std::vector<double>> cost_vectors, int n_bits,
                                              int max_cost, Rng& rng, std::uint64_t samples_per_instance);

/// Mixing-matrix element for Hamming distance d, normalized from the per-bit
/// product form so that U_rs = u_d exactly.
std::vector<std::complex<double>> mixing_elements(int n_bits, double tau);

struct AmplitudeEvolution {
  /// phi[h][c]: average amplitude of cost-c states after step h (h = 0 initial).
  std::vector<std::vector<std::complex<double>>> phi;
  /// sum_c N_c |phi_c|^2 after each step; 1 for exact evolution.
  std::vector<double> total_probability;
};

/// Iterates the cost-averaged amplitude map. With an empty `initial` the
/// start is 2^{-n/2} for every class. renormalize rescales each step so the
/// total probability is 1 instead of reporting drift.
AmplitudeEvolution mean_amplitude_evolution(const NeighborhoodTable& table, const Schedule& schedule,
                                            std::span<const std::complex<double>> initial = {},
                                            bool renormalize = false);

/// N_c |phi_c|^2 for one step of an evolution.
std::vector<double> predicted_histogram(const NeighborhoodTable& table, std::span<const std::complex<double>> phi);

}  // namespace qopt::tune
