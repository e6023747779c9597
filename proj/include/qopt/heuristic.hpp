#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qopt/rng.hpp"
#include "qopt/state_vector.hpp"

namespace qopt {

struct ScheduleStep {
  double rho = 0.0;  // phase coefficient
  double tau = 0.0;  // mixing coefficient
};

/// Per-step phase parameters for steps h = 1..j. Never empty.
class Schedule {
 public:
  explicit Schedule(std::vector<ScheduleStep> steps);

  int steps() const { return static_cast<int>(steps_.size()); }
  const ScheduleStep& at(int h) const;  // 1-based
  std::span<const ScheduleStep> entries() const { return steps_; }

 private:
  std::vector<ScheduleStep> steps_;
};

/// rho_h = (R0 + R1 (1 - (h-1)/j)) / j, tau_h likewise from T0, T1.
struct SatScheduleParams {
  double r0 = 0.0;
  double r1 = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  int steps = 1;
};

/// rho_h = rho_init + rho_rate * h, tau fixed.
struct AtspScheduleParams {
  double rho_init = 0.0;
  double rho_rate = 0.0;
  double tau = 0.0;
  int steps = 1;
};

Schedule sat_schedule(const SatScheduleParams& params);
Schedule atsp_schedule(const AtspScheduleParams& params);

using CostHistogram = std::map<double, double>;

/// width == 0 keeps one bin per distinct cost (integer SAT costs); otherwise
/// costs fall into [k*width, (k+1)*width) keyed by the lower edge.
struct CostBinning {
  double width = 0.0;
  double bin_of(double cost) const;
};

CostHistogram cost_histogram(std::span<const double> probabilities, std::span<const double> costs,
                             const CostBinning& binning = {});

struct TrialReport {
  CostHistogram final_probabilities;
  double min_cost = 0.0;
  double p_min = 0.0;
  double expected_result_cost = 0.0;
  /// Index 0 is the initial distribution, index h the distribution after step h.
  std::vector<CostHistogram> per_step_histograms;
};

struct TrialOptions {
  bool record_steps = false;
  CostBinning binning{};
};

struct TrialResult {
  StateVector state;
  TrialReport report;
};

/// One trial: uniform start, then phase(rho_h) and mixing(tau_h) for each
/// step. costs holds c(s) for all 2^n_bits states; the report's p_min is the
/// mass on states attaining min(costs).
TrialResult run_trial(int n_bits, std::span<const double> costs, const Schedule& schedule,
                      const TrialOptions& options = {});

/// Final state only; skips report construction. Used by tuning loops.
StateVector evolve(int n_bits, std::span<const double> costs, const Schedule& schedule);

struct StepOperators {
  DiagonalSpec phase;   // basis = cost
  DiagonalSpec mixing;  // basis = bit_count
};

/// Same trial structure with arbitrary diagonals per step.
StateVector run_generalized_trial(int n_bits, std::span<const double> costs, std::span<const StepOperators> steps);

/// Step operators that turn a trial into Grover amplitude amplification for
/// a 0/1 cost (0 = marked): t_0 = -1, t_b = 1 for b > 0, p_0 = -1, p_1 = 1.
StepOperators amplitude_amplification_step(int n_bits);

double p_min(const StateVector& state, std::span<const double> costs, double min_cost);
double expected_result_cost(const StateVector& state, std::span<const double> costs);

/// j / P_min. Throws UndefinedCostError when p_min == 0.
double expected_steps(double steps, double p_min);
/// As above but returns +infinity for p_min == 0.
double expected_steps_or_inf(double steps, double p_min);

std::uint64_t sample_measurement(const StateVector& state, Rng& rng);

}  // namespace qopt
