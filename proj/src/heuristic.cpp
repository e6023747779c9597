#include "qopt/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qopt/errors.hpp"

namespace qopt {

Schedule::Schedule(std::vector<ScheduleStep> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw ParameterError("schedule needs at least one step");
}

const ScheduleStep& Schedule::at(int h) const {
  if (h < 1 || h > steps()) throw RangeError("schedule step " + std::to_string(h) + " out of range");
  return steps_[static_cast<std::size_t>(h - 1)];
}

Schedule sat_schedule(const SatScheduleParams& params) {
  if (params.steps < 1) throw ParameterError("schedule step count must be >= 1");
  const double j = params.steps;
  std::vector<ScheduleStep> out;
  out.reserve(static_cast<std::size_t>(params.steps));
  for (int h = 1; h <= params.steps; ++h) {
    const double frac = 1.0 - (h - 1) / j;
    out.push_back({(params.r0 + params.r1 * frac) / j, (params.t0 + params.t1 * frac) / j});
  }
  return Schedule(std::move(out));
}

Schedule atsp_schedule(const AtspScheduleParams& params) {
  if (params.steps < 1) throw ParameterError("schedule step count must be >= 1");
  std::vector<ScheduleStep> out;
  out.reserve(static_cast<std::size_t>(params.steps));
  for (int h = 1; h <= params.steps; ++h) out.push_back({params.rho_init + params.rho_rate * h, params.tau});
  return Schedule(std::move(out));
}

double CostBinning::bin_of(double cost) const {
  if (width <= 0.0) return cost;
  return std::floor(cost / width + 1e-9) * width;
}

CostHistogram cost_histogram(std::span<const double> probabilities, std::span<const double> costs,
                             const CostBinning& binning) {
  if (probabilities.size() != costs.size()) throw ArgumentError("probability and cost lengths differ");
  CostHistogram hist;
  for (std::size_t s = 0; s < costs.size(); ++s) hist[binning.bin_of(costs[s])] += probabilities[s];
  return hist;
}

namespace {

void check_costs(int n_bits, std::span<const double> costs) {
  check_bits(n_bits);
  if (costs.size() != (std::size_t{1} << n_bits)) throw ArgumentError("cost vector length does not equal 2^n_bits");
}

void step(StateVector& state, std::span<const double> costs, const ScheduleStep& s) {
  apply_diagonal(state, DiagonalSpec::exp_linear(s.rho, DiagonalBasis::cost), costs);
  apply_mixing(state, s.tau);
}

}  // namespace

StateVector evolve(int n_bits, std::span<const double> costs, const Schedule& schedule) {
  check_costs(n_bits, costs);
  StateVector state = uniform_state(n_bits);
  for (const auto& s : schedule.entries()) step(state, costs, s);
  return state;
}

TrialResult run_trial(int n_bits, std::span<const double> costs, const Schedule& schedule,
                      const TrialOptions& options) {
  check_costs(n_bits, costs);
  StateVector state = uniform_state(n_bits);
  TrialReport report;
  if (options.record_steps) report.per_step_histograms.push_back(cost_histogram(state.probabilities(), costs, options.binning));
  for (const auto& s : schedule.entries()) {
    step(state, costs, s);
    if (options.record_steps)
      report.per_step_histograms.push_back(cost_histogram(state.probabilities(), costs, options.binning));
  }
  const auto probs = state.probabilities();
  report.final_probabilities = cost_histogram(probs, costs, options.binning);
  report.min_cost = *std::min_element(costs.begin(), costs.end());
  report.p_min = p_min(state, costs, report.min_cost);
  report.expected_result_cost = expected_result_cost(state, costs);
  return {std::move(state), std::move(report)};
}

StateVector run_generalized_trial(int n_bits, std::span<const double> costs, std::span<const StepOperators> steps) {
  check_costs(n_bits, costs);
  StateVector state = uniform_state(n_bits);
  for (const auto& op : steps) {
    apply_diagonal(state, op.phase, costs);
    apply_mixing(state, op.mixing);
  }
  return state;
}

StepOperators amplitude_amplification_step(int n_bits) {
  std::map<std::int64_t, Amplitude> mixing{{0, -1.0}};
  for (int b = 1; b <= n_bits; ++b) mixing[b] = 1.0;
  return {DiagonalSpec::explicit_values({{0, -1.0}, {1, 1.0}}, DiagonalBasis::cost),
          DiagonalSpec::explicit_values(std::move(mixing), DiagonalBasis::bit_count)};
}

double p_min(const StateVector& state, std::span<const double> costs, double min_cost) {
  if (costs.size() != state.size()) throw ArgumentError("cost vector length does not match state");
  double mass = 0.0;
  bool attained = false;
  for (std::size_t s = 0; s < costs.size(); ++s) {
    if (costs[s] == min_cost) {
      attained = true;
      mass += std::norm(state[s]);
    }
  }
  if (!attained) throw ArgumentError("no state attains the given minimum cost");
  return std::min(mass, 1.0);
}

double expected_result_cost(const StateVector& state, std::span<const double> costs) {
  if (costs.size() != state.size()) throw ArgumentError("cost vector length does not match state");
  double total = 0.0;
  for (std::size_t s = 0; s < costs.size(); ++s) total += costs[s] * std::norm(state[s]);
  return total;
}

double expected_steps(double steps, double p_min) {
  if (!(p_min > 0.0)) throw UndefinedCostError("expected cost undefined for P_min = 0");
  return steps / p_min;
}

double expected_steps_or_inf(double steps, double p_min) {
  return p_min > 0.0 ? steps / p_min : std::numeric_limits<double>::infinity();
}

std::uint64_t sample_measurement(const StateVector& state, Rng& rng) {
  const double target = rng.uniform() * state.norm_squared();
  double acc = 0.0;
  std::uint64_t last_nonzero = 0;
  for (std::size_t s = 0; s < state.size(); ++s) {
    const double p = std::norm(state[s]);
    if (p == 0.0) continue;
    acc += p;
    last_nonzero = s;
    if (target < acc) return s;
  }
  return last_nonzero;
}

}  // namespace qopt
