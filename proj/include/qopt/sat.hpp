#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qopt/rng.hpp"

namespace qopt::sat {

struct Literal {
  int var = 1;  // 1-based
  bool negated = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// Bit i of an assignment is the value of variable i+1.
using Assignment = std::uint64_t;

inline constexpr int kMaxVars = 63;
inline constexpr int kExhaustiveCap = 30;

/// k-SAT formula. Every clause has exactly k literals over distinct variables.
/// Duplicate clauses are allowed and each copy counts as its own conflict.
class SatInstance {
 public:
  SatInstance(int n_vars, int k, std::vector<Clause> clauses);

  int n_vars() const { return n_vars_; }
  int k() const { return k_; }
  int num_clauses() const { return static_cast<int>(clauses_.size()); }
  double clause_density() const { return static_cast<double>(clauses_.size()) / n_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }

  /// A clause is violated iff (a & var_mask) == false_pattern.
  std::span<const std::uint64_t> var_masks() const { return var_masks_; }
  std::span<const std::uint64_t> false_patterns() const { return false_patterns_; }

 private:
  int n_vars_;
  int k_;
  std::vector<Clause> clauses_;
  std::vector<std::uint64_t> var_masks_;
  std::vector<std::uint64_t> false_patterns_;
};

/// m clauses drawn with replacement, uniformly from the C(n,k) 2^k possible.
SatInstance generate_random_ksat(int n_vars, int k, int m, Rng& rng);

int conflicts(const SatInstance& instance, Assignment assignment);
int conflicts(const SatInstance& instance, const std::vector<bool>& assignment);

struct SatOracleResult {
  int min_conflicts = 0;
  std::uint64_t num_minima = 0;
  bool soluble() const { return min_conflicts == 0; }
};

/// Exact minimum over all 2^n assignments (Gray-code walk with incremental
/// clause bookkeeping).
SatOracleResult exhaustive_min_conflicts(const SatInstance& instance);

/// Conflict count for every basis index; entry s = conflicts(instance, s).
std::vector<double> sat_cost_vector(const SatInstance& instance);

/// Greedy walker for GSAT. Tracks satisfied-literal counts per clause so each
/// neighbor's conflict count is available in O(occurrences).
class GsatWalker {
 public:
  explicit GsatWalker(const SatInstance& instance);

  void reset(Assignment start);
  void randomize(Rng& rng);

  int cost() const { return cost_; }
  Assignment assignment() const { return assignment_; }
  /// Conflicts after flipping variable index v (0-based).
  int neighbor_cost(int v) const;
  /// Flips a uniformly chosen minimum-conflict neighbor; returns its index.
  int step(Rng& rng);

 private:
  void flip(int v);

  const SatInstance& instance_;
  std::vector<std::vector<int>> occurrences_;
  std::vector<int> true_count_;
  Assignment assignment_ = 0;
  int cost_ = 0;
  std::vector<int> candidates_;
};

struct GsatOutcome {
  bool found = false;
  std::uint64_t steps = 0;  // flips performed
};

/// One GSAT try from a uniform random assignment, up to max_flips flips
/// (the scaling runs use 2n). Stops once cost <= target_cost. The
/// initial evaluation is not counted as a step.
GsatOutcome gsat_trial(const SatInstance& instance, int max_flips, int target_cost, Rng& rng);

struct GsatEstimate {
  std::uint64_t total_steps = 0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  /// S_total / T_min, or +infinity when no trial succeeded.
  double expected_cost = 0.0;
};

GsatEstimate summarize_gsat(std::span<const GsatOutcome> outcomes);

/// Runs `trials` independent tries; trial t draws from Rng(seed, t).
GsatEstimate gsat_expected_cost(const SatInstance& instance, int trials, int max_flips, int target_cost,
                                std::uint64_t seed);

}  // namespace qopt::sat
