#include "qopt/sat.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

#include "qopt/errors.hpp"
#include "qopt/state_vector.hpp"

namespace qopt::sat {

SatInstance::SatInstance(int n_vars, int k, std::vector<Clause> clauses)
    : n_vars_(n_vars), k_(k), clauses_(std::move(clauses)) {
  if (n_vars < 1 || n_vars > kMaxVars) throw ParameterError("n_vars must be in [1, 63]");
  if (k < 1 || k > n_vars) throw ParameterError("k must be in [1, n_vars]");
  var_masks_.reserve(clauses_.size());
  false_patterns_.reserve(clauses_.size());
  for (const auto& clause : clauses_) {
    if (static_cast<int>(clause.size()) != k) throw ArgumentError("clause does not have exactly k literals");
    std::uint64_t mask = 0;
    std::uint64_t pattern = 0;
    for (const auto& lit : clause) {
      if (lit.var < 1 || lit.var > n_vars) throw ArgumentError("literal variable out of range");
      const std::uint64_t bit = std::uint64_t{1} << (lit.var - 1);
      if (mask & bit) throw ArgumentError("clause repeats a variable");
      mask |= bit;
      // A negated literal is false when its variable is true.
      if (lit.negated) pattern |= bit;
    }
    var_masks_.push_back(mask);
    false_patterns_.push_back(pattern);
  }
}

SatInstance generate_random_ksat(int n_vars, int k, int m, Rng& rng) {
  if (k < 1 || k > n_vars) throw ParameterError("k must be in [1, n_vars]");
  if (m < 1) throw ParameterError("need at least one clause");
  std::vector<int> pool(static_cast<std::size_t>(n_vars));
  std::vector<Clause> clauses;
  clauses.reserve(static_cast<std::size_t>(m));
  for (int c = 0; c < m; ++c) {
    for (int v = 0; v < n_vars; ++v) pool[v] = v + 1;
    // Partial Fisher-Yates: the first k entries are a uniform k-subset.
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_vars - i)));
      std::swap(pool[i], pool[j]);
    }
    std::sort(pool.begin(), pool.begin() + k);
    Clause clause;
    clause.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) clause.push_back({pool[i], rng.coin()});
    clauses.push_back(std::move(clause));
  }
  return SatInstance(n_vars, k, std::move(clauses));
}

int conflicts(const SatInstance& instance, Assignment assignment) {
  const auto masks = instance.var_masks();
  const auto patterns = instance.false_patterns();
  int count = 0;
  for (std::size_t c = 0; c < masks.size(); ++c) count += (assignment & masks[c]) == patterns[c];
  return count;
}

int conflicts(const SatInstance& instance, const std::vector<bool>& assignment) {
  if (static_cast<int>(assignment.size()) != instance.n_vars())
    throw ArgumentError("assignment length does not equal n_vars");
  Assignment bits = 0;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i]) bits |= Assignment{1} << i;
  return conflicts(instance, bits);
}

SatOracleResult exhaustive_min_conflicts(const SatInstance& instance) {
  const int n = instance.n_vars();
  if (n > kExhaustiveCap)
    throw SizeError("exhaustive search limited to " + std::to_string(kExhaustiveCap) + " variables");

  std::vector<std::vector<int>> occurrences(static_cast<std::size_t>(n));
  const auto masks = instance.var_masks();
  const auto patterns = instance.false_patterns();
  for (std::size_t c = 0; c < masks.size(); ++c)
    for (int v = 0; v < n; ++v)
      if (masks[c] >> v & 1) occurrences[v].push_back(static_cast<int>(c));

  // Start from the all-false assignment.
  std::vector<int> true_literals(masks.size());
  int cost = 0;
  for (std::size_t c = 0; c < masks.size(); ++c) {
    true_literals[c] = std::popcount(patterns[c]);
    cost += true_literals[c] == 0;
  }

  SatOracleResult best{cost, 1};
  Assignment current = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int v = std::countr_zero(i);
    const Assignment bit = Assignment{1} << v;
    current ^= bit;
    for (int c : occurrences[v]) {
      // The literal on v is true iff the new value differs from its false pattern.
      const bool now_true = (current & bit) != (patterns[c] & bit);
      if (now_true) {
        if (true_literals[c]++ == 0) --cost;
      } else {
        if (--true_literals[c] == 0) ++cost;
      }
    }
    if (cost < best.min_conflicts) {
      best = {cost, 1};
    } else if (cost == best.min_conflicts) {
      ++best.num_minima;
    }
  }
  return best;
}

std::vector<double> sat_cost_vector(const SatInstance& instance) {
  check_bits(instance.n_vars());
  const std::size_t size = std::size_t{1} << instance.n_vars();
  std::vector<double> costs(size);
  for (std::size_t s = 0; s < size; ++s) costs[s] = conflicts(instance, static_cast<Assignment>(s));
  return costs;
}

GsatWalker::GsatWalker(const SatInstance& instance)
    : instance_(instance),
      occurrences_(static_cast<std::size_t>(instance.n_vars())),
      true_count_(static_cast<std::size_t>(instance.num_clauses())) {
  const auto masks = instance.var_masks();
  for (std::size_t c = 0; c < masks.size(); ++c)
    for (int v = 0; v < instance.n_vars(); ++v)
      if (masks[c] >> v & 1) occurrences_[v].push_back(static_cast<int>(c));
  candidates_.reserve(static_cast<std::size_t>(instance.n_vars()));
  reset(0);
}

void GsatWalker::reset(Assignment start) {
  assignment_ = start;
  cost_ = 0;
  const auto masks = instance_.var_masks();
  const auto patterns = instance_.false_patterns();
  for (std::size_t c = 0; c < masks.size(); ++c) {
    true_count_[c] = std::popcount((assignment_ & masks[c]) ^ patterns[c]);
    cost_ += true_count_[c] == 0;
  }
}

void GsatWalker::randomize(Rng& rng) {
  const int n = instance_.n_vars();
  const Assignment mask = (n == 64) ? ~Assignment{0} : (Assignment{1} << n) - 1;
  reset(rng() & mask);
}

int GsatWalker::neighbor_cost(int v) const {
  const auto patterns = instance_.false_patterns();
  const Assignment bit = Assignment{1} << v;
  int delta = 0;
  for (int c : occurrences_[v]) {
    const bool literal_true = (assignment_ & bit) != (patterns[c] & bit);
    if (literal_true) {
      delta += true_count_[c] == 1;  // breaks
    } else {
      delta -= true_count_[c] == 0;  // makes
    }
  }
  return cost_ + delta;
}

void GsatWalker::flip(int v) {
  const auto patterns = instance_.false_patterns();
  const Assignment bit = Assignment{1} << v;
  assignment_ ^= bit;
  for (int c : occurrences_[v]) {
    const bool now_true = (assignment_ & bit) != (patterns[c] & bit);
    if (now_true) {
      if (true_count_[c]++ == 0) --cost_;
    } else {
      if (--true_count_[c] == 0) ++cost_;
    }
  }
}

int GsatWalker::step(Rng& rng) {
  int best = std::numeric_limits<int>::max();
  candidates_.clear();
  for (int v = 0; v < instance_.n_vars(); ++v) {
    const int c = neighbor_cost(v);
    if (c < best) {
      best = c;
      candidates_.clear();
    }
    if (c == best) candidates_.push_back(v);
  }
  const int chosen = candidates_[rng.below(candidates_.size())];
  flip(chosen);
  return chosen;
}

GsatOutcome gsat_trial(const SatInstance& instance, int max_flips, int target_cost, Rng& rng) {
  if (max_flips < 1) throw ParameterError("max_flips must be >= 1");
  GsatWalker walker(instance);
  walker.randomize(rng);
  GsatOutcome out;
  if (walker.cost() <= target_cost) {
    out.found = true;
    return out;
  }
  for (int flip = 0; flip < max_flips; ++flip) {
    walker.step(rng);
    ++out.steps;
    if (walker.cost() <= target_cost) {
      out.found = true;
      break;
    }
  }
  return out;
}

GsatEstimate summarize_gsat(std::span<const GsatOutcome> outcomes) {
  GsatEstimate est;
  est.trials = outcomes.size();
  for (const auto& o : outcomes) {
    est.total_steps += o.steps;
    est.successes += o.found;
  }
  est.expected_cost = est.successes == 0 ? std::numeric_limits<double>::infinity()
                                         : static_cast<double>(est.total_steps) / static_cast<double>(est.successes);
  return est;
}

GsatEstimate gsat_expected_cost(const SatInstance& instance, int trials, int max_flips, int target_cost,
                                std::uint64_t seed) {
  if (trials < 1) throw ParameterError("need at least one GSAT trial");
  std::vector<GsatOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    outcomes.push_back(gsat_trial(instance, max_flips, target_cost, rng));
  }
  return summarize_gsat(outcomes);
}

}  // namespace qopt::sat
