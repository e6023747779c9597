#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qopt/rng.hpp"

namespace qopt::atsp {

inline constexpr int kMaxBruteForceCities = 11;
inline constexpr double kPaddingCost = 2.0;

/// Asymmetric distance matrix over cities 1..N. No symmetry is enforced and
/// the diagonal is never read.
class AtspInstance {
 public:
  AtspInstance(int n_cities, std::vector<std::int64_t> distances, double mu, double sigma);

  int n_cities() const { return n_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  /// Distance from city `from` to city `to` (1-based).
  std::int64_t distance(int from, int to) const {
    return distances_[static_cast<std::size_t>(from - 1) * n_ + static_cast<std::size_t>(to - 1)];
  }
  std::span<const std::int64_t> matrix() const { return distances_; }

 private:
  int n_;
  std::vector<std::int64_t> distances_;
  double mu_;
  double sigma_;
};

/// Off-diagonal entries are independent Normal(mu, sigma) draws rounded
/// half away from zero. Negative values are kept unless clamp_negative.
AtspInstance generate_atsp(int n_cities, double mu, double sigma, Rng& rng, bool clamp_negative = false);

/// Cities 2..N in visiting order; the tour is 1 -> perm -> 1.
using Tour = std::vector<int>;

std::uint64_t factorial(int n);

struct TourIndexSpace {
  int n_cities = 0;
  std::uint64_t num_tours = 0;  // (N-1)!
  int n_bits = 0;               // ceil(log2((N-1)!))

  static TourIndexSpace for_cities(int n_cities);
  std::uint64_t num_states() const { return std::uint64_t{1} << n_bits; }
  bool is_padding(std::uint64_t index) const { return index >= num_tours; }
};

/// The index-th arrangement of {2..N} in lexicographic order, built digit by
/// digit from the factorial number system.
Tour unrank_tour(std::uint64_t index, int n_cities);
std::uint64_t rank_tour(std::span<const int> perm);

std::int64_t tour_length(const AtspInstance& instance, std::span<const int> perm);

/// Scaled length L/(N*mu) for tour indices, padding_cost for the rest.
std::vector<double> atsp_cost_vector(const AtspInstance& instance, double padding_cost = kPaddingCost);

struct AtspOptimum {
  std::int64_t min_length = 0;
  std::uint64_t num_optima = 0;
  std::vector<std::uint64_t> optimum_indices;
};

AtspOptimum brute_force_optimum(const AtspInstance& instance);

/// Expected number of uniformly random tours drawn before hitting the optimum.
double random_selection_cost(int n_cities);

/// (N^3 + b N^2) / N for a branch-and-bound run that expanded b subproblems.
double classical_cost_estimate(int n_cities, std::int64_t subproblems);

}  // namespace qopt::atsp
