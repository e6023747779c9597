#include "qopt/atsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qopt/errors.hpp"
#include "qopt/state_vector.hpp"

namespace qopt::atsp {

AtspInstance::AtspInstance(int n_cities, std::vector<std::int64_t> distances, double mu, double sigma)
    : n_(n_cities), distances_(std::move(distances)), mu_(mu), sigma_(sigma) {
  if (n_cities < 3) throw ParameterError("ATSP needs at least 3 cities");
  if (n_cities > 20) throw SizeError("ATSP instances limited to 20 cities");
  if (distances_.size() != static_cast<std::size_t>(n_cities) * n_cities)
    throw ArgumentError("distance matrix must be N x N");
  if (!(mu > 0.0)) throw ParameterError("mean distance must be positive");
}

AtspInstance generate_atsp(int n_cities, double mu, double sigma, Rng& rng, bool clamp_negative) {
  if (n_cities < 3) throw ParameterError("ATSP needs at least 3 cities");
  if (sigma < 0.0) throw ParameterError("sigma must be non-negative");
  std::vector<std::int64_t> d(static_cast<std::size_t>(n_cities) * n_cities, 0);
  for (int x = 0; x < n_cities; ++x) {
    for (int y = 0; y < n_cities; ++y) {
      if (x == y) continue;
      auto v = static_cast<std::int64_t>(std::round(rng.normal(mu, sigma)));
      if (clamp_negative) v = std::max<std::int64_t>(v, 0);
      d[static_cast<std::size_t>(x) * n_cities + y] = v;
    }
  }
  return AtspInstance(n_cities, std::move(d), mu, sigma);
}

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw RangeError("factorial argument out of range");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

TourIndexSpace TourIndexSpace::for_cities(int n_cities) {
  if (n_cities < 3 || n_cities > 20) throw ParameterError("city count must be in [3, 20]");
  TourIndexSpace space;
  space.n_cities = n_cities;
  space.num_tours = factorial(n_cities - 1);
  while ((std::uint64_t{1} << space.n_bits) < space.num_tours) ++space.n_bits;
  return space;
}

Tour unrank_tour(std::uint64_t index, int n_cities) {
  const auto space = TourIndexSpace::for_cities(n_cities);
  if (index >= space.num_tours)
    throw RangeError("index " + std::to_string(index) + " is a padding state with no tour");
  std::vector<int> remaining(static_cast<std::size_t>(n_cities - 1));
  std::iota(remaining.begin(), remaining.end(), 2);
  Tour tour;
  tour.reserve(remaining.size());
  for (int left = n_cities - 1; left > 0; --left) {
    const std::uint64_t block = factorial(left - 1);
    const auto pos = static_cast<std::size_t>(index / block);
    index %= block;
    tour.push_back(remaining[pos]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  return tour;
}

std::uint64_t rank_tour(std::span<const int> perm) {
  const int n_cities = static_cast<int>(perm.size()) + 1;
  if (n_cities < 3) throw ArgumentError("tour must cover at least 3 cities");
  std::vector<bool> seen(static_cast<std::size_t>(n_cities + 1), false);
  for (int c : perm) {
    if (c < 2 || c > n_cities || seen[c]) throw ArgumentError("not a permutation of cities 2..N");
    seen[c] = true;
  }
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    std::uint64_t smaller_after = 0;
    for (std::size_t k = i + 1; k < perm.size(); ++k) smaller_after += perm[k] < perm[i];
    rank += smaller_after * factorial(static_cast<int>(perm.size() - i - 1));
  }
  return rank;
}

std::int64_t tour_length(const AtspInstance& instance, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != instance.n_cities() - 1) throw ArgumentError("tour length does not match N-1");
  std::int64_t total = 0;
  int from = 1;
  for (int city : perm) {
    total += instance.distance(from, city);
    from = city;
  }
  return total + instance.distance(from, 1);
}

namespace {

// Calls fn(index, perm) for every tour in lexicographic (= rank) order.
template <typename Fn>
void for_each_tour(int n_cities, Fn&& fn) {
  Tour perm(static_cast<std::size_t>(n_cities - 1));
  std::iota(perm.begin(), perm.end(), 2);
  std::uint64_t index = 0;
  do {
    fn(index++, perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

std::vector<double> atsp_cost_vector(const AtspInstance& instance, double padding_cost) {
  const auto space = TourIndexSpace::for_cities(instance.n_cities());
  check_bits(space.n_bits);
  std::vector<double> costs(space.num_states(), padding_cost);
  const double scale = instance.n_cities() * instance.mu();
  for_each_tour(instance.n_cities(), [&](std::uint64_t index, const Tour& perm) {
    costs[index] = static_cast<double>(tour_length(instance, perm)) / scale;
  });
  return costs;
}

AtspOptimum brute_force_optimum(const AtspInstance& instance) {
  if (instance.n_cities() > kMaxBruteForceCities)
    throw SizeError("brute-force enumeration limited to " + std::to_string(kMaxBruteForceCities) + " cities");
  AtspOptimum best;
  best.min_length = std::numeric_limits<std::int64_t>::max();
  for_each_tour(instance.n_cities(), [&](std::uint64_t index, const Tour& perm) {
    const auto len = tour_length(instance, perm);
    if (len < best.min_length) {
      best.min_length = len;
      best.optimum_indices.clear();
    }
    if (len == best.min_length) best.optimum_indices.push_back(index);
  });
  best.num_optima = best.optimum_indices.size();
  return best;
}

double random_selection_cost(int n_cities) { return static_cast<double>(factorial(n_cities - 1)) / 2.0; }

double classical_cost_estimate(int n_cities, std::int64_t subproblems) {
  if (n_cities < 3) throw ParameterError("city count must be >= 3");
  if (subproblems < 0) throw ParameterError("subproblem count must be >= 0");
  const double n = n_cities;
  return (n * n * n + static_cast<double>(subproblems) * n * n) / n;
}

}  // namespace qopt::atsp
