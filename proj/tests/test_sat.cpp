#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "oracles.hpp"
#include "qopt/errors.hpp"
#include "qopt/sat.hpp"

using namespace qopt;
using namespace qopt::sat;

namespace {

// (v1 OR NOT v2) AND (v2 OR v3)
SatInstance small_example() { return SatInstance(3, 2, {{{1, false}, {2, true}}, {{2, false}, {3, false}}}); }

Assignment bits(bool v1, bool v2, bool v3) { return Assignment(v1) | Assignment(v2) << 1 | Assignment(v3) << 2; }

std::vector<int> clause_key(const Clause& c) {
  std::vector<int> key;
  for (const auto& lit : c) key.push_back(lit.negated ? -lit.var : lit.var);
  return key;
}

}  // namespace

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(SatInstance(3, 2, {{{1, false}, {1, true}}}), ArgumentError);
  CHECK_THROWS_AS(SatInstance(3, 2, {{{1, false}}}), ArgumentError);
  CHECK_THROWS_AS(SatInstance(3, 2, {{{1, false}, {4, true}}}), ArgumentError);
  Rng rng(1);
  CHECK_THROWS_AS(generate_random_ksat(2, 3, 5, rng), ParameterError);
  CHECK_THROWS_AS(generate_random_ksat(5, 3, 0, rng), ParameterError);
}

TEST_CASE("random k-SAT sample space and uniformity") {
  Rng rng(31);
  std::set<std::vector<int>> seen;
  const auto small = generate_random_ksat(3, 2, 5000, rng);
  for (const auto& c : small.clauses()) seen.insert(clause_key(c));
  CHECK(seen.size() == 12);  // C(3,2) * 2^2

  const int draws = 100000;
  const auto big = generate_random_ksat(4, 3, draws, rng);
  std::map<std::vector<int>, int> counts;
  for (const auto& c : big.clauses()) ++counts[clause_key(c)];
  CHECK(counts.size() == 32);  // C(4,3) * 2^3
  const double p = 1.0 / 32;
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (const auto& [key, count] : counts) CHECK(std::abs(count - draws * p) < 3 * sigma);

  const auto dense = generate_random_ksat(20, 3, 80, rng);
  CHECK(dense.num_clauses() == 80);
  CHECK(dense.clause_density() == 4.0);
}

TEST_CASE("conflicts on the 2-SAT example") {
  const auto inst = small_example();
  CHECK(conflicts(inst, bits(false, false, true)) == 0);
  CHECK(conflicts(inst, bits(false, true, false)) == 1);
  CHECK(conflicts(inst, std::vector<bool>{false, true, false}) == 1);
  CHECK_THROWS_AS(conflicts(inst, std::vector<bool>{false, true}), ArgumentError);
  for (Assignment a = 0; a < 8; ++a) {
    CHECK(conflicts(inst, a) <= inst.num_clauses());
    CHECK(conflicts(inst, a) == oracle::naive_conflicts(inst, a));
  }
}

TEST_CASE("exhaustive minimum") {
  const auto ex = exhaustive_min_conflicts(small_example());
  CHECK(ex.min_conflicts == 0);
  CHECK(ex.num_minima == 4);
  CHECK(ex.soluble());

  const SatInstance units(2, 1, {{{1, false}}, {{1, true}}, {{2, false}}});
  const auto u = exhaustive_min_conflicts(units);
  CHECK(u.min_conflicts == 1);
  CHECK(u.num_minima == 2);

  Rng rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = generate_random_ksat(10, 3, 60, rng);
    int best = 1 << 30;
    std::uint64_t count = 0;
    for (Assignment a = 0; a < 1024; ++a) {
      const int c = oracle::naive_conflicts(inst, a);
      if (c < best) {
        best = c;
        count = 0;
      }
      count += c == best;
    }
    const auto r = exhaustive_min_conflicts(inst);
    CHECK(r.min_conflicts == best);
    CHECK(r.num_minima == count);
  }

  const auto too_big = generate_random_ksat(kExhaustiveCap + 1, 3, 10, rng);
  CHECK_THROWS_AS(exhaustive_min_conflicts(too_big), SizeError);
}

TEST_CASE("duplicate clauses count separately") {
  const SatInstance dup(2, 2, {{{1, false}, {2, false}}, {{1, false}, {2, false}}});
  CHECK(conflicts(dup, 0) == 2);
}

TEST_CASE("sat_cost_vector") {
  const auto costs = sat_cost_vector(small_example());
  CHECK(std::count(costs.begin(), costs.end(), 0.0) == 4);
  Rng rng(33);
  for (int n : {4, 8, 12}) {
    const auto inst = generate_random_ksat(n, 3, 5 * n, rng);
    const auto cv = sat_cost_vector(inst);
    REQUIRE(cv.size() == (std::size_t{1} << n));
    for (std::size_t s = 0; s < cv.size(); ++s) {
      CHECK(cv[s] >= 0);
      CHECK(cv[s] <= inst.num_clauses());
      CHECK(cv[s] == oracle::naive_conflicts(inst, s));
    }
  }
}

TEST_CASE("GSAT walker moves to a minimum-conflict neighbor") {
  Rng rng(34);
  const auto inst = generate_random_ksat(12, 3, 72, rng);
  GsatWalker walker(inst);
  walker.randomize(rng);
  for (int step = 0; step < 200; ++step) {
    CHECK(walker.cost() == oracle::naive_conflicts(inst, walker.assignment()));
    std::vector<int> neighbor(12);
    for (int v = 0; v < 12; ++v) {
      neighbor[v] = oracle::naive_conflicts(inst, walker.assignment() ^ (Assignment{1} << v));
      CHECK(walker.neighbor_cost(v) == neighbor[v]);
    }
    const int chosen = walker.step(rng);
    CHECK(neighbor[chosen] == *std::min_element(neighbor.begin(), neighbor.end()));
  }
}

TEST_CASE("GSAT trials") {
  Rng rng(35);
  const SatInstance single(6, 3, {{{1, false}, {3, true}, {5, false}}});
  for (int i = 0; i < 50; ++i) {
    const auto out = gsat_trial(single, 12, 0, rng);
    CHECK(out.found);
    CHECK(out.steps <= 6);
  }

  const auto hard = generate_random_ksat(10, 3, 80, rng);
  const auto oracle_min = exhaustive_min_conflicts(hard).min_conflicts;
  for (int i = 0; i < 20; ++i) CHECK_FALSE(gsat_trial(hard, 20, oracle_min - 1, rng).found);
  CHECK_THROWS_AS(gsat_trial(hard, 0, 0, rng), ParameterError);

  const auto a = gsat_expected_cost(hard, 200, 20, oracle_min, 777);
  const auto b = gsat_expected_cost(hard, 200, 20, oracle_min, 777);
  CHECK(a.total_steps == b.total_steps);
  CHECK(a.successes == b.successes);
  CHECK(a.expected_cost == b.expected_cost);
  CHECK(a.trials == 200);
}

TEST_CASE("GSAT estimator identities") {
  std::vector<GsatOutcome> all(40, GsatOutcome{true, 7});
  CHECK(summarize_gsat(all).expected_cost == 7.0);

  std::vector<GsatOutcome> half;
  for (int i = 0; i < 50; ++i) half.push_back({i % 2 == 0, static_cast<std::uint64_t>(3 + i % 5)});
  const auto est = summarize_gsat(half);
  CHECK(est.successes == 25);
  CHECK(est.expected_cost == static_cast<double>(est.total_steps) / 25.0);

  std::vector<GsatOutcome> none(10, GsatOutcome{false, 20});
  CHECK(std::isinf(summarize_gsat(none).expected_cost));

  // A target every assignment meets: each try succeeds at its start with 0 flips.
  Rng rng(36);
  const auto inst = generate_random_ksat(8, 3, 30, rng);
  CHECK(gsat_expected_cost(inst, 100, 16, inst.num_clauses(), 3).expected_cost == 0.0);
}
