#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qopt/errors.hpp"
#include "qopt/heuristic.hpp"

using namespace qopt;
using cd = std::complex<double>;

TEST_CASE("sat_schedule") {
  const auto s = sat_schedule({4.0, -3.4, 0.539298, 3.5105, 20});
  CHECK(s.steps() == 20);
  CHECK(s.at(1).rho == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(s.at(1).tau == doctest::Approx((0.539298 + 3.5105) / 20).epsilon(1e-12));
  CHECK(s.at(20).rho == doctest::Approx(0.1915).epsilon(1e-12));

  const auto flat = sat_schedule({2.0, 0.0, 1.0, 0.0, 8});
  for (const auto& e : flat.entries()) {
    CHECK(e.rho == 0.25);
    CHECK(e.tau == 0.125);
  }
  CHECK_THROWS_AS(sat_schedule({1, 1, 1, 1, 0}), ParameterError);
  CHECK_THROWS_AS(s.at(21), RangeError);
}

TEST_CASE("atsp_schedule") {
  const auto s = atsp_schedule({0.32, 0.12, 0.12, 20});
  CHECK(s.at(1).rho == doctest::Approx(0.44).epsilon(1e-12));
  CHECK(s.at(1).tau == 0.12);
  CHECK(atsp_schedule({0.36, 0.84, 0.12, 20}).at(20).rho == doctest::Approx(17.16).epsilon(1e-12));
  const auto flat = atsp_schedule({0.5, 0.0, 0.2, 5});
  for (const auto& e : flat.entries()) CHECK(e.rho == 0.5);
  CHECK_THROWS_AS(atsp_schedule({0.3, 0.1, 0.1, 0}), ParameterError);
  CHECK_THROWS_AS(Schedule({}), ParameterError);
}

TEST_CASE("identity schedule leaves the uniform cost histogram") {
  const std::vector<double> costs{0, 1, 1, 2, 1, 2, 2, 3};
  const auto result = run_trial(3, costs, Schedule({{0.0, 0.0}}), {true, {}});
  CHECK(result.report.final_probabilities.at(0.0) == doctest::Approx(1.0 / 8));
  CHECK(result.report.final_probabilities.at(1.0) == doctest::Approx(3.0 / 8));
  CHECK(result.report.final_probabilities.at(3.0) == doctest::Approx(1.0 / 8));
  REQUIRE(result.report.per_step_histograms.size() == 2);
  CHECK(result.report.per_step_histograms[0] == result.report.per_step_histograms[1]);
  CHECK(result.report.p_min == doctest::Approx(1.0 / 8));
  CHECK(result.report.expected_result_cost == doctest::Approx(1.5));
}

TEST_CASE("run_trial matches dense matrix evaluation") {
  Rng rng(21);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + trial % 6;
    const auto costs = oracle::random_costs(n, 6, rng);
    const auto schedule = oracle::random_schedule(1 + static_cast<int>(rng.below(6)), rng);
    const auto fast = run_trial(n, costs, schedule).state;
    const auto dense = oracle::dense_trial(n, costs, schedule);
    for (std::size_t s = 0; s < dense.size(); ++s) CHECK(std::abs(fast[s] - dense[s]) < 1e-8);
  }
}

TEST_CASE("amplitude amplification special case") {
  for (int n : {3, 6, 10}) {
    const std::size_t marked = (std::size_t{1} << n) / 3;
    std::vector<double> costs(std::size_t{1} << n, 1.0);
    costs[marked] = 0.0;
    const double theta = std::asin(std::pow(2.0, -n / 2.0));
    for (int k = 0; k <= 5; ++k) {
      std::vector<StepOperators> steps(static_cast<std::size_t>(k), amplitude_amplification_step(n));
      const auto state = k == 0 ? uniform_state(n) : run_generalized_trial(n, costs, steps);
      const double expected = std::pow(std::sin((2 * k + 1) * theta), 2);
      CHECK(std::abs(std::norm(state[marked]) - expected) < 1e-9);
    }
  }
}

TEST_CASE("trial preserves the norm") {
  Rng rng(22);
  for (int n : {4, 10, 16}) {
    const auto costs = oracle::random_costs(n, 30, rng);
    const auto schedule = oracle::random_schedule(40, rng);
    CHECK(std::abs(evolve(n, costs, schedule).norm_squared() - 1.0) < 1e-9);
  }
  CHECK_THROWS_AS(evolve(3, std::vector<double>(4, 0.0), Schedule({{0.1, 0.1}})), ArgumentError);
}

TEST_CASE("p_min") {
  std::vector<double> costs{0, 1, 0, 2, 3, 1, 2, 3};
  CHECK(p_min(uniform_state(3), costs, 0.0) == doctest::Approx(0.25));
  CHECK(p_min(StateVector::basis(3, 2), costs, 0.0) == 1.0);
  CHECK_THROWS_AS(p_min(uniform_state(3), costs, -1.0), ArgumentError);

  Rng rng(23);
  for (int n : {2, 6, 10}) {
    const auto state = oracle::random_state(n, rng);
    const auto c = oracle::random_costs(n, 4, rng);
    const double min_cost = *std::min_element(c.begin(), c.end());
    double brute = 0.0;
    for (std::size_t s = 0; s < c.size(); ++s)
      if (c[s] == min_cost) brute += std::norm(state[s]);
    const double fast = p_min(state, c, min_cost);
    CHECK(fast <= 1.0);
    CHECK(std::abs(fast - brute) < 1e-12);
  }
}

TEST_CASE("expected_result_cost") {
  CHECK(expected_result_cost(uniform_state(1), std::vector<double>{0, 1}) == doctest::Approx(0.5));
  CHECK(expected_result_cost(StateVector::basis(2, 1), std::vector<double>{0, 3, 1, 1}) == 3.0);
  Rng rng(24);
  const auto state = oracle::random_state(10, rng);
  const auto costs = oracle::random_costs(10, 50, rng);
  double direct = 0.0;
  for (std::size_t s = 0; s < costs.size(); ++s) direct += costs[s] * std::norm(state[s]);
  CHECK(std::abs(expected_result_cost(state, costs) - direct) < 1e-10);
}

TEST_CASE("expected_steps") {
  CHECK(expected_steps(20, 0.45) == doctest::Approx(44.444444444).epsilon(1e-9));
  CHECK(expected_steps(20, 0.30) == doctest::Approx(66.666666667).epsilon(1e-9));
  CHECK(expected_steps(17, 1.0) == 17.0);
  CHECK_THROWS_AS(expected_steps(20, 0.0), UndefinedCostError);
  CHECK(std::isinf(expected_steps_or_inf(20, 0.0)));
}

TEST_CASE("sample_measurement") {
  Rng rng(25);
  const auto delta = StateVector::basis(4, 9);
  for (int i = 0; i < 100; ++i) CHECK(sample_measurement(delta, rng) == 9);

  const auto uniform = uniform_state(2);
  std::array<int, 4> counts{};
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[sample_measurement(uniform, rng)];
  for (int c : counts) CHECK(std::abs(c / static_cast<double>(draws) - 0.25) < 0.01);

  Rng a(99, 3), b(99, 3);
  const auto state = oracle::random_state(6, a);
  Rng draw_a(5), draw_b(5);
  for (int i = 0; i < 50; ++i) CHECK(sample_measurement(state, draw_a) == sample_measurement(state, draw_b));
}

TEST_CASE("schedule steps approach the identity as j grows") {
  Rng rng(26);
  const auto costs = oracle::random_costs(8, 20, rng);
  const auto psi = oracle::random_state(8, rng);
  double previous = 1e9;
  for (int j : {10, 100, 1000, 10000}) {
    const auto s = sat_schedule({4.0, -3.4, 0.539298, 3.5105, j});
    auto out = psi;
    apply_diagonal(out, DiagonalSpec::exp_linear(s.at(1).rho, DiagonalBasis::cost), costs);
    apply_mixing(out, s.at(1).tau);
    double dev = 0.0;
    for (std::size_t x = 0; x < out.size(); ++x) dev = std::max(dev, std::abs(out[x] - psi[x]));
    CHECK(dev < previous);
    previous = dev;
  }
  CHECK(previous < 1e-2);
}

TEST_CASE("binned histograms") {
  const std::vector<double> costs{0.71, 0.74, 1.0, 2.0};
  const std::vector<double> probs{0.1, 0.2, 0.3, 0.4};
  const auto hist = cost_histogram(probs, costs, CostBinning{0.05});
  CHECK(hist.size() == 3);
  CHECK(hist.begin()->second == doctest::Approx(0.3));
  double total = 0.0;
  for (const auto& [c, p] : hist) total += p;
  CHECK(total == doctest::Approx(1.0));
  CHECK(CostBinning{0.05}.bin_of(2.0) == doctest::Approx(2.0));
}
