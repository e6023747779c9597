#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "qopt/errors.hpp"
#include "qopt/rng.hpp"
#include "qopt/stats.hpp"

using namespace qopt;
using namespace qopt::stats;

namespace {

// Direct sum of binomial coefficients, independent of the library's cdf.
double binomial_cdf_oracle(std::size_t n, std::size_t k) {
  double total = 0.0;
  for (std::size_t i = 0; i <= k && i <= n; ++i)
    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) - n * std::log(2.0));
  return total;
}

}  // namespace

TEST_CASE("binomial tail") {
  CHECK(binomial_half_cdf(4, 0) == doctest::Approx(1.0 / 16));
  CHECK(binomial_half_cdf(4, 2) == doctest::Approx(11.0 / 16));
  CHECK(binomial_half_cdf(4, 4) == doctest::Approx(1.0));
  for (std::size_t n : {10u, 37u, 100u, 500u})
    for (std::size_t k = 0; k <= n; k += 3) CHECK(binomial_half_cdf(n, k) == doctest::Approx(binomial_cdf_oracle(n, k)).epsilon(1e-9));
}

TEST_CASE("median interval ranks") {
  const auto r = median_ci_ranks(100, 0.95);
  CHECK(r.lo == 40);
  CHECK(r.hi == 61);
  CHECK(order_statistic_coverage(100, 40) >= 0.95);
  CHECK(order_statistic_coverage(100, 41) < 0.95);
  CHECK(order_statistic_coverage(100, 40) == doctest::Approx(1.0 - 2.0 * binomial_cdf_oracle(100, 39)));

  for (std::size_t n = 6; n <= 300; n += 7) {
    const auto p = median_ci_ranks(n, 0.95);
    CHECK(p.lo + p.hi == n + 1);
    CHECK(order_statistic_coverage(n, p.lo) >= 0.95);
    if (p.lo + 1 <= p.hi - 1) CHECK(order_statistic_coverage(n, p.lo + 1) < 0.95);
  }
  CHECK_THROWS_AS(median_ci_ranks(5, 0.95), StatisticsError);
  CHECK_NOTHROW(median_ci_ranks(6, 0.95));
}

TEST_CASE("median interval values") {
  std::vector<double> xs(100);
  std::iota(xs.begin(), xs.end(), 1.0);
  std::vector<double> shuffled(xs.rbegin(), xs.rend());
  const auto ci = median_ci(shuffled);
  CHECK(ci.median == 50.5);
  CHECK(ci.lo == 40.0);
  CHECK(ci.hi == 61.0);
  CHECK(ci.lo_rank == 40);
  CHECK(ci.hi_rank == 61);
  CHECK(ci.coverage >= 0.95);

  const std::vector<double> same(30, 7.0);
  const auto flat = median_ci(same);
  CHECK(flat.median == 7.0);
  CHECK(flat.lo == 7.0);
  CHECK(flat.hi == 7.0);

  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<double> with_inf{1, 2, 3, 4, 5, 6, inf};
  const auto tail = median_ci(with_inf);
  CHECK(tail.median == 4.0);
  CHECK(std::isinf(tail.hi));

  CHECK_THROWS_AS(median_ci(std::vector<double>{1, 2, 3, 4, 5}), StatisticsError);
  CHECK_THROWS_AS(median_ci(std::vector<double>{1, 2, 3, 4, 5, std::nan("")}), StatisticsError);
}

TEST_CASE("median interval coverage") {
  Rng rng(2024);
  const int reps = 10000;
  int covered = 0;
  std::vector<double> sample(100);
  for (int r = 0; r < reps; ++r) {
    for (auto& x : sample) x = rng.normal();
    const auto ci = median_ci(sample);
    covered += ci.lo <= 0.0 && 0.0 <= ci.hi;
  }
  CHECK(covered >= static_cast<int>(0.93 * reps));
}

TEST_CASE("rank correlation") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(spearman(x, std::vector<double>{10, 20, 30, 40, 50}) == doctest::Approx(1.0));
  CHECK(spearman(x, std::vector<double>{1, 4, 9, 16, 25}) == doctest::Approx(1.0));
  CHECK(spearman(x, std::vector<double>{5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
  // Ranks of y are (1, 2.5, 2.5, 4, 5); Pearson of ranks.
  const std::vector<double> y{1, 2, 2, 3, 4};
  const std::vector<double> ry{1, 2.5, 2.5, 4, 5};
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 5; ++i) {
    sxy += (x[i] - 3) * (ry[i] - 3);
    sxx += (x[i] - 3) * (x[i] - 3);
    syy += (ry[i] - 3) * (ry[i] - 3);
  }
  CHECK(spearman(x, y) == doctest::Approx(sxy / std::sqrt(sxx * syy)));
  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2}), StatisticsError);
}

TEST_CASE("least squares and mean") {
  const std::vector<double> x{6, 7, 8, 9};
  std::vector<double> y;
  for (double v : x) y.push_back(-0.95 * v + 2.5);
  const auto fit = least_squares(x, y);
  CHECK(fit.slope == doctest::Approx(-0.95));
  CHECK(fit.intercept == doctest::Approx(2.5));
  CHECK(mean(x) == 7.5);
}
