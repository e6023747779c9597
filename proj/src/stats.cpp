#include "qopt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "qopt/errors.hpp"

namespace qopt::stats {

double binomial_half_cdf(std::size_t n, std::size_t k) {
  if (k >= n) return 1.0;
  // Accumulate C(n,i) 2^{-n} in log space to stay finite for large n.
  const double log_half_n = -static_cast<double>(n) * std::log(2.0);
  double total = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
    total += std::exp(log_choose + log_half_n);
  }
  return std::min(total, 1.0);
}

double order_statistic_coverage(std::size_t n, std::size_t r) {
  if (r == 0 || 2 * r > n + 1) throw StatisticsError("rank outside the lower half of the sample");
  return 1.0 - 2.0 * binomial_half_cdf(n, r - 1);
}

RankPair median_ci_ranks(std::size_t n, double level) {
  if (!(level > 0.0 && level < 1.0)) throw StatisticsError("confidence level must be in (0, 1)");
  if (n == 0 || order_statistic_coverage(n, 1) < level)
    throw StatisticsError("too few samples (" + std::to_string(n) + ") for the requested confidence level");
  std::size_t r = 1;
  while (2 * (r + 1) <= n + 1 && order_statistic_coverage(n, r + 1) >= level) ++r;
  return {r, n + 1 - r};
}

MedianCI median_ci(std::span<const double> samples, double level) {
  for (double x : samples)
    if (std::isnan(x)) throw StatisticsError("NaN sample");
  const auto ranks = median_ci_ranks(samples.size(), level);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  MedianCI out;
  out.level = level;
  if (n % 2 == 1) {
    out.median = sorted[n / 2];
  } else {
    const double a = sorted[n / 2 - 1];
    const double b = sorted[n / 2];
    out.median = (std::isinf(a) || std::isinf(b)) ? (a == b ? a : b) : 0.5 * (a + b);
  }
  out.lo_rank = ranks.lo;
  out.hi_rank = ranks.hi;
  out.lo = sorted[ranks.lo - 1];
  out.hi = sorted[ranks.hi - 1];
  out.coverage = order_statistic_coverage(n, ranks.lo);
  return out;
}

double mean(std::span<const double> samples) {
  if (samples.empty()) throw StatisticsError("mean of empty sample");
  return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw StatisticsError("correlation undefined for constant input");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw StatisticsError("spearman needs two equal-length samples");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw StatisticsError("regression needs two equal-length samples");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw StatisticsError("regression needs distinct x values");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace qopt::stats
