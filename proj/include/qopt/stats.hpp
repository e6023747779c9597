#pragma once

#include <cstddef>
#include <span>

namespace qopt::stats {

/// Median with a distribution-free confidence interval from order statistics.
/// lo and hi are the lo_rank-th and hi_rank-th smallest samples (1-based).
struct MedianCI {
  double median = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  std::size_t lo_rank = 0;
  std::size_t hi_rank = 0;
  double coverage = 0.0;  // exact binomial coverage of [lo_rank, hi_rank]
};

/// P(X <= k) for X ~ Binomial(n, 1/2).
double binomial_half_cdf(std::size_t n, std::size_t k);

/// Coverage of [X_(r), X_(n+1-r)] for the median: 1 - 2 P(X <= r-1).
double order_statistic_coverage(std::size_t n, std::size_t r);

struct RankPair {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

/// Narrowest symmetric rank pair whose coverage is at least `level`. Throws
/// StatisticsError if even the full range falls short.
RankPair median_ci_ranks(std::size_t n, double level);

/// Infinite samples sort to the top and are allowed.
MedianCI median_ci(std::span<const double> samples, double level = 0.95);

double mean(std::span<const double> samples);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace qopt::stats
