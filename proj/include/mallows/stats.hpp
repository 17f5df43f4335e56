#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mallows {

/// Moment summary of a Monte Carlo sample. ks_statistic_vs_normal compares
/// the values, exactly as given, against the standard normal CDF; callers
/// decide whether to standardize first.
struct SummaryStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double ks_statistic_vs_normal = 0.0;
};

/// Two-pass compensated moments. standardize_for_ks shifts and scales the
/// sample by its own mean and standard deviation before the KS comparison.
SummaryStats summarize(std::span<const double> values, bool standardize_for_ks);

/// Sup distance between the sample's empirical CDF and the standard normal
/// CDF. Requires at least 10 points.
double ks_statistic(std::span<const double> sample);

/// Two-sample Kolmogorov-Smirnov sup distance between empirical CDFs.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

double normal_cdf(double x);

/// Compensated (Kahan) sum; the order of `values` fixes the result exactly.
double kahan_sum(std::span<const double> values);

/// Upper regularized incomplete gamma Q(a, x); series/continued-fraction.
double gamma_q(double a, double x);

struct ChiSquareResult {
  double statistic = 0.0;
  std::int64_t dof = 0;
  double p_value = 1.0;
  std::int64_t pooled_cells = 0;
};

/// Pearson goodness-of-fit of observed counts against cell probabilities.
/// Cells with expected count below min_expected are pooled (smallest first)
/// so the chi-square approximation stays honest.
ChiSquareResult chi_square_gof(std::span<const std::int64_t> counts,
                               std::span<const double> probs,
                               double min_expected = 5.0);

}  // namespace mallows
