#include "mallows/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mallows {

namespace {

// Neumaier's variant: the compensation also survives terms larger than the
// running sum.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

double kahan_sum(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

SummaryStats summarize(std::span<const double> values, bool standardize_for_ks) {
  SummaryStats s;
  s.count = static_cast<std::int64_t>(values.size());
  if (s.count == 0) return s;
  s.mean = kahan_sum(values) / static_cast<double>(s.count);

  CompensatedSum acc2, acc3, acc4;
  for (double v : values) {
    const double d = v - s.mean;
    const double d2 = d * d;
    acc2.add(d2);
    acc3.add(d2 * d);
    acc4.add(d2 * d2);
  }
  const double m2 = acc2.value(), m3 = acc3.value(), m4 = acc4.value();
  const double n = static_cast<double>(s.count);
  if (s.count >= 2) {
    s.variance = m2 / (n - 1.0);
    s.std_error = std::sqrt(s.variance / n);
  }
  if (m2 > 0.0) {
    const double m2n = m2 / n;
    s.skewness = (m3 / n) / std::pow(m2n, 1.5);
    s.excess_kurtosis = (m4 / n) / (m2n * m2n) - 3.0;
  }
  if (s.count >= 10) {
    if (standardize_for_ks) {
      const double sd = std::sqrt(m2 / (n - 1.0));
      std::vector<double> z(values.begin(), values.end());
      if (sd > 0.0)
        for (double& v : z) v = (v - s.mean) / sd;
      s.ks_statistic_vs_normal = ks_statistic(z);
    } else {
      s.ks_statistic_vs_normal = ks_statistic(values);
    }
  }
  return s;
}

double ks_statistic(std::span<const double> sample) {
  if (sample.size() < 10)
    throw std::invalid_argument("ks_statistic: need at least 10 points");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = normal_cdf(sorted[i]);
    d = std::max(d, cdf - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - cdf);
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

namespace {

// Regularized incomplete gamma, lower series / upper continued fraction.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int k = 0; k < 10000; ++k) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k < 10000; ++k) {
    const double an = -static_cast<double>(k) * (static_cast<double>(k) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

ChiSquareResult chi_square_gof(std::span<const std::int64_t> counts,
                               std::span<const double> probs,
                               double min_expected) {
  if (counts.size() != probs.size() || counts.empty())
    throw std::invalid_argument("chi_square_gof: counts/probs size mismatch");
  const double total =
      static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
  if (total <= 0.0) throw std::invalid_argument("chi_square_gof: no observations");

  // Pool low-expectation cells, smallest expected first.
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });

  std::vector<double> expected;
  std::vector<std::int64_t> observed;
  double pooled_expected = 0.0;
  std::int64_t pooled_observed = 0;
  for (std::size_t idx : order) {
    pooled_expected += probs[idx] * total;
    pooled_observed += counts[idx];
    if (pooled_expected >= min_expected) {
      expected.push_back(pooled_expected);
      observed.push_back(pooled_observed);
      pooled_expected = 0.0;
      pooled_observed = 0;
    }
  }
  if (expected.empty())
    throw std::invalid_argument("chi_square_gof: every cell is below the pooling threshold");
  // Any leftover small tail joins the last pooled cell.
  expected.back() += pooled_expected;
  observed.back() += pooled_observed;

  ChiSquareResult r;
  for (std::size_t c = 0; c < expected.size(); ++c) {
    const double diff = static_cast<double>(observed[c]) - expected[c];
    r.statistic += diff * diff / expected[c];
  }
  r.pooled_cells = static_cast<std::int64_t>(expected.size());
  r.dof = std::max<std::int64_t>(1, r.pooled_cells - 1);
  r.p_value = gamma_q(0.5 * static_cast<double>(r.dof), 0.5 * r.statistic);
  return r;
}

}  // namespace mallows
