#pragma once

#include <cstdint>

namespace mallows {

struct QuadratureResult {
  double value;
  double abs_error_estimate;
  std::int64_t evaluations;
};

/// The finite-beta scaling constant
///
///   jbar(b) = sqrt(b / (6 sinh(b/2))) * int_0^1 sqrt(cosh(b/2)
///             + 2 cosh(b(2x-1)/2)) dx,
///
/// evaluated in the overflow-safe form
///
///   sqrt(b coth(b/2) / 6) * int_0^1 sqrt(1 + 2 (e^{b(x-1)} + e^{-bx})
///                                            / (1 + e^{-b})) dx,
///
/// which is the same expression with cosh(b/2) factored out of the root.
/// Adaptive Simpson to absolute tolerance `tol`; throws BudgetExceededError
/// when the evaluation budget runs out first.
QuadratureResult j_bar(double beta, double tol = 1e-10,
                       std::int64_t max_evaluations = 1'000'000);

/// Analytic beta -> 0 limit of j_bar (the expression itself is 0/0 there).
inline constexpr double kJBarAtZero = 1.0;

/// sqrt(6)/3, the n sqrt(1-q) scaling limit of the common-subsequence length.
double weak_law_constant();

/// Reciprocal Euler product 1/prod_{k>=1}(1 - q^k) for q in (0,1), relative
/// error <= 1e-14 (log-space accumulation, truncated when the geometric tail
/// drops below 1e-17 with one multiplicative tail correction).
double euler_z(double q);

}  // namespace mallows
