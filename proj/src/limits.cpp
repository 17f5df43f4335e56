#include "mallows/limits.hpp"

#include <cmath>
#include <stdexcept>

#include "mallows/errors.hpp"

namespace mallows {

namespace {

struct Integrand {
  double beta;
  double denom;  // 1 + e^{-beta}

  double operator()(double x) const {
    const double r = 2.0 * (std::exp(beta * (x - 1.0)) + std::exp(-beta * x)) / denom;
    return std::sqrt(1.0 + r);
  }
};

struct SimpsonState {
  const Integrand& f;
  double tol;
  std::int64_t budget;
  std::int64_t evaluations = 0;
  double error_estimate = 0.0;

  double eval(double x) {
    if (++evaluations > budget)
      throw BudgetExceededError("j_bar: evaluation budget exceeded before tolerance was met");
    return f(x);
  }

  static double simpson(double h, double fa, double fm, double fb) {
    return (fa + 4.0 * fm + fb) * (h / 6.0);
  }

  double refine(double a, double b, double fa, double fm, double fb, double whole,
                double tol_here, int depth) {
    const double m = 0.5 * (a + b);
    const double fl = eval(0.5 * (a + m));
    const double fr = eval(0.5 * (m + b));
    const double h2 = 0.5 * (b - a);
    const double left = simpson(h2, fa, fl, fm);
    const double right = simpson(h2, fm, fr, fb);
    const double err = (left + right - whole) / 15.0;
    // A minimum depth keeps the Richardson estimate honest: on very coarse
    // grids the boundary layers can cancel by accident.
    if ((depth >= 5 && std::abs(err) <= tol_here) || depth >= 48) {
      error_estimate += std::abs(err);
      return left + right + err;
    }
    return refine(a, m, fa, fl, fm, left, 0.5 * tol_here, depth + 1) +
           refine(m, b, fm, fr, fb, right, 0.5 * tol_here, depth + 1);
  }

  double integrate(double a, double b) {
    const double fa = eval(a);
    const double fm = eval(0.5 * (a + b));
    const double fb = eval(b);
    const double whole = simpson(b - a, fa, fm, fb);
    return refine(a, b, fa, fm, fb, whole, tol, 0);
  }
};

}  // namespace

QuadratureResult j_bar(double beta, double tol, std::int64_t max_evaluations) {
  if (!(beta > 0.0)) throw std::invalid_argument("j_bar: beta must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("j_bar: tol must be > 0");

  const Integrand f{beta, 1.0 + std::exp(-beta)};
  SimpsonState state{f, tol, max_evaluations};
  const double integral = state.integrate(0.0, 1.0);

  // beta * coth(beta/2) -> 2 as beta -> 0; finite for every beta > 0.
  const double prefactor = std::sqrt(beta / std::tanh(0.5 * beta) / 6.0);
  return QuadratureResult{prefactor * integral, prefactor * state.error_estimate,
                          state.evaluations};
}

double weak_law_constant() { return std::sqrt(6.0) / 3.0; }

double euler_z(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("euler_z: q must be in (0,1)");
  const double lq = std::log(q);
  double log_z = 0.0;
  std::int64_t k = 1;
  double qk = q;
  for (;;) {
    log_z -= std::log1p(-qk);
    if (qk / (1.0 - q) < 1e-17 || k > 50'000'000) break;
    ++k;
    qk = std::exp(static_cast<double>(k) * lq);
  }
  // Tail of -sum log(1-q^k) beyond k, to first order a geometric series.
  log_z += qk * q / (1.0 - q);
  return std::exp(log_z);
}

}  // namespace mallows
