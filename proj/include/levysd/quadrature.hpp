#pragma once

#include <functional>

namespace levysd {

// Gauss-Kronrod 7-15 value and error estimate on [a, b].
struct PanelEstimate {
  double value;
  double error;
};

PanelEstimate gk15_panel(const std::function<double(double)>& f, double a, double b);

// Adaptive bisection until every panel satisfies
//   err <= abs_tol + rel_tol * |panel value|.
// Throws NoConvergenceError once the panel budget is spent.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_tol = 1e-300,
                 int max_panels = 40000);

// Integral of f over (0, b] where f(x) ~ A x^sing as x -> 0, sing > -1.
// The caller supplies the log-substituted integrand h(y) = f(e^y) * e^y,
// which must be safe to evaluate for y in [log(floor), log(b)]. The part of
// the integral below the floor is added analytically from the leading power.
double integrate_from_zero(const std::function<double(double)>& h_log, double b,
                           double sing, double rel_tol = 1e-12);

// Integral of g over [a, infinity) where g eventually decays at least like
// exp(-decay * v) (decay > 0) or like v^-p with p > 1 (decay == 0, p given).
// Used for moment integrals written in v = -log x coordinates.
double integrate_decaying(const std::function<double(double)>& g, double a,
                          double exp_decay, double poly_decay,
                          double rel_tol = 1e-12);

}  // namespace levysd
