#include "levysd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "levysd/errors.hpp"

namespace levysd {

namespace {

// Kronrod 15 abscissae (positive half) with Gauss-7 and Kronrod-15 weights.
// Rows 0-3 are the Gauss points, rows 4-7 Kronrod-only points.
constexpr double kNodes[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

}  // namespace

PanelEstimate gk15_panel(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f0 = f(mid);
  double g7 = kNodes[0][1] * f0;
  double k15 = kNodes[0][2] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kNodes[i][0];
    const double fi = f(mid + dx) + f(mid - dx);
    g7 += kNodes[i][1] * fi;
    k15 += kNodes[i][2] * fi;
  }
  g7 *= half;
  k15 *= half;

  double err = 200.0 * std::fabs(g7 - k15);
  err *= std::sqrt(err);
  return {k15, err};
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol, int max_panels) {
  if (!(b > a)) return 0.0;

  struct Interval {
    double a, b;
  };
  std::vector<Interval> stack{{a, b}};
  stack.reserve(64);

  double sum = 0.0;
  int used = 0;
  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    const PanelEstimate p = gk15_panel(f, iv.a, iv.b);
    if (p.error <= abs_tol + rel_tol * std::fabs(p.value) ||
        (iv.b - iv.a) <= 1e-15 * (std::fabs(iv.a) + std::fabs(iv.b))) {
      sum += p.value;
      continue;
    }
    if (++used > max_panels)
      throw NoConvergenceError("adaptive quadrature panel budget exhausted");
    const double mid = 0.5 * (iv.a + iv.b);
    stack.push_back({iv.a, mid});
    stack.push_back({mid, iv.b});
  }
  return sum;
}

double integrate_from_zero(const std::function<double(double)>& h_log, double b,
                           double sing, double rel_tol) {
  if (!(b > 0.0)) return 0.0;
  if (!(sing > -1.0)) throw DomainError("integrate_from_zero: exponent must exceed -1");

  const double eta = sing + 1.0;
  // Floor below which the remaining mass is a pure power-law head. Keep the
  // floor representable; the head term absorbs whatever is cut off.
  double drop_decades = 16.0 / eta;
  drop_decades = std::min(drop_decades, 260.0);
  const double y_hi = std::log(b);
  const double y_lo = y_hi - drop_decades * 2.302585092994046;

  const double head = h_log(y_lo) / eta;
  const double body = integrate(h_log, y_lo, y_hi, rel_tol, 1e-320);
  return head + body;
}

double integrate_decaying(const std::function<double(double)>& g, double a,
                          double exp_decay, double poly_decay, double rel_tol) {
  // Pick a truncation point where the analytic tail bound drops below the
  // target tolerance, then integrate in w = log(v - a + 1) so exponential and
  // polynomial decay are both handled with a modest panel count.
  double range;
  if (exp_decay > 0.0) {
    range = 40.0 / exp_decay + 10.0;
  } else {
    if (!(poly_decay > 1.0))
      throw DomainError("integrate_decaying: need exponential or >1 polynomial decay");
    // (a + range)/a ratio cut so ((a+range)/a)^{1-p} <= 1e-14.
    const double ratio = std::pow(10.0, 14.0 / (poly_decay - 1.0));
    range = std::max(a, 1.0) * std::min(ratio, 1e280);
  }
  const double w_hi = std::log1p(range);
  auto integrand = [&](double w) {
    const double v = a + std::expm1(w);
    return g(v) * (std::expm1(w) + 1.0);
  };
  return integrate(integrand, 0.0, w_hi, rel_tol, 1e-320);
}

}  // namespace levysd
