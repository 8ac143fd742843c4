#pragma once

// Test-only reference implementations, kept independent of the library's
// numerical paths: adaptive Simpson instead of Gauss-Kronrod, dyadic segment
// summation instead of log-substitution, and the classical reflection series
// for the Brownian sup-norm law.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol,
                          int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate_simpson(const std::function<double(double)>& f, double a,
                                double b, double tol = 1e-13, int depth = 48) {
  if (!(b > a)) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Integral of f over (0, eps] with an integrable power blow-up at zero:
// dyadic segments summed until they stop contributing.
inline double integrate_from_zero_dyadic(const std::function<double(double)>& f,
                                         double eps, double tol = 1e-13) {
  double total = 0.0;
  double hi = eps;
  for (int k = 0; k < 4000; ++k) {
    const double lo = 0.5 * hi;
    const double seg = integrate_simpson(f, lo, hi, tol);
    total += seg;
    if (std::fabs(seg) < 1e-16 * std::fabs(total) + 1e-320) break;
    hi = lo;
  }
  return total;
}

// P(sup_{s<=t} |B_s| <= eps) for a standard Brownian motion.
inline double brownian_sup_cdf(double t, double eps) {
  const double q = M_PI * M_PI * t / (8.0 * eps * eps);
  if (q > 745.0) return 0.0;
  double sum = 0.0;
  for (int k = 0; k < 4000; ++k) {
    const double term = (k % 2 == 0 ? 1.0 : -1.0) / (2.0 * k + 1.0) *
                        std::exp(-(2.0 * k + 1.0) * (2.0 * k + 1.0) * q);
    sum += term;
    if (std::fabs(term) < 1e-18) break;
  }
  return std::min(1.0, std::max(0.0, 4.0 / M_PI * sum));
}

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Same law via reflections; cross-check for the series above.
inline double brownian_sup_cdf_reflect(double t, double eps) {
  const double a = eps / std::sqrt(t);
  double sum = 0.0;
  for (int j = -200; j <= 200; ++j) {
    const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    sum += sgn * (std_normal_cdf((2.0 * j + 1.0) * a) - std_normal_cdf((2.0 * j - 1.0) * a));
  }
  return std::min(1.0, std::max(0.0, sum));
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

inline double skewness(const std::vector<double>& v) {
  const double m = mean(v);
  double s2 = 0.0, s3 = 0.0;
  for (double x : v) {
    const double d = x - m;
    s2 += d * d;
    s3 += d * d * d;
  }
  s2 /= v.size();
  s3 /= v.size();
  return s3 / std::pow(s2, 1.5);
}

// Two-sided Kolmogorov-Smirnov statistic against a continuous CDF.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double c = cdf(sample[i]);
    d = std::max(d, std::fabs(c - i / n));
    d = std::max(d, std::fabs(c - (i + 1) / n));
  }
  return d;
}

}  // namespace oracle
