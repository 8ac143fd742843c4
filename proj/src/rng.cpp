#include "levysd/rng.hpp"

#include <algorithm>
#include <cmath>

namespace levysd {

double inverse_normal_cdf(double u) {
  // Moro (1995). |error| < 3e-9 in the central region, < 1e-7 in the tails.
  const double eps = 1e-15;
  u = std::max(eps, std::min(u, 1.0 - eps));

  const double x = u - 0.5;
  if (std::fabs(x) < 0.42) {
    const double r = x * x;
    static const double a0 = 2.50662823884;
    static const double a1 = -18.61500062529;
    static const double a2 = 41.39119773534;
    static const double a3 = -25.44106049637;
    static const double b0 = -8.47351093090;
    static const double b1 = 23.08336743743;
    static const double b2 = -21.06224101826;
    static const double b3 = 3.13082909833;
    const double num = a0 + r * (a1 + r * (a2 + r * a3));
    const double den = 1.0 + r * (b0 + r * (b1 + r * (b2 + r * b3)));
    return x * num / den;
  }

  double r = (x < 0.0) ? u : (1.0 - u);
  r = std::log(-std::log(r));
  static const double c0 = 0.3374754822726147;
  static const double c1 = 0.9761690190917186;
  static const double c2 = 0.1607979714918209;
  static const double c3 = 0.0276438810333863;
  static const double c4 = 0.0038405729373609;
  static const double c5 = 0.0003951896511919;
  static const double c6 = 0.0000321767881768;
  static const double c7 = 0.0000002888167364;
  static const double c8 = 0.0000003960315187;
  const double z = c0 + r * (c1 + r * (c2 + r * (c3 + r * (c4 + r * (c5 + r * (c6 + r * (c7 + r * c8)))))));
  return (x < 0.0) ? -z : z;
}

namespace {

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }
double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

}  // namespace

double refined_normal_quantile(double u) {
  double x = inverse_normal_cdf(u);
  for (int it = 0; it < 2; ++it) {
    const double err = std_normal_cdf(x) - u;
    const double d = std_normal_pdf(x);
    if (d <= 0.0) break;
    x -= err / d;
  }
  return x;
}

namespace detail {

QuantileTable::QuantileTable() {
  const double h = 1.0 / kSegments;
  for (int i = 0; i < kSegments; ++i) {
    const double u0 = i * h;
    const double u1 = u0 + h;
    // clamp the outermost nodes; the edge segments are never table-evaluated
    const double a = std::max(u0, 0.25 * h);
    const double b = std::min(u1, 1.0 - 0.25 * h);
    const double f0 = refined_normal_quantile(a);
    const double f1 = refined_normal_quantile(b);
    const double d0 = h / std_normal_pdf(f0);
    const double d1 = h / std_normal_pdf(f1);
    c0[i] = f0;
    c1[i] = d0;
    c2[i] = 3.0 * (f1 - f0) - 2.0 * d0 - d1;
    c3[i] = 2.0 * (f0 - f1) + d0 + d1;
  }
  for (int o = 0; o < kOctaves; ++o) {
    const double base = std::ldexp(1.0, -(o + 8));
    const double he = base / kOctSegs;
    for (int i = 0; i < kOctSegs; ++i) {
      const double u0 = base + i * he;
      const double u1 = u0 + he;
      const double f0 = refined_normal_quantile(u0);
      const double f1 = refined_normal_quantile(u1);
      const double d0 = he / std_normal_pdf(f0);
      const double d1 = he / std_normal_pdf(f1);
      const int row = o * kOctSegs + i;
      e0[row] = f0;
      e1[row] = d0;
      e2[row] = 3.0 * (f1 - f0) - 2.0 * d0 - d1;
      e3[row] = 2.0 * (f0 - f1) + d0 + d1;
    }
  }
}

const QuantileTable& quantile_table() {
  static const QuantileTable table;
  return table;
}

}  // namespace detail

}  // namespace levysd
