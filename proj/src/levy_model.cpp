#include "levysd/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levysd/errors.hpp"
#include "levysd/quadrature.hpp"

namespace levysd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// e^z - 1 - z without cancellation for small z.
double exp_comp(double z) {
  if (std::fabs(z) < 1e-3) {
    return 0.5 * z * z * (1.0 + z / 3.0 + z * z / 12.0 + z * z * z / 60.0);
  }
  return std::expm1(z) - z;
}

// int_0^eps x e^{-c x} dx, stable for any sign of c.
double int_x_exp(double c, double eps) {
  const double ce = c * eps;
  if (std::fabs(ce) < 1e-4) {
    return eps * eps * (0.5 - ce / 3.0 + ce * ce / 8.0 - ce * ce * ce / 30.0);
  }
  return (1.0 - (1.0 + ce) * std::exp(-ce)) / (c * c);
}

// int_0^eps e^{-c x} dx.
double int_exp(double c, double eps) {
  const double ce = c * eps;
  if (std::fabs(ce) < 1e-4) {
    return eps * (1.0 - ce / 2.0 + ce * ce / 6.0 - ce * ce * ce / 24.0);
  }
  return -std::expm1(-ce) / c;
}

void check_eps(double eps) {
  if (!(eps > 0.0) || eps > 1.0) throw DomainError("eps must lie in (0, 1]");
}

void check_tilt(double eps, double u) {
  if (std::fabs(u) * std::min(eps, 1.0) > kMaxTiltExponent)
    throw OverflowGuardError("|u| * eps exceeds the overflow guard");
}

// ---------- TwoSidedPolynomial closed forms (one side, density c x^{-1-a}) ----------

double poly_tail_side(double c, double a, double eps) {
  if (c == 0.0) return 0.0;
  if (a == 0.0) return c * std::log(1.0 / eps);
  return c * (std::pow(eps, -a) - 1.0) / a;
}

double poly_m2_side(double c, double a, double eps) {
  if (c == 0.0) return 0.0;
  return c * std::pow(eps, 2.0 - a) / (2.0 - a);
}

double poly_m1_side(double c, double a, double eps) {
  if (c == 0.0) return 0.0;
  if (a >= 1.0) return kInf;
  return c * std::pow(eps, 1.0 - a) / (1.0 - a);
}

// int_eps^1 x * c x^{-1-a} dx
double poly_ann1_side(double c, double a, double eps) {
  if (c == 0.0) return 0.0;
  if (a == 1.0) return c * std::log(1.0 / eps);
  return c * (1.0 - std::pow(eps, 1.0 - a)) / (1.0 - a);
}

// Tilted side integrals; w is the sign-adjusted exponent multiplier so the
// integrand is weight(w * x) * c x^{-1-a} over (0, eps].
double poly_tilt2_side(double c, double a, double eps, double w, double rel_tol) {
  if (c == 0.0) return 0.0;
  auto h = [c, a, w](double y) {
    return c * std::exp((2.0 - a) * y + w * std::exp(y));
  };
  return integrate_from_zero(h, eps, 1.0 - a, rel_tol);
}

double poly_expcomp_side(double c, double a, double eps, double w, double rel_tol) {
  if (c == 0.0 || w == 0.0) return 0.0;
  auto h = [c, a, w](double y) {
    const double z = w * std::exp(y);
    if (std::fabs(z) < 1e-3) {
      return c * 0.5 * w * w * std::exp((2.0 - a) * y) *
             (1.0 + z / 3.0 + z * z / 12.0 + z * z * z / 60.0);
    }
    return c * exp_comp(z) * std::exp(-a * y);
  };
  return integrate_from_zero(h, eps, 1.0 - a, rel_tol);
}

double poly_tilt1_side(double c, double a, double eps, double w, double rel_tol) {
  if (c == 0.0 || w == 0.0) return 0.0;
  auto h = [c, a, w](double y) {
    const double z = w * std::exp(y);
    if (std::fabs(z) < 1e-3) {
      return c * w * std::exp((2.0 - a) * y) *
             (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
    }
    return c * std::expm1(z) * std::exp((1.0 - a) * y);
  };
  return integrate_from_zero(h, eps, 1.0 - a, rel_tol);
}

// ---------- SymmetricLogPolynomial ----------
// Per-side density on (0, cutoff]: (s/2) x^{-1-a} v^{-g-1} (a v - g), v = -log x.
// Uniform bump of density bump_density per side on (cutoff, 1].

struct LogPolyKernel {
  const SymmetricLogPolynomial& f;
  // factor common to both sides combined: s * e^{-(2-a)v} v^{-g-1} (a v - g)
  double base2(double v) const {
    return f.scale * std::exp(-(2.0 - f.alpha) * v - (f.gamma_exp + 1.0) * std::log(v)) *
           (f.alpha * v - f.gamma_exp);
  }
};

// Pure-region integral over (0, min(eps, cutoff)] of both sides combined,
// weight kind selected by the lambda `w` acting on z = u * x:
//   m2/tilt2: x^2 * cosh-type, expcomp, tilt1 (sinh-type).
enum class TiltKind { Second, ExpComp, First };

double logpoly_pure(const SymmetricLogPolynomial& f, double eps, double u, TiltKind kind,
                    double rel_tol) {
  const double v_eps = -std::log(std::min(eps, f.cutoff));
  const double a = f.alpha;
  const double g = f.gamma_exp;
  const double s = f.scale;
  auto body = [&](double v) {
    const double shape = std::exp(-(g + 1.0) * std::log(v)) * (a * v - g);
    const double z = u * std::exp(-v);
    switch (kind) {
      case TiltKind::Second: {
        // x^2 * (e^{-ux} + e^{ux})/2 summed over sides -> cosh
        return s * std::exp(-(2.0 - a) * v) * shape * std::cosh(z);
      }
      case TiltKind::ExpComp: {
        if (std::fabs(z) < 1e-3) {
          return s * 0.5 * u * u * std::exp(-(2.0 - a) * v) * shape *
                 (1.0 + z * z / 12.0);
        }
        return s * (std::cosh(z) - 1.0) * std::exp(a * v) * shape;
      }
      case TiltKind::First: {
        if (std::fabs(z) < 1e-3) {
          return s * u * std::exp(-(2.0 - a) * v) * shape * (1.0 + z * z / 6.0);
        }
        return s * std::sinh(z) * std::exp(-(1.0 - a) * v) * shape;
      }
    }
    return 0.0;
  };
  const double exp_decay = 2.0 - a;
  const double poly_decay = (a == 2.0) ? g : 0.0;
  return integrate_decaying(body, v_eps, exp_decay > 0.0 ? exp_decay : 0.0, poly_decay,
                            rel_tol);
}

// Bump contribution over (cutoff, min(eps,1)] for both sides combined.
double logpoly_bump(const SymmetricLogPolynomial& f, double eps, double u, TiltKind kind,
                    double rel_tol) {
  const double lo = f.cutoff;
  const double hi = std::min(eps, 1.0);
  if (hi <= lo || f.bump_density == 0.0) return 0.0;
  const double d = f.bump_density;
  switch (kind) {
    case TiltKind::Second:
      if (u == 0.0) return 2.0 * d * (hi * hi * hi - lo * lo * lo) / 3.0;
      return 2.0 * d *
             integrate([&](double x) { return x * x * std::cosh(u * x); }, lo, hi, rel_tol);
    case TiltKind::ExpComp:
      if (u == 0.0) return 0.0;
      return 2.0 * d *
             integrate([&](double x) { return std::cosh(u * x) - 1.0; }, lo, hi, rel_tol);
    case TiltKind::First:
      if (u == 0.0) return 0.0;
      return 2.0 * d *
             integrate([&](double x) { return x * std::sinh(u * x); }, lo, hi, rel_tol);
  }
  return 0.0;
}

double logpoly_tail(const SymmetricLogPolynomial& f, double eps) {
  if (eps <= f.cutoff) {
    const double v = -std::log(eps);
    return f.scale * std::exp(f.alpha * v - f.gamma_exp * std::log(v));
  }
  return 2.0 * f.bump_density * (1.0 - std::min(eps, 1.0));
}

double logpoly_ann_abs(const SymmetricLogPolynomial& f, double eps, double rel_tol) {
  // 2 * int_eps^1 x Pi-side(dx)
  double total = 2.0 * f.bump_density * 0.5 * (1.0 - f.cutoff * f.cutoff);
  if (eps >= f.cutoff) {
    return 2.0 * f.bump_density * 0.5 * (1.0 - eps * eps);
  }
  const double a = f.alpha, g = f.gamma_exp, s = f.scale;
  auto body = [&](double v) {
    return s * std::exp(-(1.0 - a) * v - (g + 1.0) * std::log(v)) * (a * v - g);
  };
  total += integrate(body, -std::log(f.cutoff), -std::log(eps), rel_tol, 1e-320);
  return total;
}

// ---------- TabulatedDensity ----------

struct TabSide {
  const std::vector<double>& x;
  const std::vector<double>& d;
};

// int over [lo, hi] of x^k * density, per-cell power-law closed form.
double tab_power_integral(const TabSide& s, double lo, double hi, int k) {
  double total = 0.0;
  const std::size_t n = s.x.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = std::max(lo, s.x[i]);
    const double b = std::min(hi, s.x[i + 1]);
    if (b <= a) continue;
    if (s.d[i] <= 0.0 || s.d[i + 1] <= 0.0) continue;
    const double p = std::log(s.d[i + 1] / s.d[i]) / std::log(s.x[i + 1] / s.x[i]);
    const double coef = s.d[i] * std::pow(s.x[i], -p);
    const double q = k + p + 1.0;
    if (std::fabs(q) < 1e-9) {
      total += coef * std::log(b / a);
    } else {
      total += coef * (std::pow(b, q) - std::pow(a, q)) / q;
    }
  }
  return total;
}

double tab_weighted_integral(const TabSide& s, double lo, double hi,
                             const std::function<double(double)>& w, double rel_tol) {
  double total = 0.0;
  const std::size_t n = s.x.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = std::max(lo, s.x[i]);
    const double b = std::min(hi, s.x[i + 1]);
    if (b <= a) continue;
    if (s.d[i] <= 0.0 || s.d[i + 1] <= 0.0) continue;
    const double p = std::log(s.d[i + 1] / s.d[i]) / std::log(s.x[i + 1] / s.x[i]);
    const double coef = s.d[i] * std::pow(s.x[i], -p);
    total += integrate([&](double x) { return w(x) * coef * std::pow(x, p); }, a, b,
                       rel_tol, 1e-320);
  }
  return total;
}

constexpr double kQuadTol = 1e-12;

}  // namespace

// ---------- LevyModel ----------

LevyModel::LevyModel(double gamma, double sigma2, MeasureFamily measure)
    : gamma_(gamma), sigma2_(sigma2), measure_(std::move(measure)) {
  if (!(sigma2 >= 0.0)) throw DomainError("sigma2 must be >= 0");
  if (auto* p = std::get_if<TwoSidedPolynomial>(&measure_)) {
    if (p->c_pos < 0.0 || p->c_neg < 0.0)
      throw DomainError("polynomial coefficients must be >= 0");
    if (p->c_pos > 0.0 && !(p->alpha_pos < 2.0))
      throw DomainError("alpha1 must be < 2");
    if (p->c_neg > 0.0 && !(p->alpha_neg < 2.0))
      throw DomainError("alpha2 must be < 2");
    if (p->c_pos > 0.0 && p->c_neg > 0.0 && !(p->alpha_pos >= p->alpha_neg))
      throw DomainError("two-sided polynomial requires alpha1 >= alpha2");
  } else if (auto* l = std::get_if<SymmetricLogPolynomial>(&measure_)) {
    if (!(l->alpha > 0.0) || l->alpha > 2.0)
      throw DomainError("log-polynomial alpha must lie in (0, 2]");
    if (l->alpha == 2.0 && !(l->gamma_exp > 1.0))
      throw DomainError("alpha = 2 requires gamma_exp > 1");
    if (!(l->scale > 0.0)) throw DomainError("scale must be > 0");
    double cutoff = 0.5;
    if (l->gamma_exp > 0.0) cutoff = std::min(0.5, std::exp(-l->gamma_exp / l->alpha));
    if (cutoff < 1e-3)
      throw DomainError("log correction too strong for a unit-interval support");
    l->cutoff = cutoff;
    const double vc = -std::log(cutoff);
    const double side_mass =
        0.5 * l->scale * std::exp(l->alpha * vc - l->gamma_exp * std::log(vc));
    l->bump_density = side_mass / (1.0 - cutoff);
  } else if (auto* g = std::get_if<GammaJumps>(&measure_)) {
    if (!(g->shape > 0.0) || !(g->rate > 0.0))
      throw DomainError("gamma subordinator needs shape > 0 and rate > 0");
    if (!(g->sigma > 0.0)) throw DomainError("gamma_jumps requires sigma > 0");
    const double s2 = g->sigma * g->sigma;
    const double root = std::sqrt(g->mu * g->mu + 2.0 * g->rate * s2);
    g->lambda_pos = (root - g->mu) / s2;
    g->lambda_neg = (root + g->mu) / s2;
  } else if (auto* t = std::get_if<TabulatedDensity>(&measure_)) {
    const std::size_t n = t->abs_x.size();
    if (n < 2 || t->dens_pos.size() != n || t->dens_neg.size() != n)
      throw DomainError("tabulated density needs >= 2 aligned nodes");
    if (!(t->abs_x.front() >= 1e-10) || !(t->abs_x.back() <= 1.0))
      throw DomainError("tabulated grid must lie in [1e-10, 1]");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(t->abs_x[i] < t->abs_x[i + 1]))
        throw DomainError("tabulated grid must be strictly increasing");
    for (std::size_t i = 0; i < n; ++i)
      if (!(t->dens_pos[i] > 0.0) || !(t->dens_neg[i] > 0.0))
        throw DomainError("tabulated densities must be strictly positive");
  }
}

LevyModel LevyModel::brownian(double sigma2, double gamma) {
  return LevyModel(gamma, sigma2, TwoSidedPolynomial{0.0, 0.5, 0.0, 0.5});
}

LevyModel LevyModel::variance_gamma(double shape, double rate, double mu, double sigma) {
  LevyModel probe(0.0, 0.0, GammaJumps{shape, rate, mu, sigma, 0.0, 0.0});
  const auto& g = std::get<GammaJumps>(probe.measure());
  const double m1_full =
      shape * (int_exp(g.lambda_pos, 1.0) - int_exp(g.lambda_neg, 1.0));
  // gamma chosen so the effective drift equals mu * E A_1.
  const double gamma = m1_full + mu * shape / rate;
  return LevyModel(gamma, 0.0, probe.measure());
}

LevyModel LevyModel::subordinated_bm(const SubordinatorSpec& sub, double sub_drift,
                                     double sigma) {
  if (!(sigma > 0.0)) throw DomainError("subordinated_bm requires sigma > 0");
  if (!(sub_drift >= 0.0)) throw DomainError("subordinator drift must be >= 0");
  const double gauss = sigma * sigma * sub_drift;
  if (sub.kind == SubordinatorSpec::Kind::Stable) {
    if (!(sub.rho > 0.0) || !(sub.rho < 1.0))
      throw DomainError("stable subordinator index must lie in (0,1)");
    if (!(sub.c > 0.0)) throw DomainError("stable subordinator scale must be > 0");
    const double alpha = 2.0 * sub.rho;
    const double coef = sub.c * std::tgamma(sub.rho + 0.5) *
                        std::pow(2.0 * sigma * sigma, sub.rho) / std::sqrt(M_PI);
    return LevyModel(0.0, gauss, TwoSidedPolynomial{coef, alpha, coef, alpha});
  }
  return LevyModel(0.0, gauss, GammaJumps{sub.shape, sub.rate, 0.0, sigma, 0.0, 0.0});
}

bool LevyModel::has_jumps() const {
  if (auto* p = std::get_if<TwoSidedPolynomial>(&measure_))
    return p->c_pos + p->c_neg > 0.0;
  return true;
}

bool LevyModel::measure_symmetric() const {
  if (auto* p = std::get_if<TwoSidedPolynomial>(&measure_)) {
    if (p->c_pos == 0.0 && p->c_neg == 0.0) return true;
    return p->c_pos == p->c_neg && p->alpha_pos == p->alpha_neg;
  }
  if (std::holds_alternative<SymmetricLogPolynomial>(measure_)) return true;
  if (auto* g = std::get_if<GammaJumps>(&measure_)) return g->mu == 0.0;
  const auto& t = std::get<TabulatedDensity>(measure_);
  for (std::size_t i = 0; i < t.abs_x.size(); ++i) {
    const double hi = std::max(std::fabs(t.dens_pos[i]), std::fabs(t.dens_neg[i]));
    if (std::fabs(t.dens_pos[i] - t.dens_neg[i]) > 1e-12 * hi) return false;
  }
  return true;
}

bool LevyModel::symmetric() const {
  return std::fabs(gamma_) <= 1e-12 && measure_symmetric();
}

bool LevyModel::bounded_variation() const {
  if (auto* p = std::get_if<TwoSidedPolynomial>(&measure_)) {
    if (p->c_pos > 0.0 && p->alpha_pos >= 1.0) return false;
    if (p->c_neg > 0.0 && p->alpha_neg >= 1.0) return false;
    return true;
  }
  if (auto* l = std::get_if<SymmetricLogPolynomial>(&measure_)) {
    return l->alpha < 1.0 || (l->alpha == 1.0 && l->gamma_exp > 1.0);
  }
  return true;  // GammaJumps and TabulatedDensity always integrate |x|
}

double LevyModel::effective_drift() const {
  if (!bounded_variation())
    throw DomainError("effective drift requires bounded variation");
  double m1 = 0.0;
  if (auto* p = std::get_if<TwoSidedPolynomial>(&measure_)) {
    m1 = poly_m1_side(p->c_pos, p->alpha_pos, 1.0) -
         poly_m1_side(p->c_neg, p->alpha_neg, 1.0);
  } else if (std::holds_alternative<SymmetricLogPolynomial>(measure_)) {
    m1 = 0.0;
  } else if (auto* g = std::get_if<GammaJumps>(&measure_)) {
    m1 = g->shape * (int_exp(g->lambda_pos, 1.0) - int_exp(g->lambda_neg, 1.0));
  } else {
    const auto& t = std::get<TabulatedDensity>(measure_);
    m1 = tab_power_integral({t.abs_x, t.dens_pos}, 0.0, 1.0, 1) -
         tab_power_integral({t.abs_x, t.dens_neg}, 0.0, 1.0, 1);
  }
  return gamma_ - m1;
}

// ---------- densities ----------

double log_measure_density(const LevyModel& m, double y, int side) {
  const double x = std::exp(y);
  if (!(x <= 1.0)) return -kInf;
  if (auto* p = std::get_if<TwoSidedPolynomial>(&m.measure())) {
    const double c = side > 0 ? p->c_pos : p->c_neg;
    const double a = side > 0 ? p->alpha_pos : p->alpha_neg;
    if (c == 0.0) return -kInf;
    return std::log(c) - (1.0 + a) * y;
  }
  if (auto* l = std::get_if<SymmetricLogPolynomial>(&m.measure())) {
    if (x > l->cutoff) {
      return l->bump_density > 0.0 ? std::log(l->bump_density) : -kInf;
    }
    const double v = -y;
    const double lead = l->alpha * v - l->gamma_exp;
    if (lead <= 0.0) return -kInf;
    return std::log(0.5 * l->scale) - (1.0 + l->alpha) * y -
           (l->gamma_exp + 1.0) * std::log(v) + std::log(lead);
  }
  if (auto* g = std::get_if<GammaJumps>(&m.measure())) {
    const double lam = side > 0 ? g->lambda_pos : g->lambda_neg;
    return std::log(g->shape) - y - lam * x;
  }
  const auto& t = std::get<TabulatedDensity>(m.measure());
  if (x < t.abs_x.front() || x > t.abs_x.back()) return -kInf;
  const auto& d = side > 0 ? t.dens_pos : t.dens_neg;
  auto it = std::upper_bound(t.abs_x.begin(), t.abs_x.end(), x);
  std::size_t i = (it == t.abs_x.begin()) ? 0 : (it - t.abs_x.begin() - 1);
  if (i + 1 >= t.abs_x.size()) i = t.abs_x.size() - 2;
  const double ly0 = std::log(t.abs_x[i]), ly1 = std::log(t.abs_x[i + 1]);
  const double f = (y - ly0) / (ly1 - ly0);
  return std::log(d[i]) + f * std::log(d[i + 1] / d[i]);
}

double measure_density(const LevyModel& m, double x) {
  if (x == 0.0) throw DomainError("density undefined at 0");
  const double ld = log_measure_density(m, std::log(std::fabs(x)), x > 0 ? 1 : -1);
  return std::isfinite(ld) ? std::exp(ld) : 0.0;
}

// ---------- integral operations ----------

double tail_mass(const LevyModel& m, double eps) {
  check_eps(eps);
  if (eps == 1.0) return 0.0;
  if (auto* p = std::get_if<TwoSidedPolynomial>(&m.measure())) {
    return poly_tail_side(p->c_pos, p->alpha_pos, eps) +
           poly_tail_side(p->c_neg, p->alpha_neg, eps);
  }
  if (auto* l = std::get_if<SymmetricLogPolynomial>(&m.measure())) {
    return logpoly_tail(*l, eps);
  }
  if (auto* g = std::get_if<GammaJumps>(&m.measure())) {
    auto one = [&](double lam) {
      return g->shape *
             integrate([&](double y) { return std::exp(-lam * std::exp(y)); },
                       std::log(eps), 0.0, kQuadTol, 1e-320);
    };
    return one(g->lambda_pos) + one(g->lambda_neg);
  }
  const auto& t = std::get<TabulatedDensity>(m.measure());
  return tab_power_integral({t.abs_x, t.dens_pos}, eps, 1.0, 0) +
         tab_power_integral({t.abs_x, t.dens_neg}, eps, 1.0, 0);
}

double truncated_moment(const LevyModel& m, double eps, int k) {
  check_eps(eps);
  if (k != 1 && k != 2) throw DomainError("moment order k must be 1 or 2");
  if (k == 1 && m.measure_symmetric()) return 0.0;
  if (auto* p = std::get_if<TwoSidedPolynomial>(&m.measure())) {
    if (k == 2) {
      return poly_m2_side(p->c_pos, p->alpha_pos, eps) +
             poly_m2_side(p->c_neg, p->alpha_neg, eps);
    }
    const double pos = poly_m1_side(p->c_pos, p->alpha_pos, eps);
    const double neg = poly_m1_side(p->c_neg, p->alpha_neg, eps);
    if (std::isinf(pos) || std::isinf(neg))
      throw DomainError("first truncated moment diverges for this measure");
    return pos - neg;
  }
  if (auto* l = std::get_if<SymmetricLogPolynomial>(&m.measure())) {
    return logpoly_pure(*l, eps, 0.0, TiltKind::Second, kQuadTol) +
           logpoly_bump(*l, eps, 0.0, TiltKind::Second, kQuadTol);
  }
  if (auto* g = std::get_if<GammaJumps>(&m.measure())) {
    if (k == 2) {
      return g->shape *
             (int_x_exp(g->lambda_pos, eps) + int_x_exp(g->lambda_neg, eps));
    }
    return g->shape * (int_exp(g->lambda_pos, eps) - int_exp(g->lambda_neg, eps));
  }
  const auto& t = std::get<TabulatedDensity>(m.measure());
  const double pos = tab_power_integral({t.abs_x, t.dens_pos}, 0.0, eps, k);
  const double neg = tab_power_integral({t.abs_x, t.dens_neg}, 0.0, eps, k);
  return k == 2 ? pos + neg : pos - neg;
}

double tilted_second_moment(const LevyModel& m, double eps, double u) {
  check_eps(eps);
  check_tilt(eps, u);
  if (u == 0.0) return truncated_moment(m, eps, 2);
  if (auto* p = std::get_if<TwoSidedPolynomial>(&m.measure())) {
    return poly_tilt2_side(p->c_pos, p->alpha_pos, eps, -u, kQuadTol) +
           poly_tilt2_side(p->c_neg, p->alpha_neg, eps, u, kQuadTol);
  }
  if (auto* l = std::get_if<SymmetricLogPolynomial>(&m.measure())) {
    return logpoly_pure(*l, eps, u, TiltKind::Second, kQuadTol) +
           logpoly_bump(*l, eps, u, TiltKind::Second, kQuadTol);
  }
  if (auto* g = std::get_if<GammaJumps>(&m.measure())) {
    return g->shape * (int_x_exp(g->lambda_pos + u, eps) +
                       int_x_exp(g->lambda_neg - u, eps));
  }
  const auto& t = std::get<TabulatedDensity>(m.measure());
  return tab_weighted_integral(
             {t.abs_x, t.dens_pos}, 0.0, eps,
             [u](double x) { return x * x * std::exp(-u * x); }, kQuadTol) +
         tab_weighted_integral(
             {t.abs_x, t.dens_neg}, 0.0, eps,
             [u](double x) { return x * x * std::exp(u * x); }, kQuadTol);
}

double exp_compensated_integral(const LevyModel& m, double eps, double u) {
  check_eps(eps);
  check_tilt(eps, u);
  if (u == 0.0) return 0.0;
  double value = 0.0;
  if (auto* p = std::get_if<TwoSidedPolynomial>(&m.measure())) {
    value = poly_expcomp_side(p->c_pos, p->alpha_pos, eps, u, kQuadTol) +
            poly_expcomp_side(p->c_neg, p->alpha_neg, eps, -u, kQuadTol);
  } else if (auto* l = std::get_if<SymmetricLogPolynomial>(&m.measure())) {
    value = logpoly_pure(*l, eps, u, TiltKind::ExpComp, kQuadTol) +
            logpoly_bump(*l, eps, u, TiltKind::ExpComp, kQuadTol);
  } else if (auto* g = std::get_if<GammaJumps>(&m.measure())) {
    auto side = [&](double lam, double w) {
      auto h = [&](double y) {
        const double z = w * std::exp(y);
        const double damp = std::exp(-lam * std::exp(y));
        if (std::fabs(z) < 1e-3) {
          return g->shape * 0.5 * w * w * std::exp(2.0 * y) * damp *
                 (1.0 + z / 3.0 + z * z / 12.0);
        }
        return g->shape * exp_comp(z) * damp;
      };
      return integrate_from_zero(h, eps, 1.0, kQuadTol);
    };
    value = side(g->lambda_pos, u) + side(g->lambda_neg, -u);
  } else {
    const auto& t = std::get<TabulatedDensity>(m.measure());
    value = tab_weighted_integral({t.abs_x, t.dens_pos}, 0.0, eps,
                                  [u](double x) { return exp_comp(u * x); }, kQuadTol) +
            tab_weighted_integral({t.abs_x, t.dens_neg}, 0.0, eps,
                                  [u](double x) { return exp_comp(-u * x); }, kQuadTol);
  }
  return std::max(value, 0.0);
}

double tilted_first_integral(const LevyModel& m, double eps, double u) {
  check_eps(eps);
  check_tilt(eps, u);
  if (u == 0.0) return 0.0;
  if (auto* p = std::get_if<TwoSidedPolynomial>(&m.measure())) {
    return poly_tilt1_side(p->c_pos, p->alpha_pos, eps, u, kQuadTol) -
           poly_tilt1_side(p->c_neg, p->alpha_neg, eps, -u, kQuadTol);
  }
  if (auto* l = std::get_if<SymmetricLogPolynomial>(&m.measure())) {
    return logpoly_pure(*l, eps, u, TiltKind::First, kQuadTol) +
           logpoly_bump(*l, eps, u, TiltKind::First, kQuadTol);
  }
  if (auto* g = std::get_if<GammaJumps>(&m.measure())) {
    const double pos = int_exp(g->lambda_pos - u, eps) - int_exp(g->lambda_pos, eps);
    const double neg = int_exp(g->lambda_neg + u, eps) - int_exp(g->lambda_neg, eps);
    return g->shape * (pos - neg);
  }
  const auto& t = std::get<TabulatedDensity>(m.measure());
  return tab_weighted_integral(
             {t.abs_x, t.dens_pos}, 0.0, eps,
             [u](double x) { return x * std::expm1(u * x); }, kQuadTol) -
         tab_weighted_integral(
             {t.abs_x, t.dens_neg}, 0.0, eps,
             [u](double x) { return x * std::expm1(-u * x); }, kQuadTol);
}

double annulus_first_moment(const LevyModel& m, double eps) {
  check_eps(eps);
  if (m.measure_symmetric()) return 0.0;
  if (eps == 1.0) return 0.0;
  if (auto* p = std::get_if<TwoSidedPolynomial>(&m.measure())) {
    return poly_ann1_side(p->c_pos, p->alpha_pos, eps) -
           poly_ann1_side(p->c_neg, p->alpha_neg, eps);
  }
  if (auto* g = std::get_if<GammaJumps>(&m.measure())) {
    auto one = [&](double lam) {
      return g->shape * (int_exp(lam, 1.0) - int_exp(lam, eps));
    };
    return one(g->lambda_pos) - one(g->lambda_neg);
  }
  const auto& t = std::get<TabulatedDensity>(m.measure());
  return tab_power_integral({t.abs_x, t.dens_pos}, eps, 1.0, 1) -
         tab_power_integral({t.abs_x, t.dens_neg}, eps, 1.0, 1);
}

double annulus_abs_first_moment(const LevyModel& m, double eps) {
  check_eps(eps);
  if (eps == 1.0) return 0.0;
  if (auto* p = std::get_if<TwoSidedPolynomial>(&m.measure())) {
    return poly_ann1_side(p->c_pos, p->alpha_pos, eps) +
           poly_ann1_side(p->c_neg, p->alpha_neg, eps);
  }
  if (auto* l = std::get_if<SymmetricLogPolynomial>(&m.measure())) {
    return logpoly_ann_abs(*l, eps, kQuadTol);
  }
  if (auto* g = std::get_if<GammaJumps>(&m.measure())) {
    auto one = [&](double lam) {
      return g->shape * (int_exp(lam, 1.0) - int_exp(lam, eps));
    };
    return one(g->lambda_pos) + one(g->lambda_neg);
  }
  const auto& t = std::get<TabulatedDensity>(m.measure());
  return tab_power_integral({t.abs_x, t.dens_pos}, eps, 1.0, 1) +
         tab_power_integral({t.abs_x, t.dens_neg}, eps, 1.0, 1);
}

double log_compensator_gap(const LevyModel& m, double log_eps) {
  if (log_eps > std::log(1e-280)) {
    const double gap = std::fabs(annulus_first_moment(m, std::exp(log_eps)) - m.gamma());
    return gap > 0.0 ? std::log(gap) : -kInf;
  }
  if (m.measure_symmetric()) {
    const double g = std::fabs(m.gamma());
    return g > 0.0 ? std::log(g) : -kInf;
  }
  if (m.bounded_variation()) {
    const double c = std::fabs(m.effective_drift());
    return c > 0.0 ? std::log(c) : -kInf;
  }
  // Asymmetric unbounded variation: only the polynomial family. The annulus
  // first moment is dominated by the steepest active exponent.
  const auto& p = std::get<TwoSidedPolynomial>(m.measure());
  struct Term {
    double signed_c, alpha;
  };
  Term terms[2] = {{p.c_pos, p.alpha_pos}, {-p.c_neg, p.alpha_neg}};
  double a_star = -kInf;
  for (const auto& t : terms)
    if (t.signed_c != 0.0 && t.alpha >= 1.0) a_star = std::max(a_star, t.alpha);
  double coef = 0.0;
  for (const auto& t : terms)
    if (t.signed_c != 0.0 && t.alpha == a_star) coef += t.signed_c;
  if (coef == 0.0) return -kInf;
  if (a_star > 1.0) {
    return std::log(std::fabs(coef) / (a_star - 1.0)) + (1.0 - a_star) * log_eps;
  }
  return std::log(std::fabs(coef)) + std::log(-log_eps);
}

// ---------- quadrature-only routes ----------

namespace {

double numeric_leading_alpha(const LevyModel& m) {
  if (auto* p = std::get_if<TwoSidedPolynomial>(&m.measure())) {
    double a = 0.0;
    if (p->c_pos > 0.0) a = std::max(a, p->alpha_pos);
    if (p->c_neg > 0.0) a = std::max(a, p->alpha_neg);
    return a;
  }
  if (auto* l = std::get_if<SymmetricLogPolynomial>(&m.measure())) return l->alpha;
  return 0.0;
}

}  // namespace

double tail_mass_numeric(const LevyModel& m, double eps) {
  check_eps(eps);
  if (eps == 1.0 || !m.has_jumps()) return 0.0;
  auto h = [&](double y) {
    double s = 0.0;
    const double lp = log_measure_density(m, y, 1);
    const double ln = log_measure_density(m, y, -1);
    if (std::isfinite(lp)) s += std::exp(lp + y);
    if (std::isfinite(ln)) s += std::exp(ln + y);
    return s;
  };
  return integrate(h, std::log(eps), 0.0, 1e-11, 1e-320);
}

double truncated_moment_numeric(const LevyModel& m, double eps, int k) {
  check_eps(eps);
  if (k != 1 && k != 2) throw DomainError("moment order k must be 1 or 2");
  if (!m.has_jumps()) return 0.0;
  if (k == 1 && m.measure_symmetric()) return 0.0;
  if (auto* t = std::get_if<TabulatedDensity>(&m.measure())) {
    const double lo = t->abs_x.front();
    if (eps <= lo) return 0.0;
    auto h = [&](double y) {
      const double lp = log_measure_density(m, y, 1);
      const double ln = log_measure_density(m, y, -1);
      double s = 0.0;
      if (std::isfinite(lp)) s += std::exp(lp + (k + 1.0) * y);
      const double sgn = (k == 1) ? -1.0 : 1.0;
      if (std::isfinite(ln)) s += sgn * std::exp(ln + (k + 1.0) * y);
      return s;
    };
    return integrate(h, std::log(lo), std::log(eps), 1e-11, 1e-320);
  }
  const double alpha = numeric_leading_alpha(m);
  const double sing = k - 1.0 - alpha;
  if (!(sing > -1.0))
    throw DomainError("truncated moment diverges (numeric route)");
  auto h = [&](double y) {
    const double lp = log_measure_density(m, y, 1);
    const double ln = log_measure_density(m, y, -1);
    double s = 0.0;
    if (std::isfinite(lp)) s += std::exp(lp + (k + 1.0) * y);
    const double sgn = (k == 1) ? -1.0 : 1.0;
    if (std::isfinite(ln)) s += sgn * std::exp(ln + (k + 1.0) * y);
    return s;
  };
  return integrate_from_zero(h, eps, sing, 1e-11);
}

// ---------- jump sampling ----------

JumpSampler::JumpSampler(const LevyModel& m, double delta) : delta_(delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  intensity_ = tail_mass(m, delta);
  if (intensity_ <= 0.0) return;

  const auto* poly = std::get_if<TwoSidedPolynomial>(&m.measure());
  for (int s = 0; s < 2; ++s) {
    Side& side = sides_[s];
    side.sign = s == 0 ? 1 : -1;
    if (poly) {
      const double c = s == 0 ? poly->c_pos : poly->c_neg;
      const double a = s == 0 ? poly->alpha_pos : poly->alpha_neg;
      side.weight = poly_tail_side(c, a, delta);
      side.power_law = true;
      side.alpha = a;
      continue;
    }
    // numeric cumulative tail on a log grid
    const int n = 600;
    side.log_x.resize(n + 1);
    side.cum.assign(n + 1, 0.0);
    const double y0 = std::log(delta);
    for (int i = 0; i <= n; ++i) side.log_x[i] = y0 - y0 * i / n;  // up to 0
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      auto h = [&](double y) {
        const double ld = log_measure_density(m, y, side.sign);
        return std::isfinite(ld) ? std::exp(ld + y) : 0.0;
      };
      acc += integrate(h, side.log_x[i], side.log_x[i + 1], 1e-10, 1e-320);
      side.cum[i + 1] = acc;
    }
    side.weight = acc;
  }
}

double JumpSampler::sample_size(RandomStream& rng) const {
  const double total = sides_[0].weight + sides_[1].weight;
  double u = rng.next_uniform() * total;
  const Side& side = u < sides_[0].weight ? sides_[0] : sides_[1];
  if (!(u < sides_[0].weight)) u -= sides_[0].weight;
  const double frac = std::min(u / side.weight, 1.0 - 1e-16);

  double x;
  if (side.power_law) {
    const double a = side.alpha;
    if (a == 0.0) {
      x = std::exp(std::log(delta_) * (1.0 - frac));
    } else {
      const double da = std::pow(delta_, -a);
      x = std::pow(da - frac * (da - 1.0), -1.0 / a);
    }
  } else {
    const double target = frac * side.weight;
    auto it = std::upper_bound(side.cum.begin(), side.cum.end(), target);
    std::size_t i = (it == side.cum.begin()) ? 0 : (it - side.cum.begin() - 1);
    if (i + 1 >= side.cum.size()) i = side.cum.size() - 2;
    const double seg = side.cum[i + 1] - side.cum[i];
    const double f = seg > 0.0 ? (target - side.cum[i]) / seg : 0.0;
    x = std::exp(side.log_x[i] + f * (side.log_x[i + 1] - side.log_x[i]));
  }
  return side.sign * x;
}

std::vector<Jump> sample_jumps(const LevyModel& m, double delta, double horizon,
                               RandomStream& rng) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
  JumpSampler sampler(m, delta);
  const double mean = sampler.intensity() * horizon;
  if (mean > 1e6) throw DomainError("jump intensity too large; raise delta");

  std::vector<Jump> jumps;
  if (mean <= 0.0) return jumps;
  // Poisson count: sum of unit exponentials until the mean is exceeded.
  long long count = -1;
  double acc = 0.0;
  while (acc < mean) {
    acc += -std::log(rng.next_uniform());
    ++count;
  }
  jumps.reserve(static_cast<std::size_t>(count));
  for (long long j = 0; j < count; ++j) {
    const double time = rng.next_uniform() * horizon;
    const double size = sampler.sample_size(rng);
    jumps.push_back({time, size});
  }
  std::sort(jumps.begin(), jumps.end(),
            [](const Jump& a, const Jump& b) { return a.time < b.time; });
  return jumps;
}

}  // namespace levysd
