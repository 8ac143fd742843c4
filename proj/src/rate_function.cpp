#include "levysd/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "levysd/errors.hpp"
#include "levysd/parallel.hpp"

namespace levysd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The jump measure lives on [-1,1]; integrals saturate beyond eps = 1. This
// lets the rate layer evaluate F at arguments up to 2 (needed for the lower
// bound's F(2 eps)).
double clamped(double eps) { return std::min(eps, 1.0); }

void check_eps_pos(double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be > 0");
  if (!(eps <= 2.0)) throw DomainError("eps must be <= 2");
}

double tail_ext(const LevyModel& m, double eps) {
  return eps >= 1.0 ? 0.0 : tail_mass(m, eps);
}

double annulus_ext(const LevyModel& m, double eps) {
  return eps >= 1.0 ? 0.0 : annulus_first_moment(m, eps);
}

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double truncated_variance(const LevyModel& m, double eps) {
  check_eps_pos(eps);
  const double e = clamped(eps);
  const double u = eps * eps * tail_ext(m, eps) + m.sigma2() + truncated_moment(m, e, 2);
  if (u <= 0.0) throw DegenerateModelError("model has no Gaussian part and no jumps");
  return u;
}

double lambda_eps(const LevyModel& m, double eps, double u) {
  check_eps_pos(eps);
  const double e = clamped(eps);
  const double lin = m.gamma() - annulus_ext(m, eps);
  return 0.5 * m.sigma2() * u * u + lin * u + exp_compensated_integral(m, e, u);
}

double lambda_eps_prime(const LevyModel& m, double eps, double u) {
  check_eps_pos(eps);
  const double e = clamped(eps);
  const double lin = m.gamma() - annulus_ext(m, eps);
  return m.sigma2() * u + lin + tilted_first_integral(m, e, u);
}

double lambda_eps_second(const LevyModel& m, double eps, double u) {
  check_eps_pos(eps);
  return m.sigma2() + tilted_second_moment(m, clamped(eps), -u);
}

std::string EsscherSolution::to_kv() const {
  std::ostringstream os;
  os << "u_eps=" << format_g(u_eps) << "\n";
  os << "lambda_at_root=" << format_g(lambda_at_root) << "\n";
  os << "converged=" << (converged ? 1 : 0) << "\n";
  os << "regime=" << (regime == Regime::Root ? "root" : "drift_dominated") << "\n";
  if (regime == Regime::DriftDominated)
    os << "effective_drift=" << format_g(effective_drift) << "\n";
  return os.str();
}

EsscherSolution solve_esscher_drift(const LevyModel& m, double eps, double tol_root) {
  check_eps_pos(eps);
  if (!(tol_root > 0.0)) throw DomainError("tol_root must be > 0");

  EsscherSolution sol;
  if (m.symmetric()) {
    sol.u_eps = 0.0;
    sol.lambda_at_root = 0.0;
    sol.converged = true;
    return sol;
  }

  auto fprime = [&](double u) { return lambda_eps_prime(m, eps, u); };

  const double u_cap = 0.999 * kMaxTiltExponent / clamped(eps);
  double lo = -std::min(1.0, u_cap);
  double hi = std::min(1.0, u_cap);
  double flo = fprime(lo);
  double fhi = fprime(hi);

  int doublings = 0;
  while (flo > 0.0 && fhi > 0.0 && doublings < 200) {
    if (lo <= -u_cap) break;
    lo = std::max(2.0 * lo, -u_cap);
    flo = fprime(lo);
    ++doublings;
  }
  while (flo < 0.0 && fhi < 0.0 && doublings < 200) {
    if (hi >= u_cap) break;
    hi = std::min(2.0 * hi, u_cap);
    fhi = fprime(hi);
    ++doublings;
  }

  if (!(flo <= 0.0 && fhi >= 0.0)) {
    // No sign change: Lambda' is single-signed. That is exactly the bounded
    // variation, non-vanishing effective drift situation.
    if (m.bounded_variation()) {
      const double c = m.effective_drift();
      if (std::fabs(c) > 1e-12) {
        sol.regime = EsscherSolution::Regime::DriftDominated;
        sol.effective_drift = c;
        sol.u_eps = 0.0;
        sol.lambda_at_root = 0.0;
        sol.converged = true;
        return sol;
      }
    }
    throw NoConvergenceError(
        "Lambda' has no sign change and the model is not drift dominated");
  }

  // Bisection; convexity makes the bracket slide monotonically.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = fprime(mid);
    if (fm <= 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
    if (hi - lo <= 1e-14 * (1.0 + std::fabs(lo) + std::fabs(hi))) break;
  }
  double u = 0.5 * (lo + hi);

  // One Newton polish.
  const double d2 = lambda_eps_second(m, eps, u);
  if (d2 > 0.0) {
    const double step = fprime(u) / d2;
    const double u1 = u - step;
    if (u1 > lo - (hi - lo) && u1 < hi + (hi - lo) &&
        std::fabs(fprime(u1)) < std::fabs(fprime(u))) {
      u = u1;
    }
  }

  sol.u_eps = u;
  sol.lambda_at_root = lambda_eps(m, eps, u);
  sol.converged = std::fabs(fprime(u)) <= tol_root * (1.0 + std::fabs(u));
  return sol;
}

double rate_symmetric(const LevyModel& m, double eps) {
  if (!m.symmetric()) throw NotSymmetricError("model is not symmetric");
  return truncated_variance(m, eps) / (eps * eps);
}

double rate_general(const LevyModel& m, double eps) {
  check_eps_pos(eps);
  const EsscherSolution sol = solve_esscher_drift(m, eps);
  if (sol.regime == EsscherSolution::Regime::DriftDominated) {
    throw DriftDominatedError("no tilt root; use the |c| t norming",
                              sol.effective_drift);
  }
  const double e = clamped(eps);
  const double u_eps2 = eps * eps * tail_ext(m, eps) + m.sigma2() +
                        tilted_second_moment(m, e, sol.u_eps);
  return u_eps2 / (eps * eps) - sol.lambda_at_root;
}

double rate_auto(const LevyModel& m, double eps) {
  return m.symmetric() ? rate_symmetric(m, eps) : rate_general(m, eps);
}

SdBounds sd_bounds(const LevyModel& m, double t, double eps) {
  if (!(t > 0.0)) throw DomainError("t must be > 0");
  if (!(eps > 0.0) || eps > 1.0) throw DomainError("eps must lie in (0, 1]");

  const auto u_abs = [&](double e) {
    const EsscherSolution s = solve_esscher_drift(m, e);
    if (s.regime == EsscherSolution::Regime::DriftDominated) {
      throw DriftDominatedError("no tilt root; use the |c| t norming",
                                s.effective_drift);
    }
    return std::fabs(s.u_eps);
  };

  const double f_lo = rate_auto(m, 2.0 * eps);
  const double f_hi = rate_auto(m, eps / 3.0);
  const double lower = t * f_lo / 12.0 - eps * u_abs(2.0 * eps) - 1.0;
  const double upper = 10.0 * t * f_hi + eps * u_abs(eps / 3.0) + 3.0;
  return {lower, upper};
}

// ---------- RateTable ----------

RateTable RateTable::build(const LevyModel& m, double eps_min, double eps_max,
                           int n_points, unsigned threads) {
  if (!(eps_min > 0.0) || !(eps_max > eps_min) || eps_max > 1.0)
    throw DomainError("need 0 < eps_min < eps_max <= 1");
  if (n_points < 2) throw DomainError("need at least 2 grid points");

  RateTable t;
  t.kind_ = m.symmetric() ? Kind::Symmetric : Kind::General;
  t.eps_.resize(n_points);
  t.f_.resize(n_points);
  const double lmax = std::log(eps_max), lmin = std::log(eps_min);
  for (int i = 0; i < n_points; ++i) {
    t.eps_[i] = std::exp(lmax + (lmin - lmax) * i / (n_points - 1));
  }
  parallel_for(
      static_cast<std::size_t>(n_points),
      [&](std::size_t i) { t.f_[i] = rate_auto(m, t.eps_[i]); }, threads);

  // Keep the small-eps suffix on which F is positive and strictly increasing.
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < t.f_.size(); ++i) {
    if (!(t.f_[i] > 0.0) || !(t.f_[i + 1] > t.f_[i])) start = i + 1;
  }
  if (!(t.f_.back() > 0.0)) start = t.f_.size();
  if (t.f_.size() - start < 10)
    throw DomainError("rate table is not increasing on enough of the grid");
  if (start > 0) {
    t.eps_.erase(t.eps_.begin(), t.eps_.begin() + start);
    t.f_.erase(t.f_.begin(), t.f_.begin() + start);
  }
  return t;
}

RateTable RateTable::from_columns(std::vector<double> eps_desc,
                                  std::vector<double> f_values, Kind kind,
                                  std::string name) {
  if (eps_desc.size() != f_values.size() || eps_desc.size() < 2)
    throw DomainError("need two aligned columns with >= 2 rows");
  for (std::size_t i = 0; i + 1 < eps_desc.size(); ++i) {
    if (!(eps_desc[i] > eps_desc[i + 1]))
      throw DomainError("eps column must be strictly decreasing");
    if (!(f_values[i + 1] > f_values[i]))
      throw DomainError("F column must be strictly increasing");
  }
  for (double v : f_values)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("F values must be positive");
  RateTable t;
  t.eps_ = std::move(eps_desc);
  t.f_ = std::move(f_values);
  t.kind_ = kind;
  t.name_ = std::move(name);
  return t;
}

double RateTable::f_at(double e) const {
  if (!(e > 0.0)) throw DomainError("eps must be > 0");
  if (e > eps_.front() || e < eps_.back())
    throw OutOfTableRangeError("eps outside the table grid",
                               e > eps_.front() ? eps_.front() : eps_.back());
  // eps_ is decreasing.
  auto it = std::lower_bound(eps_.begin(), eps_.end(), e, std::greater<double>());
  std::size_t i = it - eps_.begin();
  if (i == 0) i = 1;
  if (i >= eps_.size()) i = eps_.size() - 1;
  const double x0 = std::log(eps_[i - 1]), x1 = std::log(eps_[i]);
  const double y0 = std::log(f_[i - 1]), y1 = std::log(f_[i]);
  const double w = (std::log(e) - x0) / (x1 - x0);
  return std::exp(y0 + w * (y1 - y0));
}

double RateTable::log_inverse_extrapolated(double log_y) const {
  const double ly_min = std::log(f_.front());
  const double ly_max = std::log(f_.back());
  if (log_y <= ly_max && log_y >= ly_min) {
    auto it = std::lower_bound(f_.begin(), f_.end(), std::exp(log_y));
    std::size_t i = it - f_.begin();
    if (i == 0) i = 1;
    if (i >= f_.size()) i = f_.size() - 1;
    const double x0 = std::log(eps_[i - 1]), x1 = std::log(eps_[i]);
    const double y0 = std::log(f_[i - 1]), y1 = std::log(f_[i]);
    const double w = (log_y - y0) / (y1 - y0);
    return x0 + w * (x1 - x0);
  }
  // Extrapolate with the small-eps decade's slope.
  const double slope = estimate_rv_exponent(*this);
  if (!(slope < 0.0))
    throw OutOfTableRangeError("cannot extrapolate a flat rate table", f_.back());
  return std::log(eps_.back()) + (log_y - ly_max) / slope;
}

std::string RateTable::to_csv() const {
  std::ostringstream os;
  os << "eps,F\n";
  for (std::size_t i = 0; i < eps_.size(); ++i)
    os << format_g(eps_[i]) << "," << format_g(f_[i]) << "\n";
  return os.str();
}

RateTable RateTable::from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("eps,F", 0) != 0)
    throw DomainError("rate table csv must start with header eps,F");
  std::vector<double> eps, f;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("bad rate table row: " + line);
    eps.push_back(std::stod(line.substr(0, comma)));
    f.push_back(std::stod(line.substr(comma + 1)));
  }
  return from_columns(std::move(eps), std::move(f));
}

double estimate_rv_exponent(const RateTable& table) {
  const auto& eps = table.eps();
  const auto& f = table.f();
  if (eps.size() < 10 || !(eps.front() / eps.back() >= 1e3))
    throw InsufficientGridError("need >= 10 points spanning >= 3 decades");
  const double cutoff = eps.back() * 10.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] > cutoff) continue;
    const double x = std::log(eps[i]), y = std::log(f[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw InsufficientGridError("smallest decade has fewer than 2 points");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------- condition checkers ----------

EsscherNegligibleReport check_esscher_negligible(const LevyModel& m,
                                                 const std::vector<double>& eps_grid) {
  EsscherNegligibleReport rep;
  std::vector<double> grid = eps_grid;
  std::sort(grid.begin(), grid.end(), std::greater<double>());
  for (double e : grid) {
    const EsscherSolution sol = solve_esscher_drift(m, e);
    if (sol.regime == EsscherSolution::Regime::DriftDominated)
      throw DriftDominatedError("no tilt root on the grid", sol.effective_drift);
    const double f = m.symmetric() ? rate_symmetric(m, e) : rate_general(m, e);
    if (!(f > M_E)) throw DomainError("F(eps) must exceed e on the grid");
    const double ratio = e * std::fabs(sol.u_eps) / std::log(std::log(f));
    rep.rows.push_back({e, sol.u_eps, f, ratio});
  }

  bool all_zero = true, nonincreasing = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    if (rep.rows[i].ratio != 0.0) all_zero = false;
    if (i > 0 && rep.rows[i].ratio > rep.rows[i - 1].ratio * (1.0 + 1e-9))
      nonincreasing = false;
  }
  const double first = rep.rows.front().ratio;
  const double last = rep.rows.back().ratio;
  if (all_zero || (nonincreasing && last < 0.9 * first)) {
    rep.trend = EsscherNegligibleReport::Trend::DecreasingToZero;
  } else if (last > 1.1 * first && !nonincreasing) {
    rep.trend = EsscherNegligibleReport::Trend::Increasing;
  } else {
    rep.trend = EsscherNegligibleReport::Trend::Bounded;
  }
  return rep;
}

std::string EsscherNegligibleReport::to_text() const {
  std::ostringstream os;
  os << "eps,u_eps,F,ratio\n";
  for (const auto& r : rows)
    os << format_g(r.eps) << "," << format_g(r.u_eps) << "," << format_g(r.rate) << ","
       << format_g(r.ratio) << "\n";
  os << "trend=";
  switch (trend) {
    case Trend::DecreasingToZero:
      os << "decreasing_to_zero";
      break;
    case Trend::Bounded:
      os << "bounded";
      break;
    case Trend::Increasing:
      os << "increasing";
      break;
  }
  os << "\n";
  return os.str();
}

ConditionMReport check_condition_M(const LevyModel& m, const RateTable& table,
                                   const std::vector<double>& betas, int n_max) {
  if (n_max > 60) throw DomainError("n_max must be <= 60");
  for (double b : betas)
    if (!(b > 1.0) || b > 3.0) throw DomainError("beta must lie in (1, 3]");
  const int n_min = 2;
  if (n_max - n_min + 1 < 5)
    throw UnderflowRangeError("fewer than 5 usable n values");

  ConditionMReport rep;
  rep.passes = true;
  for (double beta : betas) {
    std::vector<double> logs;
    for (int n = n_min; n <= n_max; ++n) {
      const double log_n = std::log(static_cast<double>(n));
      const double log_a = -std::pow(static_cast<double>(n), beta) * log_n;
      // y = log|log a_n| / a_n  (lambda = 1)
      const double log_y = std::log(-log_a <= 1.0 ? 1.0 + 1e-12 : std::log(-log_a)) - log_a;
      const double log_b = table.log_inverse_extrapolated(log_y);
      const double log_gap = log_compensator_gap(m, log_b);
      const double np1 = static_cast<double>(n + 1);
      const double log_r = -std::pow(np1, beta) * std::log(np1) + log_gap - log_b;
      rep.rows.push_back({n, beta, log_r});
      logs.push_back(log_r);
    }
    // Decreasing without bound: identically -inf counts (zero gap), otherwise
    // the finite tail must fall monotonically by a wide margin.
    bool all_ninf = true;
    for (double v : logs)
      if (!(std::isinf(v) && v < 0)) all_ninf = false;
    bool ok = all_ninf;
    if (!ok) {
      bool tail_decreasing = true;
      const std::size_t half = logs.size() / 2;
      for (std::size_t i = half; i + 1 < logs.size(); ++i)
        if (!(logs[i + 1] < logs[i])) tail_decreasing = false;
      ok = tail_decreasing && (logs.back() < logs[half] - 5.0);
    }
    if (!ok) rep.passes = false;
  }
  return rep;
}

std::string ConditionMReport::to_text() const {
  std::ostringstream os;
  os << "n,beta,log_ratio\n";
  for (const auto& r : rows)
    os << r.n << "," << format_g(r.beta) << "," << format_g(r.log_ratio) << "\n";
  os << "verdict=" << (passes ? "pass" : "fail") << "\n";
  return os.str();
}

FLargerUReport check_flargeru(const LevyModel& m, const RateTable& table,
                              double c_const) {
  FLargerUReport rep;
  rep.c_const = c_const;
  rep.max_ratio = 0.0;
  for (std::size_t i = 0; i < table.eps().size(); ++i) {
    const double e = table.eps()[i];
    const double ratio =
        truncated_variance(m, e) / (e * e) / (table.f()[i] + 1.0);
    rep.rows.push_back({e, ratio});
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  rep.passes = rep.max_ratio <= c_const && std::isfinite(rep.max_ratio);
  return rep;
}

std::string FLargerUReport::to_text() const {
  std::ostringstream os;
  os << "eps,ratio\n";
  for (const auto& r : rows) os << format_g(r.eps) << "," << format_g(r.ratio) << "\n";
  os << "max_ratio=" << format_g(max_ratio) << "\n";
  os << "c_const=" << format_g(c_const) << "\n";
  os << "verdict=" << (passes ? "pass" : "fail") << "\n";
  return os.str();
}

}  // namespace levysd
