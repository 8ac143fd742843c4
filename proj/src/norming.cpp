#include "levysd/norming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levysd/errors.hpp"

namespace levysd {

double invert_rate(const RateTable& table, double y) {
  const auto& f = table.f();
  const auto& eps = table.eps();
  if (!(y >= f.front()))
    throw OutOfTableRangeError("y below the table's smallest F", f.front());
  if (!(y <= f.back()))
    throw OutOfTableRangeError("y above the table's largest F", f.back());
  auto it = std::lower_bound(f.begin(), f.end(), y);
  std::size_t i = it - f.begin();
  if (i == 0) i = 1;
  if (i >= f.size()) i = f.size() - 1;
  const double x0 = std::log(eps[i - 1]), x1 = std::log(eps[i]);
  const double y0 = std::log(f[i - 1]), y1 = std::log(f[i]);
  const double w = (std::log(y) - y0) / (y1 - y0);
  return std::exp(x0 + w * (x1 - x0));
}

double closed_form_norming(const ClosedFormNorming& form, double t) {
  if (!(t > 0.0) || !(t < 1.0)) throw DomainError("t must lie in (0, 1)");
  const double abs_log_t = -std::log(t);
  const double loglog = std::log(abs_log_t);
  if (!(loglog > 0.0)) throw DomainError("t must satisfy |log t| > 1");

  using Family = ClosedFormNorming::Family;
  switch (form.family) {
    case Family::Brownian:
      return form.sigma * M_PI * std::sqrt(t / (8.0 * loglog));
    case Family::Stable:
      if (!(form.alpha > 0.0)) throw DomainError("stable norming needs alpha > 0");
      return std::pow(form.c_alpha * t / loglog, 1.0 / form.alpha);
    case Family::LogPolynomial:
      if (!(form.alpha > 0.0) || form.alpha > 2.0)
        throw DomainError("log-polynomial norming needs alpha in (0, 2]");
      if (form.alpha < 2.0) {
        return std::pow(t * std::pow(abs_log_t, -form.gamma_exp) / loglog,
                        1.0 / form.alpha);
      }
      return std::sqrt(t * std::pow(abs_log_t, 1.0 - form.gamma_exp) / loglog);
    case Family::VarianceGamma:
      if (!(form.lambda > 0.0)) throw DomainError("variance-gamma norming needs lambda > 0");
      return std::exp(-form.lambda * loglog / t);
    case Family::Drift:
      if (form.drift_c == 0.0) throw DomainError("drift norming needs c != 0");
      return std::fabs(form.drift_c) * t;
  }
  throw UnknownFamilyError("unknown closed-form norming family");
}

NormingFunction NormingFunction::from_table(RateTable table, double lambda,
                                            double t_max) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
  if (!(t_max > 0.0) || t_max > kDefaultTMax)
    throw DomainError("t_max must lie in (0, e^-e]");
  NormingFunction nf;
  nf.table_backed_ = true;
  nf.table_ = std::move(table);
  nf.lambda_ = lambda;
  nf.t_max_ = t_max;
  return nf;
}

NormingFunction NormingFunction::closed_form(const ClosedFormNorming& form,
                                             double t_max) {
  if (!(t_max > 0.0) || t_max > kDefaultTMax)
    throw DomainError("t_max must lie in (0, e^-e]");
  NormingFunction nf;
  nf.table_backed_ = false;
  nf.form_ = form;
  nf.t_max_ = t_max;
  nf.lambda_ = form.family == ClosedFormNorming::Family::VarianceGamma ? form.lambda : 1.0;
  return nf;
}

double NormingFunction::operator()(double t) const {
  if (!(t > 0.0) || t > t_max_)
    throw DomainError("t outside the norming domain (0, t_max]");
  if (!table_backed_) return closed_form_norming(form_, t);
  const double y = std::log(-std::log(t)) / (lambda_ * t);
  return invert_rate(table_, y);
}

BRegularityReport check_b_regularity(const NormingFunction& nf,
                                     const std::vector<double>& t_grid,
                                     double floor) {
  if (t_grid.empty()) throw DomainError("t grid must be nonempty");
  BRegularityReport rep;
  rep.floor = floor;
  double c_hat = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    if (!(t > 0.0) || t > nf.t_max()) throw DomainError("t outside the norming domain");
    const double b1 = nf(t);
    const double b2 = nf(0.5 * t);
    if (!(b1 > 0.0)) throw DomainError("norming must be positive");
    c_hat = std::min(c_hat, b2 / b1);
  }
  rep.c_hat = c_hat;
  rep.passes = c_hat >= floor;
  return rep;
}

StableConstantBounds stable_constant_bounds(double alpha, double C) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw DomainError("alpha must lie strictly inside (0, 2)");
  if (!(C > 0.0)) throw DomainError("C must be > 0");
  StableConstantBounds b;
  b.low = 2.0 * C / std::pow(2.0, alpha) * (1.0 / alpha + 1.0 / (12.0 * (2.0 - alpha)));
  b.high = std::pow(3.0, alpha) * 2.0 * C * (1.0 / alpha + 10.0 / (2.0 - alpha));
  b.small_alpha_equivalent = 2.0 * C / alpha;
  return b;
}

}  // namespace levysd
