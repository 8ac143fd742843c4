#pragma once

#include <string>
#include <vector>

#include "levysd/levy_model.hpp"

namespace levysd {

// U(eps) = eps^2 tail(eps) + sigma^2 + int_{-eps}^{eps} x^2 Pi(dx).
double truncated_variance(const LevyModel& m, double eps);

// Lambda_eps(u) = sigma^2/2 u^2
//              + (gamma - int_{[-1,1]\[-eps,eps]} x Pi) u
//              + int_{-eps}^{eps} (e^{ux} - 1 - ux) Pi(dx),
// with the analytic first and second derivatives.
double lambda_eps(const LevyModel& m, double eps, double u);
double lambda_eps_prime(const LevyModel& m, double eps, double u);
double lambda_eps_second(const LevyModel& m, double eps, double u);

struct EsscherSolution {
  enum class Regime { Root, DriftDominated };
  double u_eps = 0.0;
  double lambda_at_root = 0.0;
  bool converged = true;
  Regime regime = Regime::Root;
  // Populated in the DriftDominated regime.
  double effective_drift = 0.0;
  std::string to_kv() const;
};

// Unique root of the convex Lambda_eps' when it changes sign. Bounded
// variation with a one-sided measure and a repelling effective drift has no
// root and reports DriftDominated instead.
EsscherSolution solve_esscher_drift(const LevyModel& m, double eps,
                                    double tol_root = 1e-10);

// F(eps) = eps^-2 U(eps), symmetric models only.
double rate_symmetric(const LevyModel& m, double eps);

// F(eps) = eps^-2 (eps^2 tail + sigma^2 + tilted m2 at u_eps) - Lambda(u_eps).
// Throws DriftDominatedError when no tilt root exists.
double rate_general(const LevyModel& m, double eps);

// Dispatch: rate_symmetric when the model is symmetric, else rate_general.
// Accepts eps up to 2 (the measure saturates at [-1,1]); used by sd_bounds.
double rate_auto(const LevyModel& m, double eps);

struct SdBounds {
  double lower;
  double upper;
};

// Bracket for -log P(||X||_t <= eps):
//   lower = t F(2 eps)/12 - eps |u_{2eps}| - 1
//   upper = 10 t F(eps/3) + eps |u_{eps/3}| + 3.
SdBounds sd_bounds(const LevyModel& m, double t, double eps);

class RateTable {
 public:
  enum class Kind { Symmetric, General, ClosedForm };

  static RateTable build(const LevyModel& m, double eps_min = 1e-5,
                         double eps_max = 0.5, int n_points = 120,
                         unsigned threads = 0);
  static RateTable from_columns(std::vector<double> eps_desc,
                                std::vector<double> f_values,
                                Kind kind = Kind::ClosedForm,
                                std::string name = "");

  const std::vector<double>& eps() const { return eps_; }
  const std::vector<double>& f() const { return f_; }
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double eps0() const { return eps_.front(); }

  // log-log interpolation inside the grid.
  double f_at(double eps) const;
  // log F^{-1}(y) from log y, with linear log-log extrapolation beyond the
  // small-eps end (diagnostics only).
  double log_inverse_extrapolated(double log_y) const;

  std::string to_csv() const;
  static RateTable from_csv(const std::string& text);

 private:
  RateTable() = default;
  std::vector<double> eps_;  // strictly decreasing
  std::vector<double> f_;    // strictly increasing, positive
  Kind kind_ = Kind::ClosedForm;
  std::string name_;
};

// Least-squares slope of log F vs log eps over the smallest decade of the
// table; -2 for a pure eps^-2 law.
double estimate_rv_exponent(const RateTable& table);

struct EsscherNegligibleRow {
  double eps;
  double u_eps;
  double rate;
  double ratio;  // eps |u_eps| / log log F(eps)
};

struct EsscherNegligibleReport {
  enum class Trend { DecreasingToZero, Bounded, Increasing };
  std::vector<EsscherNegligibleRow> rows;  // eps decreasing
  Trend trend = Trend::Bounded;
  std::string to_text() const;
};

EsscherNegligibleReport check_esscher_negligible(const LevyModel& m,
                                                 const std::vector<double>& eps_grid);

struct ConditionMRow {
  int n;
  double beta;
  double log_ratio;  // log of (n+1)^{-(n+1)^beta} |compensator gap| / b(a_n)
};

struct ConditionMReport {
  std::vector<ConditionMRow> rows;
  bool passes = false;  // log ratios decrease without bound for every beta
  std::string to_text() const;
};

ConditionMReport check_condition_M(const LevyModel& m, const RateTable& table,
                                   const std::vector<double>& betas, int n_max);

struct FLargerURow {
  double eps;
  double ratio;  // eps^-2 U(eps) / (F(eps) + 1)
};

struct FLargerUReport {
  std::vector<FLargerURow> rows;
  double max_ratio = 0.0;
  double c_const = 0.0;
  bool passes = false;  // max_ratio <= c_const
  std::string to_text() const;
};

FLargerUReport check_flargeru(const LevyModel& m, const RateTable& table,
                              double c_const = 100.0);

}  // namespace levysd
