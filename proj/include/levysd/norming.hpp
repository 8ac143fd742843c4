#pragma once

#include <string>
#include <vector>

#include "levysd/rate_function.hpp"

namespace levysd {

// Largest admissible time for a norming function: e^{-e}, so that
// log|log t| >= 1 on the whole domain.
inline constexpr double kDefaultTMax = 0.06598803584531254;

// eps with F(eps) = y under log-log-linear interpolation; exact on power laws.
double invert_rate(const RateTable& table, double y);

struct ClosedFormNorming {
  enum class Family { Brownian, Stable, LogPolynomial, VarianceGamma, Drift };
  Family family = Family::Brownian;
  double sigma = 1.0;      // Brownian: sigma pi sqrt(t / (8 log|log t|))
  double alpha = 1.0;      // Stable / LogPolynomial exponent
  double c_alpha = 1.0;    // Stable: (c_alpha t / log|log t|)^{1/alpha}
  double gamma_exp = 0.0;  // LogPolynomial log-correction exponent
  double lambda = 1.0;     // VarianceGamma: exp(-lambda log|log t| / t)
  double drift_c = 0.0;    // Drift: |c| t
};

double closed_form_norming(const ClosedFormNorming& form, double t);

// b_lambda(t) = F^{-1}(log|log t| / (lambda t)), either table-inverted or one
// of the closed forms above.
class NormingFunction {
 public:
  static NormingFunction from_table(RateTable table, double lambda,
                                    double t_max = kDefaultTMax);
  static NormingFunction closed_form(const ClosedFormNorming& form,
                                     double t_max = kDefaultTMax);

  double operator()(double t) const;
  double t_max() const { return t_max_; }
  double lambda() const { return lambda_; }
  bool table_backed() const { return table_backed_; }

 private:
  NormingFunction() = default;
  bool table_backed_ = false;
  RateTable table_ = RateTable::from_columns({2.0, 1.0}, {1.0, 2.0});
  ClosedFormNorming form_;
  double lambda_ = 1.0;
  double t_max_ = kDefaultTMax;
};

// C_hat = min over the grid of b(t/2) / b(t); the regularity constant floor
// defaults to 1e-3.
struct BRegularityReport {
  double c_hat = 0.0;
  double floor = 1e-3;
  bool passes = false;
};

BRegularityReport check_b_regularity(const NormingFunction& nf,
                                     const std::vector<double>& t_grid,
                                     double floor = 1e-3);

struct StableConstantBounds {
  double low = 0.0;
  double high = 0.0;
  double small_alpha_equivalent = 0.0;  // 2 C / alpha
};

// Bracket for the stable small-deviation constant with Pi(dx) = C|x|^{-1-a}dx:
//   low  = (2C / 2^a) (1/a + 1/(12(2-a)))
//   high = 3^a 2C (1/a + 10/(2-a)).
StableConstantBounds stable_constant_bounds(double alpha, double C);

}  // namespace levysd
