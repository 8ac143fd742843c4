#pragma once

#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "levysd/rng.hpp"

namespace levysd {

struct Jump {
  double time;
  double size;
};

// Jump density  c_pos x^{-(1+alpha_pos)} on (0,1],  c_neg (-x)^{-(1+alpha_neg)}
// on [-1,0). c_pos = c_neg = 0 is the purely Gaussian model.
struct TwoSidedPolynomial {
  double c_pos = 0.0;
  double alpha_pos = 0.5;
  double c_neg = 0.0;
  double alpha_neg = 0.5;
};

// Symmetric measure whose two-sided tail is exactly
//   scale * eps^{-alpha} |log eps|^{-gamma_exp}   for eps <= cutoff,
// with the leftover mass spread uniformly over (cutoff, 1] per side so the
// tail is continuous and vanishes at 1.
struct SymmetricLogPolynomial {
  double alpha = 1.0;
  double gamma_exp = 0.0;
  double scale = 1.0;
  // derived on construction
  double cutoff = 0.5;
  double bump_density = 0.0;
};

// Jump measure of sigma B_{A_t} + mu A_t for a Gamma(shape, rate)
// subordinator A, restricted to [-1,1]:
//   shape |x|^{-1} exp(-lambda_pos x) on (0,1],
//   shape |x|^{-1} exp(-lambda_neg |x|) on [-1,0).
struct GammaJumps {
  double shape = 1.0;
  double rate = 1.0;
  double mu = 0.0;
  double sigma = 1.0;
  // derived
  double lambda_pos = 0.0;
  double lambda_neg = 0.0;
};

// Generic fallback: density sampled on an increasing grid of |x| nodes,
// log-linear in (log|x|, log density) between nodes, zero below the first
// node and above 1.
struct TabulatedDensity {
  std::vector<double> abs_x;
  std::vector<double> dens_pos;
  std::vector<double> dens_neg;
};

using MeasureFamily =
    std::variant<TwoSidedPolynomial, SymmetricLogPolynomial, GammaJumps, TabulatedDensity>;

struct SubordinatorSpec {
  enum class Kind { Stable, Gamma };
  Kind kind = Kind::Stable;
  double c = 1.0;      // Stable: Pi_A(ds) = c s^{-1-rho} ds
  double rho = 0.5;
  double shape = 1.0;  // Gamma: Pi_A(ds) = shape s^{-1} e^{-rate s} ds
  double rate = 1.0;
};

// Levy triplet (gamma, sigma2, Pi) with Pi supported on [-1,1] \ {0}.
class LevyModel {
 public:
  LevyModel(double gamma, double sigma2, MeasureFamily measure);

  static LevyModel brownian(double sigma2, double gamma = 0.0);

  // Triplet of the Variance-Gamma process sigma B_{A_t} + mu A_t, jumps
  // restricted to [-1,1]. gamma is set so the effective drift equals
  // mu * E A_1 = mu * shape / rate.
  static LevyModel variance_gamma(double shape, double rate, double mu, double sigma);

  // sigma B_{A_t} with A a subordinator of drift sub_drift >= 0 and the given
  // jump measure. Reduces to a closed-form jump family plus Gaussian part
  // sigma^2 * sub_drift.
  static LevyModel subordinated_bm(const SubordinatorSpec& sub, double sub_drift,
                                   double sigma);

  double gamma() const { return gamma_; }
  double sigma2() const { return sigma2_; }
  const MeasureFamily& measure() const { return measure_; }

  bool has_jumps() const;
  bool measure_symmetric() const;
  // |gamma| <= 1e-12 and the measure is symmetric.
  bool symmetric() const;
  bool bounded_variation() const;
  // gamma - int_{[-1,1]} x Pi(dx); requires bounded variation.
  double effective_drift() const;
  // Bounded variation with non-vanishing effective drift: the |c| t norming
  // applies regardless of whether a tilt root exists.
  bool drift_dominated() const {
    return bounded_variation() && std::fabs(effective_drift()) > 1e-12;
  }

 private:
  double gamma_;
  double sigma2_;
  MeasureFamily measure_;
};

// log Pi-density at |x| = e^y on the given side (+1 / -1); -inf where zero.
double log_measure_density(const LevyModel& m, double y, int side);
// Pi-density at x (x != 0).
double measure_density(const LevyModel& m, double x);

// Pi([-eps, eps]^c). Requires 0 < eps <= 1.
double tail_mass(const LevyModel& m, double eps);

// int_{-eps}^{eps} x^k Pi(dx), k in {1, 2}.
double truncated_moment(const LevyModel& m, double eps, int k);

// int_{-eps}^{eps} x^2 e^{-u x} Pi(dx).
double tilted_second_moment(const LevyModel& m, double eps, double u);

// int_{-eps}^{eps} (e^{u x} - 1 - u x) Pi(dx); nonnegative.
double exp_compensated_integral(const LevyModel& m, double eps, double u);

// int_{-eps}^{eps} x (e^{u x} - 1) Pi(dx).
double tilted_first_integral(const LevyModel& m, double eps, double u);

// int_{eps < |x| <= 1} x Pi(dx) and the |x| version.
double annulus_first_moment(const LevyModel& m, double eps);
double annulus_abs_first_moment(const LevyModel& m, double eps);

// log | int_{|x| > eps} x Pi(dx) - gamma | from log(eps); usable far below
// the double range. Returns -inf when the gap vanishes identically.
double log_compensator_gap(const LevyModel& m, double log_eps);

// Quadrature-only routes (closed forms bypassed); used as cross-checks.
double tail_mass_numeric(const LevyModel& m, double eps);
double truncated_moment_numeric(const LevyModel& m, double eps, int k);

// Inverse-CDF sampler for Pi restricted to delta < |x| <= 1.
class JumpSampler {
 public:
  JumpSampler(const LevyModel& m, double delta);
  double intensity() const { return intensity_; }
  double sample_size(RandomStream& rng) const;

 private:
  struct Side {
    int sign = 1;
    double weight = 0.0;  // tail mass of this side
    // closed-form power-law inversion
    bool power_law = false;
    double alpha = 0.0;
    // numeric inversion grid (log|x| nodes, normalized cumulative mass)
    std::vector<double> log_x;
    std::vector<double> cum;
  };
  Side sides_[2];
  double intensity_ = 0.0;
  double delta_ = 0.0;
};

// Poisson number of jumps with mean horizon * tail_mass(delta), times uniform
// on [0, horizon], sizes from Pi restricted to delta < |x| <= 1. Sorted by
// time; deterministic given the stream state.
std::vector<Jump> sample_jumps(const LevyModel& m, double delta, double horizon,
                               RandomStream& rng);

inline constexpr double kMaxTiltExponent = 700.0;

}  // namespace levysd
