#pragma once

#include <string>
#include <vector>

#include "levysd/norming.hpp"
#include "levysd/rate_function.hpp"
#include "levysd/simulate.hpp"

namespace levysd {

struct SandwichCell {
  double t = 0.0;
  double eps = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double predicted = 0.0;  // t * F(eps), the order-of-magnitude screen
  enum class Status { Pass, Fail, Skipped };
  Status status = Status::Skipped;
  SmallDevEstimate est;
};

struct SandwichReport {
  std::vector<SandwichCell> cells;
  int n_pass = 0;
  int n_fail = 0;
  int n_skipped = 0;
  bool all_pass() const { return n_fail == 0 && n_pass > 0; }
  std::string to_csv() const;
  std::string to_text() const;
};

// Every estimable (t, eps) cell gets a Monte Carlo -log p band which must lie
// inside [lower - slack, upper + slack], slack = band half-width. Cells whose
// predicted p falls outside [1e-4, 1 - 1e-4] are skipped, not failed.
SandwichReport sandwich_check(const LevyModel& model, const std::vector<double>& t_grid,
                              const std::vector<double>& eps_grid, long long n_paths,
                              const PathConfig& config);

struct LiminfReport {
  std::vector<int> k;
  std::vector<double> t_k;
  std::vector<double> ratio_q25;
  std::vector<double> ratio_median;
  std::vector<double> ratio_q75;
  std::vector<double> per_path_min;
  double min_median = 0.0;
  double min_q25 = 0.0;
  double min_q75 = 0.0;
  std::string to_csv() const;
  std::string to_text() const;
};

// One trajectory per replicate evaluated at the nested times t_k = r^k,
// k_min <= k <= k_max; reports ||X||_{t_k} / b(t_k) statistics and the
// per-path minima.
LiminfReport lil_liminf_estimate(const LevyModel& model, const NormingFunction& nf,
                                 double r, int k_min, int k_max, int n_paths,
                                 const PathConfig& config);

struct DriftLimitRow {
  double t = 0.0;
  double mean_abs_error = 0.0;  // mean | ||X||_t / t - |c| |
};

struct DriftLimitReport {
  double c_abs = 0.0;
  std::vector<DriftLimitRow> rows;
  std::string to_csv() const;
};

DriftLimitReport bv_drift_limit_check(const LevyModel& model,
                                      const std::vector<double>& t_list, int n_paths,
                                      const PathConfig& config);

}  // namespace levysd
