#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "levysd/levy_model.hpp"

namespace levysd {

struct PathConfig {
  double horizon = 1.0;
  int n_steps = 1024;  // power of two, >= 16
  double small_jump_cutoff = 0.01;
  enum class SmallJumpMode { GaussianApprox, Drop };
  SmallJumpMode small_jump_mode = SmallJumpMode::GaussianApprox;
  std::uint64_t seed = 12345;
  int refine_levels = 2;
  unsigned threads = 0;  // 0 = hardware default
};

struct PathSample {
  std::vector<double> times;
  std::vector<double> values;  // values[0] = 0
  double sup_norm = 0.0;
};

struct SmallDevEstimate {
  double t = 0.0;
  double eps = 0.0;
  long long n_paths = 0;
  long long hits = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<double> neg_log_p;  // -log p_hat when hits >= 1

  static std::string csv_header() {
    return "t,eps,n_paths,hits,p_hat,ci_low,ci_high,neg_log_p";
  }
  std::string csv_row() const;
};

// 95% Wilson score interval.
void wilson_interval(long long hits, long long n, double* lo, double* hi);

// Stream keying: everything flows from one seed (the Philox key). Stream ids
// chain through SplitMix64: path root = base.substream(path_index), channel 0
// carries the jumps, channel k+1 the level-k Gaussian increments.
class PathSimulator {
 public:
  PathSimulator(const LevyModel& model, const PathConfig& config);

  PathSample simulate(std::uint64_t path_index) const;

  // Running sup over the grid refined `levels` times beyond config.n_steps
  // via Brownian-bridge midpoints with fixed jump times. Nondecreasing in
  // `levels` for every path. Evaluation stops early once `abort_above` is
  // exceeded; the result then only certifies sup > abort_above.
  double refined_sup(std::uint64_t path_index, int levels,
                     double abort_above = std::numeric_limits<double>::infinity()) const;

  double drift_rate() const { return drift_; }
  double gaussian_rate() const { return gauss_rate_; }
  double jump_intensity() const { return intensity_; }
  const PathConfig& config() const { return cfg_; }

 private:
  RandomStream path_root(std::uint64_t path_index) const;
  std::vector<Jump> draw_jumps(RandomStream& jump_stream) const;
  double refined_sup_gaussian(std::uint64_t path_index, int levels,
                              double abort_above) const;

  LevyModel model_;
  PathConfig cfg_;
  double drift_ = 0.0;       // per unit time, big jumps uncompensated
  double gauss_rate_ = 0.0;  // variance per unit time
  double intensity_ = 0.0;
  std::optional<JumpSampler> sampler_;
};

PathSample simulate_path(const LevyModel& model, const PathConfig& config,
                         std::uint64_t path_index = 0);

double sup_norm_refined(const LevyModel& model, const PathConfig& config,
                        std::uint64_t path_index, int refine_levels);

// Exact-in-distribution Variance-Gamma path via Gamma increments of the clock
// composed with conditional Gaussian increments; no jump truncation.
PathSample simulate_variance_gamma(double shape, double rate, double mu, double sigma,
                                   const PathConfig& config, RandomStream& rng);

// Gamma(shape, rate) variate; Marsaglia-Tsang with the shape<1 boost.
double sample_gamma(double shape, double rate, RandomStream& rng);

SmallDevEstimate estimate_small_dev(const LevyModel& model, double t, double eps,
                                    long long n_paths, const PathConfig& config);

}  // namespace levysd
