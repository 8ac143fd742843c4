#include "levysd/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "levysd/errors.hpp"
#include "levysd/parallel.hpp"

namespace levysd {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void validate_config(const PathConfig& cfg) {
  if (!(cfg.horizon > 0.0)) throw DomainError("horizon must be > 0");
  if (cfg.n_steps < 16 || !power_of_two(cfg.n_steps))
    throw DomainError("n_steps must be a power of two >= 16");
  if (!(cfg.small_jump_cutoff > 0.0) || !(cfg.small_jump_cutoff < 1.0))
    throw DomainError("small jump cutoff must lie in (0, 1)");
  if (cfg.refine_levels < 0 || cfg.refine_levels > 16)
    throw DomainError("refine_levels must lie in [0, 16]");
}

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string SmallDevEstimate::csv_row() const {
  std::ostringstream os;
  os << format_g(t) << "," << format_g(eps) << "," << n_paths << "," << hits << ","
     << format_g(p_hat) << "," << format_g(ci_low) << "," << format_g(ci_high) << ","
     << (neg_log_p ? format_g(*neg_log_p) : "nan");
  return os.str();
}

void wilson_interval(long long hits, long long n, double* lo, double* hi) {
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2n = z * z / nn;
  const double denom = 1.0 + z2n;
  const double center = (p + 0.5 * z2n) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + 0.25 * z2n / nn);
  *lo = hits == 0 ? 0.0 : std::max(0.0, center - half);
  *hi = hits == n ? 1.0 : std::min(1.0, center + half);
}

PathSimulator::PathSimulator(const LevyModel& model, const PathConfig& config)
    : model_(model), cfg_(config) {
  validate_config(cfg_);
  const double delta = cfg_.small_jump_cutoff;
  drift_ = model_.gamma() - annulus_first_moment(model_, delta);
  const double small_var = truncated_moment(model_, delta, 2);
  if (cfg_.small_jump_mode == PathConfig::SmallJumpMode::GaussianApprox) {
    if (small_var > 0.0 && std::sqrt(small_var) / delta < 3.0) {
      throw ApproximationUnsoundError(
          "sigma(delta)/delta < 3: lower delta or switch small_jump_mode to drop");
    }
    gauss_rate_ = model_.sigma2() + small_var;
  } else {
    gauss_rate_ = model_.sigma2();
  }
  if (model_.has_jumps()) {
    sampler_.emplace(model_, delta);
    intensity_ = sampler_->intensity();
  }
}

RandomStream PathSimulator::path_root(std::uint64_t path_index) const {
  return RandomStream(cfg_.seed, 0).substream(path_index);
}

std::vector<Jump> PathSimulator::draw_jumps(RandomStream& jump_stream) const {
  std::vector<Jump> jumps;
  if (intensity_ <= 0.0) return jumps;
  const double mean = intensity_ * cfg_.horizon;
  if (mean > 1e6) throw DomainError("jump intensity too large; raise delta");
  long long count = -1;
  double acc = 0.0;
  while (acc < mean) {
    acc += -std::log(jump_stream.next_uniform());
    ++count;
  }
  jumps.reserve(static_cast<std::size_t>(count));
  for (long long j = 0; j < count; ++j) {
    const double time = jump_stream.next_uniform() * cfg_.horizon;
    const double size = sampler_->sample_size(jump_stream);
    jumps.push_back({time, size});
  }
  std::sort(jumps.begin(), jumps.end(),
            [](const Jump& a, const Jump& b) { return a.time < b.time; });
  return jumps;
}

PathSample PathSimulator::simulate(std::uint64_t path_index) const {
  const RandomStream root = path_root(path_index);
  RandomStream jump_stream = root.substream(0);
  RandomStream gauss = root.substream(1);
  const std::vector<Jump> jumps = draw_jumps(jump_stream);

  const int n = cfg_.n_steps;
  const double h = cfg_.horizon / n;
  const double step_sd = std::sqrt(gauss_rate_ * h);

  PathSample path;
  path.times.resize(n + 1);
  path.values.resize(n + 1);
  path.times[0] = 0.0;
  path.values[0] = 0.0;
  double sup = 0.0;
  double g = 0.0;     // Gaussian plus drift component
  double jsum = 0.0;  // jump prefix, kept separate so refinement reproduces it
  std::size_t jp = 0;
  for (int i = 1; i <= n; ++i) {
    const double t = i * h;
    g += drift_ * h;
    if (step_sd > 0.0) g += step_sd * gauss.normal_at(i - 1);
    while (jp < jumps.size() && jumps[jp].time <= t) jsum += jumps[jp++].size;
    const double x = g + jsum;
    path.times[i] = t;
    path.values[i] = x;
    sup = std::max(sup, std::fabs(x));
  }
  path.sup_norm = sup;
  return path;
}

namespace {

// Two quantile draws from one Philox block; identical values to
// RandomStream::normal_at(2k) and normal_at(2k+1).
inline void normal_pair(std::uint64_t seed, std::uint64_t stream_id,
                        std::uint64_t block, double* a, double* b) {
  const detail::PhiloxBlock blk = detail::philox4x32_10(seed, block, stream_id);
  const std::uint64_t w0 = (static_cast<std::uint64_t>(blk.x1) << 32) | blk.x0;
  const std::uint64_t w1 = (static_cast<std::uint64_t>(blk.x3) << 32) | blk.x2;
  *a = normal_quantile(static_cast<double>(w0 >> 11) * 0x1.0p-53 + 0x1.0p-54);
  *b = normal_quantile(static_cast<double>(w1 >> 11) * 0x1.0p-53 + 0x1.0p-54);
}

}  // namespace

// Jump-free specialization: one in-place dyadic buffer, backward midpoint
// insertion, no stores at the deepest level. Draw indices match the general
// path, so the two routes produce bit-identical values.
double PathSimulator::refined_sup_gaussian(std::uint64_t path_index, int levels,
                                           double abort_above) const {
  const RandomStream root = path_root(path_index);
  const int n0 = cfg_.n_steps;
  const double horizon = cfg_.horizon;
  const std::uint64_t seed = root.seed();

  thread_local std::vector<double> buf;
  const long long n_final_half =
      levels > 0 ? static_cast<long long>(n0) << (levels - 1) : n0;
  buf.resize(static_cast<std::size_t>(n_final_half) + 1);
  double* g = buf.data();
  g[0] = 0.0;

  double sup = 0.0;
  {
    const std::uint64_t sid = root.substream(1).stream_id();
    const double h = horizon / n0;
    const double sd = std::sqrt(gauss_rate_ * h);
    double x = 0.0;
    for (int i = 1; i <= n0; i += 2) {
      double z0, z1;
      normal_pair(seed, sid, static_cast<std::uint64_t>(i - 1) >> 1, &z0, &z1);
      x += drift_ * h + sd * z0;
      g[i] = x;
      double v = std::fabs(x);
      if (v > sup) sup = v;
      x += drift_ * h + sd * z1;
      g[i + 1] = x;
      v = std::fabs(x);
      if (v > sup) sup = v;
    }
    if (sup > abort_above) return sup;
  }

  long long n = n0;
  for (int level = 1; level <= levels; ++level) {
    const double bridge_sd = 0.5 * std::sqrt(gauss_rate_ * (horizon / n));
    const std::uint64_t sid =
        root.substream(static_cast<std::uint64_t>(level) + 1).stream_id();
    if (level == levels) {
      // final level: midpoints are inspected, never stored
      for (long long j = 0; j < n; j += 2) {
        double z0, z1;
        normal_pair(seed, sid, static_cast<std::uint64_t>(j) >> 1, &z0, &z1);
        const double m0 = 0.5 * (g[j] + g[j + 1]) + bridge_sd * z0;
        const double m1 = 0.5 * (g[j + 1] + g[j + 2]) + bridge_sd * z1;
        const double v = std::max(std::fabs(m0), std::fabs(m1));
        if (v > sup) {
          sup = v;
          if (sup > abort_above) return sup;
        }
      }
      break;
    }
    // in-place backward expansion: writes land at 2j, 2j+1 >= j+2, so the
    // reads of g[j], g[j+1] always see the coarse level
    g[2 * n] = g[n];
    for (long long j = n - 2; j >= 0; j -= 2) {
      double z0, z1;
      normal_pair(seed, sid, static_cast<std::uint64_t>(j) >> 1, &z0, &z1);
      const double a0 = g[j];
      const double a1 = g[j + 1];
      const double a2 = g[j + 2];
      const double m1 = 0.5 * (a1 + a2) + bridge_sd * z1;
      g[2 * j + 3] = m1;
      g[2 * j + 2] = a1;
      const double m0 = 0.5 * (a0 + a1) + bridge_sd * z0;
      g[2 * j + 1] = m0;
      g[2 * j] = a0;
      const double v = std::max(std::fabs(m0), std::fabs(m1));
      if (v > sup) {
        sup = v;
        if (sup > abort_above) return sup;
      }
    }
    n *= 2;
  }
  return sup;
}

double PathSimulator::refined_sup(std::uint64_t path_index, int levels,
                                  double abort_above) const {
  if (intensity_ <= 0.0) return refined_sup_gaussian(path_index, levels, abort_above);

  const RandomStream root = path_root(path_index);
  RandomStream jump_stream = root.substream(0);
  const std::vector<Jump> jumps = draw_jumps(jump_stream);
  const bool no_jumps = jumps.empty();

  const int n0 = cfg_.n_steps;
  const double horizon = cfg_.horizon;

  // Gaussian-plus-drift component on the dyadic grid; the jump prefix rides
  // on top so coarse-grid values are preserved exactly under refinement.
  // Coarse points are already covered by the previous level's max, so each
  // level only has to inspect its new midpoints.
  thread_local std::vector<double> g_cur, g_next;
  g_cur.resize(static_cast<std::size_t>(n0) + 1);
  g_cur[0] = 0.0;

  double sup = 0.0;
  {
    RandomStream gauss = root.substream(1);
    const double h = horizon / n0;
    const double step_sd = std::sqrt(gauss_rate_ * h);
    double g = 0.0;
    double jsum = 0.0;
    std::size_t jp = 0;
    for (int i = 1; i <= n0; ++i) {
      g += drift_ * h;
      if (step_sd > 0.0) g += step_sd * gauss.normal_at(i - 1);
      g_cur[i] = g;
      if (!no_jumps) {
        const double t = i * h;
        while (jp < jumps.size() && jumps[jp].time <= t) jsum += jumps[jp++].size;
      }
      const double v = std::fabs(g + jsum);
      if (v > sup) sup = v;
    }
    if (sup > abort_above) return sup;
  }

  long long n = n0;
  for (int level = 1; level <= levels; ++level) {
    const double h_prev = horizon / n;
    const double h_next = 0.5 * h_prev;
    const double bridge_sd = 0.5 * std::sqrt(gauss_rate_ * h_prev);
    g_next.resize(static_cast<std::size_t>(2 * n) + 1);
    RandomStream gauss = root.substream(static_cast<std::uint64_t>(level) + 1);
    double jsum = 0.0;
    std::size_t jp = 0;
    for (long long j = 0; j < n; ++j) {
      const double a = g_cur[j];
      const double b = g_cur[j + 1];
      double mid = 0.5 * (a + b);
      if (bridge_sd > 0.0) mid += bridge_sd * gauss.normal_at(static_cast<std::uint64_t>(j));
      g_next[2 * j] = a;
      g_next[2 * j + 1] = mid;
      if (!no_jumps) {
        const double tm = (2 * j + 1) * h_next;
        while (jp < jumps.size() && jumps[jp].time <= tm) jsum += jumps[jp++].size;
      }
      const double v = std::fabs(mid + jsum);
      if (v > sup) {
        sup = v;
        if (sup > abort_above) return sup;
      }
    }
    g_next[2 * n] = g_cur[n];
    g_cur.swap(g_next);
    n *= 2;
    if (sup > abort_above) return sup;
  }
  return sup;
}

PathSample simulate_path(const LevyModel& model, const PathConfig& config,
                         std::uint64_t path_index) {
  return PathSimulator(model, config).simulate(path_index);
}

double sup_norm_refined(const LevyModel& model, const PathConfig& config,
                        std::uint64_t path_index, int refine_levels) {
  return PathSimulator(model, config).refined_sup(path_index, refine_levels);
}

double sample_gamma(double shape, double rate, RandomStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw DomainError("gamma needs shape, rate > 0");
  if (shape < 1.0) {
    const double boost = std::exp(std::log(rng.next_uniform()) / shape);
    return sample_gamma(shape + 1.0, rate, rng) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.next_normal();
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.next_uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v / rate;
    }
  }
}

PathSample simulate_variance_gamma(double shape, double rate, double mu, double sigma,
                                   const PathConfig& config, RandomStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw DomainError("shape and rate must be > 0");
  validate_config(config);
  const int n = config.n_steps;
  const double h = config.horizon / n;

  PathSample path;
  path.times.resize(n + 1);
  path.values.resize(n + 1);
  path.times[0] = 0.0;
  path.values[0] = 0.0;
  double x = 0.0;
  double sup = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double da = sample_gamma(shape * h, rate, rng);
    x += mu * da + sigma * std::sqrt(da) * rng.next_normal();
    path.times[i] = i * h;
    path.values[i] = x;
    sup = std::max(sup, std::fabs(x));
  }
  path.sup_norm = sup;
  return path;
}

SmallDevEstimate estimate_small_dev(const LevyModel& model, double t, double eps,
                                    long long n_paths, const PathConfig& config) {
  if (n_paths < 100) throw DomainError("n_paths must be >= 100");
  if (!(eps > 0.0)) throw DomainError("eps must be > 0");
  PathConfig cfg = config;
  cfg.horizon = t;
  const PathSimulator sim(model, cfg);

  const unsigned threads = cfg.threads == 0 ? default_thread_count() : cfg.threads;
  std::vector<long long> partial(threads, 0);
  const std::size_t total = static_cast<std::size_t>(n_paths);
  const std::size_t chunk = (total + threads - 1) / threads;
  parallel_for(
      threads,
      [&](std::size_t w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(total, lo + chunk);
        long long hits = 0;
        for (std::size_t i = lo; i < hi; ++i) {
          const double sup = sim.refined_sup(i, cfg.refine_levels, eps);
          if (sup <= eps) ++hits;
        }
        partial[w] = hits;
      },
      threads);

  long long hits = 0;
  for (long long h : partial) hits += h;

  SmallDevEstimate est;
  est.t = t;
  est.eps = eps;
  est.n_paths = n_paths;
  est.hits = hits;
  est.p_hat = static_cast<double>(hits) / static_cast<double>(n_paths);
  wilson_interval(hits, n_paths, &est.ci_low, &est.ci_high);
  if (hits > 0) est.neg_log_p = -std::log(est.p_hat);
  return est;
}

}  // namespace levysd
