#include "levysd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "levysd/errors.hpp"
#include "levysd/parallel.hpp"

namespace levysd {

namespace {

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  const double f = pos - i;
  return v[i] + f * (v[i + 1] - v[i]);
}

constexpr double kMinNegLog = 1e-4;                 // p within 1e-4 of 1
const double kMaxNegLog = std::log(1e4);            // p = 1e-4

}  // namespace

SandwichReport sandwich_check(const LevyModel& model, const std::vector<double>& t_grid,
                              const std::vector<double>& eps_grid, long long n_paths,
                              const PathConfig& config) {
  if (t_grid.empty() || eps_grid.empty()) throw DomainError("empty verification grid");

  SandwichReport rep;
  for (double t : t_grid) {
    for (double e : eps_grid) {
      SandwichCell cell;
      cell.t = t;
      cell.eps = e;
      const SdBounds b = sd_bounds(model, t, e);
      cell.lower = b.lower;
      cell.upper = b.upper;
      cell.predicted = t * rate_auto(model, e);
      if (cell.predicted < kMinNegLog || cell.predicted > kMaxNegLog) {
        cell.status = SandwichCell::Status::Skipped;
        ++rep.n_skipped;
        rep.cells.push_back(cell);
        continue;
      }
      cell.est = estimate_small_dev(model, t, e, n_paths, config);
      bool pass = false;
      if (cell.est.hits > 0 && cell.est.ci_low > 0.0) {
        const double band_lo = -std::log(cell.est.ci_high);
        const double band_hi = -std::log(cell.est.ci_low);
        const double slack = 0.5 * (band_hi - band_lo);
        pass = band_lo >= cell.lower - slack && band_hi <= cell.upper + slack;
      }
      cell.status = pass ? SandwichCell::Status::Pass : SandwichCell::Status::Fail;
      (pass ? rep.n_pass : rep.n_fail) += 1;
      rep.cells.push_back(cell);
    }
  }
  if (rep.n_pass + rep.n_fail == 0)
    throw NoEstimableCellsError("no cell has predicted p inside [1e-4, 1 - 1e-4]");
  return rep;
}

std::string SandwichReport::to_csv() const {
  std::ostringstream os;
  os << "t,eps,lower,neg_log_p,ci_neg_log_lo,ci_neg_log_hi,upper,status\n";
  for (const auto& c : cells) {
    os << format_g(c.t) << "," << format_g(c.eps) << "," << format_g(c.lower) << ",";
    if (c.status == SandwichCell::Status::Skipped) {
      os << "nan,nan,nan";
    } else {
      const double lo = c.est.ci_high > 0 ? -std::log(c.est.ci_high) : 0.0;
      const double hi = c.est.ci_low > 0 ? -std::log(c.est.ci_low)
                                         : std::numeric_limits<double>::infinity();
      os << (c.est.neg_log_p ? format_g(*c.est.neg_log_p) : "nan") << ","
         << format_g(lo) << "," << format_g(hi);
    }
    os << "," << format_g(c.upper) << ",";
    switch (c.status) {
      case SandwichCell::Status::Pass:
        os << "pass";
        break;
      case SandwichCell::Status::Fail:
        os << "fail";
        break;
      case SandwichCell::Status::Skipped:
        os << "skipped";
        break;
    }
    os << "\n";
  }
  return os.str();
}

std::string SandwichReport::to_text() const {
  std::ostringstream os;
  os << "sandwich cells: " << cells.size() << " (" << n_pass << " pass, " << n_fail
     << " fail, " << n_skipped << " skipped)\n";
  return os.str();
}

LiminfReport lil_liminf_estimate(const LevyModel& model, const NormingFunction& nf,
                                 double r, int k_min, int k_max, int n_paths,
                                 const PathConfig& config) {
  if (!(r > 0.0) || !(r < 1.0)) throw DomainError("r must lie in (0, 1)");
  if (k_min < 1 || k_max <= k_min) throw DomainError("need 1 <= k_min < k_max");
  if (n_paths < 1) throw DomainError("n_paths must be >= 1");
  const double horizon = std::pow(r, k_min);
  if (horizon > nf.t_max()) throw DomainError("r^k_min exceeds the norming domain");

  // Rates and jump machinery from the simulator; the walk itself uses
  // geometric blocks so times down to r^k_max are resolved.
  PathConfig probe_cfg = config;
  probe_cfg.horizon = horizon;
  const PathSimulator sim(model, probe_cfg);
  const double drift = sim.drift_rate();
  const double rate = sim.gaussian_rate();
  const double intensity = sim.jump_intensity();

  const int n_k = k_max - k_min + 1;
  std::vector<double> b_val(n_k);
  std::vector<double> tk(n_k);
  for (int i = 0; i < n_k; ++i) {
    const int k = k_max - i;  // ascending time order
    tk[i] = std::pow(r, k);
    b_val[i] = nf(tk[i]);
    if (!(b_val[i] > 0.0)) throw DomainError("norming must be positive on the grid");
  }

  const int n_sub = 128;
  std::vector<std::vector<double>> ratios(n_k);
  for (auto& v : ratios) v.resize(n_paths);
  std::vector<double> minima(n_paths);

  const JumpSampler sampler(model, probe_cfg.small_jump_cutoff);

  parallel_for(
      static_cast<std::size_t>(n_paths),
      [&](std::size_t p) {
        RandomStream root = RandomStream(probe_cfg.seed, 0).substream(p);
        RandomStream jump_stream = root.substream(0);
        RandomStream gauss = root.substream(1);

        // jumps over (0, horizon]
        std::vector<Jump> jumps;
        if (intensity > 0.0) {
          const double mean = intensity * horizon;
          long long count = -1;
          double acc = 0.0;
          while (acc < mean) {
            acc += -std::log(jump_stream.next_uniform());
            ++count;
          }
          for (long long j = 0; j < count; ++j) {
            const double time = jump_stream.next_uniform() * horizon;
            jumps.push_back({time, sampler.sample_size(jump_stream)});
          }
          std::sort(jumps.begin(), jumps.end(),
                    [](const Jump& a, const Jump& b) { return a.time < b.time; });
        }

        double x = 0.0;
        double sup = 0.0;
        double prev = 0.0;
        std::size_t jp = 0;
        double path_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n_k; ++i) {
          const double a = prev;
          const double b = tk[i];
          const double h = (b - a) / n_sub;
          const double sd = std::sqrt(rate * h);
          for (int s = 1; s <= n_sub; ++s) {
            const double t = a + s * h;
            x += drift * h;
            if (sd > 0.0) x += sd * gauss.next_normal();
            while (jp < jumps.size() && jumps[jp].time <= t) x += jumps[jp++].size;
            sup = std::max(sup, std::fabs(x));
          }
          const double ratio = sup / b_val[i];
          ratios[i][p] = ratio;
          path_min = std::min(path_min, ratio);
          prev = b;
        }
        minima[p] = path_min;
      },
      probe_cfg.threads);

  LiminfReport rep;
  rep.per_path_min = minima;
  rep.k.resize(n_k);
  rep.t_k = tk;
  rep.ratio_q25.resize(n_k);
  rep.ratio_median.resize(n_k);
  rep.ratio_q75.resize(n_k);
  for (int i = 0; i < n_k; ++i) {
    rep.k[i] = k_max - i;
    rep.ratio_q25[i] = quantile(ratios[i], 0.25);
    rep.ratio_median[i] = quantile(ratios[i], 0.5);
    rep.ratio_q75[i] = quantile(ratios[i], 0.75);
  }
  rep.min_median = quantile(minima, 0.5);
  rep.min_q25 = quantile(minima, 0.25);
  rep.min_q75 = quantile(minima, 0.75);
  return rep;
}

std::string LiminfReport::to_csv() const {
  std::ostringstream os;
  os << "k,t,ratio_q25,ratio_median,ratio_q75\n";
  for (std::size_t i = 0; i < k.size(); ++i) {
    os << k[i] << "," << format_g(t_k[i]) << "," << format_g(ratio_q25[i]) << ","
       << format_g(ratio_median[i]) << "," << format_g(ratio_q75[i]) << "\n";
  }
  return os.str();
}

std::string LiminfReport::to_text() const {
  std::ostringstream os;
  os << "per-path minima: median=" << format_g(min_median) << " iqr=["
     << format_g(min_q25) << ", " << format_g(min_q75) << "] over "
     << per_path_min.size() << " paths\n";
  return os.str();
}

DriftLimitReport bv_drift_limit_check(const LevyModel& model,
                                      const std::vector<double>& t_list, int n_paths,
                                      const PathConfig& config) {
  if (t_list.empty()) throw DomainError("empty t list");
  if (n_paths < 1) throw DomainError("n_paths must be >= 1");
  if (!model.drift_dominated())
    throw NotDriftDominatedError(
        "model needs bounded variation and a non-vanishing effective drift");

  DriftLimitReport rep;
  rep.c_abs = std::fabs(model.effective_drift());
  for (double t : t_list) {
    PathConfig cfg = config;
    cfg.horizon = t;
    const PathSimulator sim(model, cfg);
    std::vector<double> errs(n_paths);
    parallel_for(
        static_cast<std::size_t>(n_paths),
        [&](std::size_t i) {
          const double sup = sim.refined_sup(i, cfg.refine_levels);
          errs[i] = std::fabs(sup / t - rep.c_abs);
        },
        cfg.threads);
    double mean = 0.0;
    for (double e : errs) mean += e;
    mean /= n_paths;
    rep.rows.push_back({t, mean});
  }
  return rep;
}

std::string DriftLimitReport::to_csv() const {
  std::ostringstream os;
  os << "t,mean_abs_error\n";
  for (const auto& r : rows) os << format_g(r.t) << "," << format_g(r.mean_abs_error) << "\n";
  return os.str();
}

}  // namespace levysd
