// Acceptance suite: end-to-end checks at the tolerances the project promises.
// Each criterion prints one PASS/FAIL line; the exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "levysd/verify.hpp"
#include "oracle_utils.hpp"

using namespace levysd;

namespace {

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(int number, std::string title)
      : number_(number), title_(std::move(title)), start_(clock_t::now()) {}

  void expect(bool ok, const std::string& detail) {
    if (!ok) failed_.push_back(detail);
    notes_.push_back((ok ? "" : "FAILED: ") + detail);
  }

  double seconds() const {
    return std::chrono::duration<double>(clock_t::now() - start_).count();
  }

  void finish(double budget_seconds = 0.0) {
    const double elapsed = seconds();
    if (budget_seconds > 0.0 && elapsed > budget_seconds) {
      std::ostringstream os;
      os << "runtime " << elapsed << " s exceeds budget " << budget_seconds << " s";
      failed_.push_back(os.str());
    }
    const bool ok = failed_.empty();
    std::printf("criterion %d: %s  [%s, %.1f s]\n", number_, ok ? "PASS" : "FAIL",
                title_.c_str(), elapsed);
    for (const auto& n : notes_) std::printf("    %s\n", n.c_str());
    for (const auto& f : failed_) std::printf("    !! %s\n", f.c_str());
    if (!ok) ++g_failures;
    std::fflush(stdout);
  }

 private:
  using clock_t = std::chrono::steady_clock;
  int number_;
  std::string title_;
  std::vector<std::string> failed_;
  std::vector<std::string> notes_;
  clock_t::time_point start_;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

LevyModel brownian() { return LevyModel::brownian(1.0); }

LevyModel sym_poly() {
  return LevyModel(0.0, 0.0, TwoSidedPolynomial{1.0, 1.0, 1.0, 1.0});
}

// sparse positive jumps over drift c = 2
LevyModel drift_c2() {
  return LevyModel(2.02, 0.0, TwoSidedPolynomial{0.01, 0.5, 0.0, 0.5});
}

PathConfig mc_config(int n_steps, int refine, std::uint64_t seed) {
  PathConfig cfg;
  cfg.n_steps = n_steps;
  cfg.refine_levels = refine;
  cfg.small_jump_cutoff = 0.01;
  cfg.seed = seed;
  return cfg;
}

void criterion_1() {
  Criterion c(1, "Brownian small-deviation constant");
  // series asymptotics: -log p(eps) * eps^2 -> pi^2/8 as eps falls
  const double target = M_PI * M_PI / 8.0;
  double prev_err = 1e9;
  for (double eps : {0.5, 0.4, 0.3}) {
    const double stat = -std::log(oracle::brownian_sup_cdf(1.0, eps)) * eps * eps;
    const double rel = std::fabs(stat / target - 1.0);
    c.expect(rel < prev_err + 1e-12,
             fmt("series: eps=%.2f, -log p * eps^2 off pi^2/8 by %.4f%%", eps, rel * 100.0));
    prev_err = rel;
    if (eps == 0.3) c.expect(rel <= 0.05, fmt("asymptotic relative error %.4f <= 0.05", rel));
  }
  // Monte Carlo at (t, eps) = (1, 1) against the series value
  const SmallDevEstimate est =
      estimate_small_dev(brownian(), 1.0, 1.0, 1000000, mc_config(512, 6, 20240601));
  const double err = std::fabs(est.p_hat - 0.3708);
  c.expect(err <= 0.005,
           fmt("|p_hat - 0.3708| = %.5f <= 0.005 (p_hat = %.5f, 1e6 paths)", err, est.p_hat));
  c.finish(120.0);
}

void criterion_2() {
  Criterion c(2, "sandwich containment, 100% of estimable cells");
  {
    const SandwichReport rep = sandwich_check(brownian(), {0.5, 1.0}, {0.6, 0.8, 1.0},
                                              100000, mc_config(1024, 2, 555));
    c.expect(rep.n_pass >= 6, fmt("Brownian: %.0f estimable cells >= 6", rep.n_pass));
    c.expect(rep.n_fail == 0, fmt("Brownian: %.0f failed cells", rep.n_fail));
  }
  {
    const SandwichReport rep = sandwich_check(sym_poly(), {0.1, 0.2}, {0.25, 0.35, 0.5},
                                              100000, mc_config(512, 2, 556));
    c.expect(rep.n_pass >= 6, fmt("polynomial: %.0f estimable cells >= 6", rep.n_pass));
    c.expect(rep.n_fail == 0, fmt("polynomial: %.0f failed cells", rep.n_fail));
  }
  c.finish(600.0);
}

void criterion_3() {
  Criterion c(3, "symmetric closed forms vs quadrature; exact zero tilt");
  const LevyModel m = sym_poly();
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double e = 1e-4 * std::pow(0.5 / 1e-4, i / 20.0);
    const double closed = 4.0 / e - 2.0;
    const double viaq = (e * e * tail_mass_numeric(m, e) +
                         truncated_moment_numeric(m, e, 2)) /
                        (e * e);
    worst = std::max(worst, std::fabs(viaq / closed - 1.0));
  }
  c.expect(worst <= 1e-8, fmt("max |F_quad/F_closed - 1| = %.2e <= 1e-8", worst));

  const LevyModel symmetric_catalog[] = {
      brownian(), sym_poly(),
      LevyModel(0.0, 0.0, SymmetricLogPolynomial{1.2, 0.7, 0.8}),
      LevyModel::variance_gamma(1.5, 2.0, 0.0, 0.9),
      LevyModel::subordinated_bm(
          SubordinatorSpec{SubordinatorSpec::Kind::Stable, 0.7, 0.4, 0.0, 0.0}, 0.0, 1.0),
      LevyModel::subordinated_bm(
          SubordinatorSpec{SubordinatorSpec::Kind::Gamma, 0.0, 0.0, 1.3, 0.9}, 0.0, 1.0)};
  bool all_zero = true;
  for (const auto& sm : symmetric_catalog) {
    for (double e : {0.01, 0.1, 0.4}) {
      if (solve_esscher_drift(sm, e).u_eps != 0.0) all_zero = false;
    }
  }
  c.expect(all_zero, "u_eps == 0 exactly for every symmetric catalog model");
  c.finish();
}

void criterion_4() {
  Criterion c(4, "tilt solver: drifted root and drift-dominated regime");
  const EsscherSolution sol = solve_esscher_drift(LevyModel::brownian(1.0, 0.5), 0.1);
  c.expect(std::fabs(sol.u_eps + 0.5) <= 1e-10,
           fmt("u_eps = %.12f (target -0.5, tol 1e-10)", sol.u_eps));
  c.expect(std::fabs(sol.lambda_at_root + 0.125) <= 1e-10,
           fmt("Lambda(u_eps) = %.12f (target -0.125, tol 1e-10)", sol.lambda_at_root));

  const LevyModel bv(4.0, 0.0, TwoSidedPolynomial{1.0, 0.5, 0.0, 0.5});
  const EsscherSolution dd = solve_esscher_drift(bv, 0.1);
  c.expect(dd.regime == EsscherSolution::Regime::DriftDominated,
           "pure-jump bounded-variation model reports the drift regime");
  c.expect(std::fabs(dd.effective_drift - 2.0) <= 1e-12,
           fmt("effective drift %.12f = 2", dd.effective_drift));
  c.finish();
}

void criterion_5() {
  Criterion c(5, "drift limit ||X||_t / t -> |c|");
  PathConfig cfg = mc_config(64, 0, 31415);
  cfg.small_jump_cutoff = 0.3;
  cfg.small_jump_mode = PathConfig::SmallJumpMode::Drop;
  const DriftLimitReport rep = bv_drift_limit_check(drift_c2(), {1e-4}, 1000, cfg);
  c.expect(std::fabs(rep.c_abs - 2.0) <= 1e-12, fmt("|c| = %.12f", rep.c_abs));
  c.expect(rep.rows[0].mean_abs_error <= 0.2,
           fmt("mean | ||X||_t/t - 2 | = %.4f <= 0.2 at t = 1e-4", rep.rows[0].mean_abs_error));
  c.finish(60.0);
}

void criterion_6() {
  Criterion c(6, "liminf bands along the geometric grid");
  {
    ClosedFormNorming brown;
    brown.family = ClosedFormNorming::Family::Brownian;
    brown.sigma = 1.0;
    const LiminfReport rep =
        lil_liminf_estimate(brownian(), NormingFunction::closed_form(brown), 0.5, 5, 40,
                            200, mc_config(1024, 0, 8888));
    c.expect(rep.min_median >= 0.5 && rep.min_median <= 1.5,
             fmt("Brownian: median of per-path minima = %.4f in [0.5, 1.5]", rep.min_median));
  }
  {
    const LevyModel m = drift_c2();
    ClosedFormNorming drift;
    drift.family = ClosedFormNorming::Family::Drift;
    drift.drift_c = m.effective_drift();
    PathConfig cfg = mc_config(64, 0, 8889);
    cfg.small_jump_cutoff = 0.3;
    cfg.small_jump_mode = PathConfig::SmallJumpMode::Drop;
    const LiminfReport rep =
        lil_liminf_estimate(m, NormingFunction::closed_form(drift), 0.5, 5, 40, 200, cfg);
    c.expect(rep.min_median >= 0.9 && rep.min_median <= 1.1,
             fmt("drift model: median of per-path minima = %.4f in [0.9, 1.1]", rep.min_median));
  }
  c.finish(600.0);
}

void criterion_7() {
  Criterion c(7, "stable constant bracket and the Monte Carlo statistic");
  const StableConstantBounds b = stable_constant_bounds(1.0, 1.0);
  c.expect(std::fabs(b.low - 13.0 / 12.0) <= 1e-14,
           fmt("low = %.12f (13/12 exactly)", b.low));
  c.expect(std::fabs(b.high - 66.0) <= 1e-14, fmt("high = %.12f (66 exactly)", b.high));

  const double t = 0.1, eps = 0.3;
  const SmallDevEstimate est =
      estimate_small_dev(sym_poly(), t, eps, 100000, mc_config(1024, 2, 991));
  const double mid = *est.neg_log_p * eps / t;
  const double lo = -std::log(est.ci_high) * eps / t;
  const double hi = -std::log(est.ci_low) * eps / t;
  const double slack = (hi - lo) / (2.0 * mid);
  const bool inside = mid >= b.low * (1.0 - slack) && mid <= b.high * (1.0 + slack);
  c.expect(inside, fmt("-log p * eps/t = %.3f inside [%.3f, %.0f] with MC slack", mid,
                       b.low, b.high));
  c.finish(120.0);
}

void criterion_8() {
  Criterion c(8, "side-condition checkers");
  const RateTable brown_table = RateTable::build(brownian(), 1e-5, 0.5, 80);
  const ConditionMReport condm = check_condition_M(brownian(), brown_table, {1.5, 2.0}, 40);
  c.expect(condm.passes, "Brownian compensator decay verdict: pass");
  bool rows_cover = true;
  int n_lo = 1000, n_hi = 0;
  for (const auto& row : condm.rows) {
    n_lo = std::min(n_lo, row.n);
    n_hi = std::max(n_hi, row.n);
    if (!(row.log_ratio == -std::numeric_limits<double>::infinity())) rows_cover = false;
  }
  c.expect(n_lo <= 3 && n_hi >= 40, fmt("n range [%g, %g] covers [3, 40]",
                                        static_cast<double>(n_lo), static_cast<double>(n_hi)));
  c.expect(rows_cover, "zero compensator gap: every log-ratio is -inf");

  // supporting evidence on a model with a nonzero gap: finite and falling
  const LevyModel bj(0.0, 1.0, TwoSidedPolynomial{1.0, 1.5, 0.0, 0.5});
  const ConditionMReport condj =
      check_condition_M(bj, RateTable::build(bj, 1e-5, 0.5, 80), {1.5, 2.0}, 40);
  c.expect(condj.passes, "Brownian-plus-jumps compensator decay verdict: pass");

  std::vector<double> grid;
  for (int i = 0; i < 13; ++i) grid.push_back(1e-1 * std::pow(1e-4 / 1e-1, i / 12.0));
  const LevyModel heavy(0.0, 0.0, TwoSidedPolynomial{1.0, 1.5, 0.0, 0.5});
  const EsscherNegligibleReport neg = check_esscher_negligible(heavy, grid);
  bool monotone = true;
  for (std::size_t i = 1; i < neg.rows.size(); ++i) {
    if (!(neg.rows[i].ratio < neg.rows[i - 1].ratio)) monotone = false;
  }
  c.expect(monotone,
           fmt("tilt-negligibility ratios fall monotonically (%.4f down to %.4f)",
               neg.rows.front().ratio, neg.rows.back().ratio));
  c.finish();
}

void criterion_9() {
  Criterion c(9, "determinism: byte-identical reruns");
  {
    const SmallDevEstimate a =
        estimate_small_dev(brownian(), 1.0, 1.0, 20000, mc_config(1024, 3, 777));
    const SmallDevEstimate b =
        estimate_small_dev(brownian(), 1.0, 1.0, 20000, mc_config(1024, 3, 777));
    c.expect(a.csv_row() == b.csv_row(), "estimate csv row identical across reruns");
    const SmallDevEstimate d =
        estimate_small_dev(brownian(), 1.0, 1.0, 20000, mc_config(1024, 3, 778));
    c.expect(a.csv_row() != d.csv_row(), "different seed changes the bytes");
  }
  {
    const SandwichReport a =
        sandwich_check(sym_poly(), {0.2}, {0.3, 0.5}, 5000, mc_config(256, 1, 12));
    const SandwichReport b =
        sandwich_check(sym_poly(), {0.2}, {0.3, 0.5}, 5000, mc_config(256, 1, 12));
    c.expect(a.to_csv() == b.to_csv(), "sandwich csv identical across reruns");
  }
  {
    ClosedFormNorming brown;
    brown.family = ClosedFormNorming::Family::Brownian;
    const LiminfReport a = lil_liminf_estimate(brownian(), NormingFunction::closed_form(brown),
                                               0.5, 5, 20, 50, mc_config(256, 0, 5));
    const LiminfReport b = lil_liminf_estimate(brownian(), NormingFunction::closed_form(brown),
                                               0.5, 5, 20, 50, mc_config(256, 0, 5));
    c.expect(a.to_csv() == b.to_csv(), "liminf csv identical across reruns");
  }
  c.finish();
}

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");
  criterion_3();
  criterion_4();
  criterion_8();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_9();
  criterion_2();
  criterion_1();
  std::printf("================\n%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
