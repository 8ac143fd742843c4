#include <doctest.h>

#include <cmath>
#include <vector>

#include "levysd/errors.hpp"
#include "levysd/verify.hpp"
#include "oracle_utils.hpp"

using namespace levysd;

namespace {

PathConfig mc_config(int n_steps, int refine) {
  PathConfig cfg;
  cfg.n_steps = n_steps;
  cfg.refine_levels = refine;
  cfg.small_jump_cutoff = 0.01;
  cfg.seed = 777;
  return cfg;
}

LevyModel sym_poly_1() {
  return LevyModel(0.0, 0.0, TwoSidedPolynomial{1.0, 1.0, 1.0, 1.0});
}

// sparse positive jumps on top of drift c = 2
LevyModel drift_model() {
  return LevyModel(2.02, 0.0, TwoSidedPolynomial{0.01, 0.5, 0.0, 0.5});
}

}  // namespace

TEST_CASE("sandwich containment on the Brownian model") {
  const LevyModel b = LevyModel::brownian(1.0);
  const SandwichReport rep = sandwich_check(b, {0.5, 1.0}, {0.6, 0.8, 1.0}, 20000,
                                            mc_config(1024, 2));
  CHECK(rep.n_pass >= 6);
  CHECK(rep.n_fail == 0);
  CHECK(rep.all_pass());
  // the Monte Carlo value also matches the reflection series inside its band
  for (const auto& cell : rep.cells) {
    if (cell.status != SandwichCell::Status::Pass) continue;
    const double p_true = oracle::brownian_sup_cdf(cell.t, cell.eps);
    CHECK(cell.est.p_hat == doctest::Approx(p_true).epsilon(0.08));
    CHECK(cell.lower < -std::log(p_true));
    CHECK(-std::log(p_true) < cell.upper);
  }
}

TEST_CASE("sandwich containment on the symmetric polynomial model") {
  const SandwichReport rep = sandwich_check(sym_poly_1(), {0.1, 0.2},
                                            {0.25, 0.35, 0.5}, 20000, mc_config(512, 2));
  CHECK(rep.n_pass >= 6);
  CHECK(rep.n_fail == 0);
}

TEST_CASE("cells outside the estimable band are skipped, not failed") {
  const SandwichReport rep =
      sandwich_check(sym_poly_1(), {1.0}, {0.05, 0.4}, 1000, mc_config(256, 0));
  REQUIRE(rep.cells.size() == 2);
  CHECK(rep.cells[0].status == SandwichCell::Status::Skipped);  // t F = 78
  CHECK(rep.n_skipped == 1);
  // all-skipped grids raise the documented signal
  CHECK_THROWS_AS(
      sandwich_check(sym_poly_1(), {100.0}, {0.05}, 1000, mc_config(256, 0)),
      NoEstimableCellsError);
}

TEST_CASE("sandwich csv lists one row per cell") {
  const SandwichReport rep =
      sandwich_check(LevyModel::brownian(1.0), {1.0}, {0.8, 1.0}, 2000, mc_config(256, 1));
  const std::string csv = rep.to_csv();
  CHECK(csv.rfind("t,eps,lower,neg_log_p", 0) == 0);
  int rows = 0;
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 3);  // header + 2 cells
}

TEST_CASE("liminf ratios for the Brownian model sit in the unit band") {
  ClosedFormNorming brown;
  brown.family = ClosedFormNorming::Family::Brownian;
  brown.sigma = 1.0;
  const NormingFunction nf = NormingFunction::closed_form(brown);
  const LiminfReport rep = lil_liminf_estimate(LevyModel::brownian(1.0), nf, 0.5, 5, 40,
                                               200, mc_config(1024, 0));
  CHECK(rep.min_median > 0.5);
  CHECK(rep.min_median < 1.5);
  REQUIRE(rep.k.size() == 36);
  // ratios are genuinely random across paths
  int spread = 0;
  for (std::size_t i = 0; i < rep.k.size(); ++i) {
    CHECK(rep.ratio_median[i] > 0.0);
    if (rep.ratio_q75[i] > rep.ratio_q25[i]) ++spread;
  }
  CHECK(spread == static_cast<int>(rep.k.size()));
  // per-path minimum is dominated by every per-path ratio at k = k_min
  for (double m : rep.per_path_min) CHECK(m > 0.0);
}

TEST_CASE("liminf ratios for the drift-dominated model concentrate at one") {
  const LevyModel m = drift_model();
  ClosedFormNorming drift;
  drift.family = ClosedFormNorming::Family::Drift;
  drift.drift_c = m.effective_drift();
  const NormingFunction nf = NormingFunction::closed_form(drift);
  PathConfig cfg = mc_config(64, 0);
  cfg.small_jump_cutoff = 0.3;
  cfg.small_jump_mode = PathConfig::SmallJumpMode::Drop;
  const LiminfReport rep = lil_liminf_estimate(m, nf, 0.5, 5, 40, 200, cfg);
  CHECK(rep.min_median > 0.9);
  CHECK(rep.min_median < 1.1);
}

TEST_CASE("identical norming functions give identical reports") {
  const LevyModel b = LevyModel::brownian(1.0);
  std::vector<double> eps, f;
  for (double e = 0.9; e > 1e-7; e *= 0.85) {
    eps.push_back(e);
    f.push_back(std::pow(e, -2.0));
  }
  const RateTable t1 = RateTable::from_columns(eps, f);
  // a serialization round trip preserves every bit of the table
  const RateTable t2 = RateTable::from_csv(t1.to_csv());
  const NormingFunction n1 = NormingFunction::from_table(t1, 1.0);
  const NormingFunction n2 = NormingFunction::from_table(t2, 1.0);
  const LiminfReport r1 = lil_liminf_estimate(b, n1, 0.5, 5, 20, 50, mc_config(256, 0));
  const LiminfReport r2 = lil_liminf_estimate(b, n2, 0.5, 5, 20, 50, mc_config(256, 0));
  REQUIRE(r1.per_path_min.size() == r2.per_path_min.size());
  for (std::size_t i = 0; i < r1.per_path_min.size(); ++i) {
    CHECK(r1.per_path_min[i] == r2.per_path_min[i]);
  }

  // a joint rescale of (lambda, F) that leaves b fixed changes nothing
  std::vector<double> f3(f);
  for (double& v : f3) v *= 3.0;
  const NormingFunction n3 =
      NormingFunction::from_table(RateTable::from_columns(eps, f3), 1.0 / 3.0);
  const LiminfReport r3 = lil_liminf_estimate(b, n3, 0.5, 5, 20, 50, mc_config(256, 0));
  for (std::size_t i = 0; i < r1.per_path_min.size(); ++i) {
    CHECK(r3.per_path_min[i] ==
          doctest::Approx(r1.per_path_min[i]).epsilon(1e-12));
  }
}

TEST_CASE("scaling the norming by ten divides every ratio by ten") {
  const LevyModel m = drift_model();
  ClosedFormNorming d1, d10;
  d1.family = d10.family = ClosedFormNorming::Family::Drift;
  d1.drift_c = m.effective_drift();
  d10.drift_c = 10.0 * m.effective_drift();
  PathConfig cfg = mc_config(64, 0);
  cfg.small_jump_cutoff = 0.3;
  cfg.small_jump_mode = PathConfig::SmallJumpMode::Drop;
  const LiminfReport r1 =
      lil_liminf_estimate(m, NormingFunction::closed_form(d1), 0.5, 5, 20, 50, cfg);
  const LiminfReport r10 =
      lil_liminf_estimate(m, NormingFunction::closed_form(d10), 0.5, 5, 20, 50, cfg);
  for (std::size_t i = 0; i < r1.per_path_min.size(); ++i) {
    CHECK(r10.per_path_min[i] ==
          doctest::Approx(r1.per_path_min[i] / 10.0).epsilon(1e-14));
  }
}

TEST_CASE("drift limit check") {
  const LevyModel m = drift_model();
  PathConfig cfg = mc_config(64, 0);
  cfg.small_jump_cutoff = 0.3;
  cfg.small_jump_mode = PathConfig::SmallJumpMode::Drop;
  const DriftLimitReport rep = bv_drift_limit_check(m, {1e-3, 1e-4}, 400, cfg);
  CHECK(rep.c_abs == doctest::Approx(2.0).epsilon(1e-12));
  for (const auto& row : rep.rows) {
    CHECK(row.mean_abs_error < 0.1 * rep.c_abs);
  }

  // not applicable to models with a Gaussian part
  CHECK_THROWS_AS(bv_drift_limit_check(LevyModel::brownian(1.0), {1e-3}, 100, cfg),
                  NotDriftDominatedError);

  // variance-gamma with mu != 0 is bounded variation with |c| = |mu| E A_1
  const LevyModel vg = LevyModel::variance_gamma(2.0, 3.0, 0.7, 1.0);
  PathConfig vg_cfg = mc_config(64, 0);
  vg_cfg.small_jump_cutoff = 0.01;
  vg_cfg.small_jump_mode = PathConfig::SmallJumpMode::Drop;
  const DriftLimitReport vrep = bv_drift_limit_check(vg, {1e-4}, 400, vg_cfg);
  CHECK(vrep.c_abs == doctest::Approx(0.7 * 2.0 / 3.0).epsilon(1e-12));
  CHECK(vrep.rows[0].mean_abs_error < 0.1 * vrep.c_abs);
}
