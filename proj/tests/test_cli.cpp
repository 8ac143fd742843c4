#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "levysd/commands.hpp"
#include "levysd/csv.hpp"
#include "levysd/errors.hpp"
#include "levysd/rate_function.hpp"

using namespace levysd;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "levysd_test" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

const std::string kBrownian =
    "model.family = brownian\n"
    "model.sigma2 = 1.0\n";

const std::string kSymPoly =
    "model.family = two_sided_polynomial\n"
    "model.c1 = 1\nmodel.alpha1 = 1\nmodel.c2 = 1\nmodel.alpha2 = 1\n";

}  // namespace

TEST_CASE("config parsing: values, comments, defaults") {
  const RunConfig cfg = parse_config_text(
      "# comment line\n"
      "model.family = two_sided_polynomial\n"
      "model.c1 = 1.5   # trailing comment\n"
      "model.alpha1 = 0.75\n"
      "rate.n_points = 40\n"
      "simulate.seed = 31337\n"
      "verify.t_grid = 0.5, 1.0\n");
  CHECK(cfg.family == "two_sided_polynomial");
  CHECK(cfg.c1 == 1.5);
  CHECK(cfg.alpha1 == 0.75);
  CHECK(cfg.n_points == 40);
  CHECK(cfg.seed == 31337);
  REQUIRE(cfg.t_grid.size() == 2);
  CHECK(cfg.t_grid[1] == 1.0);
  // untouched keys keep their defaults
  CHECK(cfg.eps_min == 1e-5);
  CHECK(cfg.r == 0.5);
  CHECK(!cfg.lambda.has_value());
}

TEST_CASE("config parsing rejects unknown keys and bad values") {
  try {
    parse_config_text("model.family = brownian\nmodel.nonsense = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("model.sigma2 = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("rate.n_points = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("simulate.delta = 2.0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("norming.lambda = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("rate.eps_min = 0.9\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("simulate.small_jump_mode = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("verify.k_min = 9\nverify.k_max = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("just some words\n"), ConfigError);
}

TEST_CASE("model construction from config") {
  CHECK(model_from_config(parse_config_text(kBrownian)).sigma2() == 1.0);
  const LevyModel poly = model_from_config(parse_config_text(kSymPoly));
  CHECK(poly.symmetric());
  CHECK(tail_mass(poly, 0.5) == doctest::Approx(2.0));

  // gamma_jumps without an explicit gamma gets the drift-preserving triplet
  const LevyModel vg = model_from_config(parse_config_text(
      "model.family = gamma_jumps\nmodel.a = 2\nmodel.b = 3\nmodel.mu = 0.7\n"
      "model.sigma = 1\n"));
  CHECK(vg.effective_drift() == doctest::Approx(0.7 * 2.0 / 3.0).epsilon(1e-12));
  // an explicit gamma overrides it
  const LevyModel vg2 = model_from_config(parse_config_text(
      "model.family = gamma_jumps\nmodel.a = 2\nmodel.b = 3\nmodel.mu = 0.7\n"
      "model.sigma = 1\nmodel.gamma = 0\n"));
  CHECK(vg2.gamma() == 0.0);

  const LevyModel sub = model_from_config(parse_config_text(
      "model.family = subordinated_bm\nmodel.sub_family = stable\n"
      "model.sub_c = 0.7\nmodel.sub_rho = 0.4\nmodel.gamma_a = 0.25\nmodel.sigma = 1.1\n"));
  CHECK(sub.sigma2() == doctest::Approx(1.1 * 1.1 * 0.25));

  CHECK_THROWS_AS(model_from_config(parse_config_text("model.family = weibull\n")),
                  UnknownFamilyError);
}

TEST_CASE("tabulated family reads its density file") {
  const auto dir = fresh_dir("tab");
  const auto file = dir / "density.csv";
  {
    std::ofstream out(file);
    out.precision(17);
    out << "x,dens_pos,dens_neg\n";
    for (double x = 1e-3; x <= 1.000001; x *= std::pow(10.0, 0.25)) {
      const double xi = std::min(x, 1.0);
      out << xi << "," << std::pow(xi, -2.0) << "," << std::pow(xi, -2.0) << "\n";
    }
  }
  const LevyModel m = model_from_config(
      parse_config_text("model.family = tabulated\nmodel.table_file = " + file.string()));
  CHECK(m.measure_symmetric());
  CHECK(tail_mass(m, 0.01) == doctest::Approx(2.0 * (100.0 - 1.0)).epsilon(1e-9));
}

TEST_CASE("rate command writes the table and diagnostics") {
  const auto dir = fresh_dir("rate");
  std::ostringstream log;
  RunConfig cfg = parse_config_text(kBrownian + "rate.n_points = 40\n");
  CHECK(cmd_rate(cfg, dir.string(), log) == 0);
  const RateTable table = RateTable::from_csv(slurp(dir / "rate_table.csv"));
  CHECK(table.f_at(0.1) == doctest::Approx(100.0).epsilon(1e-9));
  const std::string diag = slurp(dir / "rate_diagnostics.txt");
  CHECK(diag.find("symmetric=1") != std::string::npos);
  CHECK(diag.find("condition_m=pass") != std::string::npos);
  CHECK(diag.find("flargeru_max_ratio=") != std::string::npos);
}

TEST_CASE("rate command on a drift-dominated model emits the notice") {
  const auto dir = fresh_dir("rate_drift");
  std::ostringstream log;
  RunConfig cfg = parse_config_text(
      "model.family = two_sided_polynomial\n"
      "model.c1 = 0.01\nmodel.alpha1 = 0.5\nmodel.gamma = 2.02\n");
  CHECK(cmd_rate(cfg, dir.string(), log) == 0);
  CHECK(!std::filesystem::exists(dir / "rate_table.csv"));
  const std::string notice = slurp(dir / "rate_table.txt");
  CHECK(notice.find("regime=drift_dominated") != std::string::npos);
  CHECK(notice.find("norming=|c|*t") != std::string::npos);
  CHECK(log.str().find("|c| = 2") != std::string::npos);
}

TEST_CASE("norming command") {
  const auto dir = fresh_dir("norming");
  std::ostringstream log;
  RunConfig cfg = parse_config_text(kSymPoly +
                                    "norming.lambda = 1.0\n"
                                    "norming.t_min = 1e-4\n"
                                    "rate.n_points = 60\n");
  CHECK(cmd_norming(cfg, dir.string(), log) == 0);
  const CsvTable table = parse_csv(slurp(dir / "norming.csv"));
  CHECK(table.columns.size() == 2);
  CHECK(table.rows.size() > 10);
  // b must be positive and nondecreasing in t (rows go small t -> large t)
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    CHECK(table.rows[i][1] > 0.0);
  }

  // the exponentially sensitive family refuses to default lambda
  RunConfig vg = parse_config_text(
      "model.family = gamma_jumps\nmodel.a = 1\nmodel.b = 1\nmodel.mu = 0\n"
      "model.sigma = 1\n");
  std::ostringstream log2;
  CHECK_THROWS_AS(cmd_norming(vg, dir.string(), log2), ConfigError);
  vg.lambda = 1.0;
  CHECK(cmd_norming(vg, dir.string(), log2) == 0);
  CHECK(log2.str().find("variance-gamma closed form") != std::string::npos);
}

TEST_CASE("sd-bounds and estimate commands round-trip through the csv reader") {
  const auto dir = fresh_dir("bounds");
  std::ostringstream log;
  RunConfig cfg = parse_config_text(kBrownian +
                                    "verify.t_grid = 0.5,1.0\n"
                                    "verify.eps_grid = 0.5,1.0\n");
  CHECK(cmd_sd_bounds(cfg, dir.string(), log) == 0);
  const CsvTable bounds = parse_csv(slurp(dir / "sd_bounds.csv"));
  CHECK(bounds.rows.size() == 4);
  const int lo = bounds.column("lower"), hi = bounds.column("upper");
  for (const auto& row : bounds.rows) CHECK(row[lo] < row[hi]);

  RunConfig est = parse_config_text(kBrownian +
                                    "simulate.t = 1.0\nsimulate.eps = 1.0\n"
                                    "simulate.n_paths = 2000\n"
                                    "simulate.n_steps = 256\n"
                                    "simulate.refine_levels = 1\n");
  CHECK(cmd_estimate_sd(est, dir.string(), log) == 0);
  const CsvTable table = parse_csv(slurp(dir / "estimate.csv"));
  REQUIRE(table.rows.size() == 1);
  const double p_hat = table.rows[0][table.column("p_hat")];
  CHECK(p_hat > 0.25);
  CHECK(p_hat < 0.5);
  CHECK(table.rows[0][table.column("neg_log_p")] ==
        doctest::Approx(-std::log(p_hat)).epsilon(1e-12));

  // missing cell coordinates are a config error
  RunConfig bad = parse_config_text(kBrownian);
  CHECK_THROWS_AS(cmd_estimate_sd(bad, dir.string(), log), ConfigError);
}

TEST_CASE("verify commands: exit codes and reports") {
  const auto dir = fresh_dir("verify");
  std::ostringstream log;
  RunConfig cfg = parse_config_text(kBrownian +
                                    "verify.t_grid = 1.0\n"
                                    "verify.eps_grid = 0.8,1.0\n"
                                    "simulate.n_paths = 3000\n"
                                    "simulate.n_steps = 256\n"
                                    "simulate.refine_levels = 1\n");
  CHECK(cmd_verify_sandwich(cfg, dir.string(), log) == 0);
  const CsvTable sandwich = parse_csv(slurp(dir / "sandwich.csv"));
  CHECK(sandwich.rows.size() == 2);

  // no estimable cells: nonzero exit via the dedicated exception
  RunConfig dead = parse_config_text(kBrownian +
                                     "verify.t_grid = 1000.0\n"
                                     "verify.eps_grid = 0.1\n"
                                     "simulate.n_paths = 500\n"
                                     "simulate.n_steps = 64\n");
  CHECK_THROWS_AS(cmd_verify_sandwich(dead, dir.string(), log), NoEstimableCellsError);

  RunConfig lil = parse_config_text(kBrownian +
                                    "verify.k_min = 5\nverify.k_max = 15\n"
                                    "simulate.n_paths = 100\n"
                                    "simulate.n_steps = 256\n");
  CHECK(cmd_verify_lil(lil, dir.string(), log) == 0);
  const CsvTable lil_csv = parse_csv(slurp(dir / "lil.csv"));
  CHECK(lil_csv.rows.size() == 11);

  RunConfig cond = parse_config_text(kSymPoly + "rate.n_points = 50\n");
  CHECK(cmd_check_conditions(cond, dir.string(), log) == 0);
  const std::string conditions = slurp(dir / "conditions.txt");
  CHECK(conditions.find("trend=decreasing_to_zero") != std::string::npos);
  CHECK(conditions.find("verdict=pass") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  const auto dir1 = fresh_dir("det1");
  const auto dir2 = fresh_dir("det2");
  std::ostringstream log;
  const std::string text = kSymPoly +
                           "simulate.t = 0.2\nsimulate.eps = 0.3\n"
                           "simulate.n_paths = 4000\n"
                           "simulate.n_steps = 256\n"
                           "simulate.refine_levels = 2\n"
                           "simulate.seed = 4242\n";
  RunConfig cfg = parse_config_text(text);
  CHECK(cmd_estimate_sd(cfg, dir1.string(), log) == 0);
  RunConfig cfg2 = parse_config_text(text);
  cfg2.n_paths = 4000;  // same values, parsed afresh
  CHECK(cmd_estimate_sd(cfg2, dir2.string(), log) == 0);
  CHECK(slurp(dir1 / "estimate.csv") == slurp(dir2 / "estimate.csv"));

  // a different seed changes the bytes
  const auto dir3 = fresh_dir("det3");
  RunConfig cfg3 = parse_config_text(text);
  cfg3.seed = 77;
  CHECK(cmd_estimate_sd(cfg3, dir3.string(), log) == 0);
  CHECK(slurp(dir1 / "estimate.csv") != slurp(dir3 / "estimate.csv"));
}
