#include "levysd/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levysd/errors.hpp"
#include "levysd/verify.hpp"

namespace levysd {

namespace {

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::string& out_dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  out << content;
}

bool drift_dominated_probe(const LevyModel& model, double* c_out) {
  if (model.drift_dominated()) {
    *c_out = model.effective_drift();
    return true;
  }
  return false;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i) g[i] = std::exp(lhi + (llo - lhi) * i / (n - 1));
  return g;
}

NormingFunction norming_for_model(const RunConfig& cfg, const LevyModel& model,
                                  std::ostream& log) {
  double c = 0.0;
  if (drift_dominated_probe(model, &c)) {
    ClosedFormNorming form;
    form.family = ClosedFormNorming::Family::Drift;
    form.drift_c = c;
    log << "norming: drift-dominated, b(t) = |c| t with |c| = " << format_g(std::fabs(c))
        << "\n";
    return NormingFunction::closed_form(form, cfg.t_max);
  }
  if (!model.has_jumps() && model.sigma2() > 0.0 && model.symmetric()) {
    ClosedFormNorming form;
    form.family = ClosedFormNorming::Family::Brownian;
    form.sigma = std::sqrt(model.sigma2());
    log << "norming: closed form, sigma = " << format_g(form.sigma) << "\n";
    return NormingFunction::closed_form(form, cfg.t_max);
  }
  if (cfg.family == "gamma_jumps" && cfg.mu == 0.0) {
    if (!cfg.lambda)
      throw ConfigError("norming.lambda is required (it enters b exponentially here)", 0);
    ClosedFormNorming form;
    form.family = ClosedFormNorming::Family::VarianceGamma;
    form.lambda = *cfg.lambda;
    log << "norming: variance-gamma closed form, lambda = " << format_g(*cfg.lambda)
        << "\n";
    return NormingFunction::closed_form(form, cfg.t_max);
  }
  if (!cfg.lambda) throw ConfigError("norming.lambda is required for a table norming", 0);
  RateTable table = RateTable::build(model, cfg.eps_min, cfg.eps_max, cfg.n_points);
  log << "norming: table-inverted, lambda = " << format_g(*cfg.lambda) << "\n";
  return NormingFunction::from_table(std::move(table), *cfg.lambda, cfg.t_max);
}

}  // namespace

int cmd_rate(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const LevyModel model = model_from_config(cfg);
  double drift_c = 0.0;
  if (drift_dominated_probe(model, &drift_c)) {
    std::ostringstream os;
    os << "regime=drift_dominated\n";
    os << "effective_drift=" << format_g(drift_c) << "\n";
    os << "norming=|c|*t\n";
    write_file(out_dir, "rate_table.txt", os.str());
    log << "drift-dominated model: b(t) = |c| t with |c| = "
        << format_g(std::fabs(drift_c)) << "\n";
    return 0;
  }
  const RateTable table = RateTable::build(model, cfg.eps_min, cfg.eps_max, cfg.n_points);

  write_file(out_dir, "rate_table.csv", table.to_csv());

  std::ostringstream diag;
  diag << "symmetric=" << (model.symmetric() ? 1 : 0) << "\n";
  diag << "kind=" << (table.kind() == RateTable::Kind::Symmetric ? "symmetric" : "general")
       << "\n";

  // subsampled tilt-drift trace
  diag << "\n# eps,u_eps\n";
  const auto& eps = table.eps();
  const std::size_t stride = std::max<std::size_t>(1, eps.size() / 12);
  std::vector<double> neg_grid;
  for (std::size_t i = 0; i < eps.size(); i += stride) {
    const EsscherSolution sol = solve_esscher_drift(model, eps[i]);
    diag << format_g(eps[i]) << "," << format_g(sol.u_eps) << "\n";
    if (table.f()[i] > M_E) neg_grid.push_back(eps[i]);
  }

  diag << "\n# tilt-negligibility ratios\n";
  const EsscherNegligibleReport neg = check_esscher_negligible(model, neg_grid);
  diag << neg.to_text();

  diag << "\n# compensator decay (beta grid 1.5, 2)\n";
  const ConditionMReport condm = check_condition_M(model, table, {1.5, 2.0}, 40);
  diag << "condition_m=" << (condm.passes ? "pass" : "fail") << "\n";

  const FLargerUReport flu = check_flargeru(model, table);
  diag << "flargeru_max_ratio=" << format_g(flu.max_ratio) << "\n";

  write_file(out_dir, "rate_diagnostics.txt", diag.str());
  log << "rate table: " << table.eps().size() << " rows, eps in ["
      << format_g(table.eps().back()) << ", " << format_g(table.eps().front()) << "]\n";
  return 0;
}

int cmd_norming(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const LevyModel model = model_from_config(cfg);
  const NormingFunction nf = norming_for_model(cfg, model, log);

  std::ostringstream os;
  os << "t,b\n";
  int rows = 0, skipped = 0;
  for (double t : geometric_grid(cfg.t_min, cfg.t_max, cfg.norming_points)) {
    try {
      os << format_g(t) << "," << format_g(nf(t)) << "\n";
      ++rows;
    } catch (const OutOfTableRangeError&) {
      ++skipped;
    }
  }
  write_file(out_dir, "norming.csv", os.str());
  log << "norming curve: " << rows << " rows";
  if (skipped > 0) log << " (" << skipped << " outside the table range)";
  log << "\n";
  return 0;
}

int cmd_sd_bounds(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  if (cfg.t_grid.empty() || cfg.eps_grid.empty())
    throw ConfigError("verify.t_grid and verify.eps_grid are required", 0);
  const LevyModel model = model_from_config(cfg);
  std::ostringstream os;
  os << "t,eps,lower,upper\n";
  for (double t : cfg.t_grid) {
    for (double e : cfg.eps_grid) {
      const SdBounds b = sd_bounds(model, t, e);
      os << format_g(t) << "," << format_g(e) << "," << format_g(b.lower) << ","
         << format_g(b.upper) << "\n";
    }
  }
  write_file(out_dir, "sd_bounds.csv", os.str());
  log << "bounds for " << cfg.t_grid.size() * cfg.eps_grid.size() << " cells\n";
  return 0;
}

int cmd_estimate_sd(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  if (!cfg.sim_t || !cfg.sim_eps)
    throw ConfigError("simulate.t and simulate.eps are required", 0);
  const LevyModel model = model_from_config(cfg);
  const SmallDevEstimate est =
      estimate_small_dev(model, *cfg.sim_t, *cfg.sim_eps, cfg.n_paths,
                         path_config_from(cfg));
  std::ostringstream os;
  os << SmallDevEstimate::csv_header() << "\n" << est.csv_row() << "\n";
  write_file(out_dir, "estimate.csv", os.str());
  log << "p_hat = " << format_g(est.p_hat) << " [" << format_g(est.ci_low) << ", "
      << format_g(est.ci_high) << "]";
  if (est.neg_log_p) log << ", -log p = " << format_g(*est.neg_log_p);
  log << "\n";
  return est.hits == 0 ? 1 : 0;
}

int cmd_verify_sandwich(const RunConfig& cfg, const std::string& out_dir,
                        std::ostream& log) {
  if (cfg.t_grid.empty() || cfg.eps_grid.empty())
    throw ConfigError("verify.t_grid and verify.eps_grid are required", 0);
  const LevyModel model = model_from_config(cfg);
  const SandwichReport rep =
      sandwich_check(model, cfg.t_grid, cfg.eps_grid, cfg.n_paths, path_config_from(cfg));
  write_file(out_dir, "sandwich.csv", rep.to_csv());
  log << rep.to_text();
  return rep.all_pass() ? 0 : 1;
}

int cmd_verify_lil(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const LevyModel model = model_from_config(cfg);
  const NormingFunction nf = norming_for_model(cfg, model, log);
  const LiminfReport rep =
      lil_liminf_estimate(model, nf, cfg.r, cfg.k_min, cfg.k_max,
                          static_cast<int>(cfg.n_paths), path_config_from(cfg));
  write_file(out_dir, "lil.csv", rep.to_csv());
  log << rep.to_text();
  return 0;
}

int cmd_check_conditions(const RunConfig& cfg, const std::string& out_dir,
                         std::ostream& log) {
  const LevyModel model = model_from_config(cfg);
  const RateTable table = RateTable::build(model, cfg.eps_min, cfg.eps_max, cfg.n_points);

  std::vector<double> grid;
  for (double e : table.eps())
    if (table.f_at(e) > M_E) grid.push_back(e);
  if (grid.size() > 16) {
    std::vector<double> sub;
    const std::size_t stride = grid.size() / 16;
    for (std::size_t i = 0; i < grid.size(); i += stride) sub.push_back(grid[i]);
    grid = sub;
  }

  std::ostringstream os;
  os << "# tilt-negligibility\n";
  os << check_esscher_negligible(model, grid).to_text();
  os << "\n# compensator decay\n";
  os << check_condition_M(model, table, {1.5, 2.0}, 40).to_text();
  os << "\n# variance-vs-rate ratio\n";
  os << check_flargeru(model, table).to_text();
  write_file(out_dir, "conditions.txt", os.str());
  log << "condition reports written\n";
  return 0;
}

}  // namespace levysd
