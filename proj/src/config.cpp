#include "levysd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "levysd/errors.hpp"

namespace levysd {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& v, int line) {
  std::size_t used = 0;
  double x;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: " + v, line);
  }
  if (used != v.size()) throw ConfigError("trailing characters after number: " + v, line);
  return x;
}

long long parse_int(const std::string& v, int line) {
  const double x = parse_double(v, line);
  if (x != std::floor(x)) throw ConfigError("expected an integer: " + v, line);
  return static_cast<long long>(x);
}

std::vector<double> parse_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty list element", line);
    out.push_back(parse_double(item, line));
  }
  if (out.empty()) throw ConfigError("empty list", line);
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    const std::string key = trim(raw.substr(0, eq));
    const std::string val = trim(raw.substr(eq + 1));
    if (key.empty() || val.empty()) throw ConfigError("expected key = value", line);

    if (key == "model.family") cfg.family = val;
    else if (key == "model.gamma") cfg.gamma = parse_double(val, line);
    else if (key == "model.sigma2") cfg.sigma2 = parse_double(val, line);
    else if (key == "model.c1") cfg.c1 = parse_double(val, line);
    else if (key == "model.alpha1") cfg.alpha1 = parse_double(val, line);
    else if (key == "model.c2") cfg.c2 = parse_double(val, line);
    else if (key == "model.alpha2") cfg.alpha2 = parse_double(val, line);
    else if (key == "model.alpha") cfg.alpha = parse_double(val, line);
    else if (key == "model.gamma_exp") cfg.gamma_exp = parse_double(val, line);
    else if (key == "model.scale") cfg.scale = parse_double(val, line);
    else if (key == "model.a") cfg.a = parse_double(val, line);
    else if (key == "model.b") cfg.b = parse_double(val, line);
    else if (key == "model.mu") cfg.mu = parse_double(val, line);
    else if (key == "model.sigma") cfg.sigma = parse_double(val, line);
    else if (key == "model.sub_family") cfg.sub_family = val;
    else if (key == "model.sub_c") cfg.sub_c = parse_double(val, line);
    else if (key == "model.sub_rho") cfg.sub_rho = parse_double(val, line);
    else if (key == "model.sub_a") cfg.sub_a = parse_double(val, line);
    else if (key == "model.sub_b") cfg.sub_b = parse_double(val, line);
    else if (key == "model.gamma_a") cfg.gamma_a = parse_double(val, line);
    else if (key == "model.table_file") cfg.table_file = val;
    else if (key == "rate.eps_min") cfg.eps_min = parse_double(val, line);
    else if (key == "rate.eps_max") cfg.eps_max = parse_double(val, line);
    else if (key == "rate.n_points") cfg.n_points = static_cast<int>(parse_int(val, line));
    else if (key == "norming.lambda") cfg.lambda = parse_double(val, line);
    else if (key == "norming.t_max") cfg.t_max = parse_double(val, line);
    else if (key == "norming.t_min") cfg.t_min = parse_double(val, line);
    else if (key == "norming.n_points") cfg.norming_points = static_cast<int>(parse_int(val, line));
    else if (key == "simulate.n_paths") cfg.n_paths = parse_int(val, line);
    else if (key == "simulate.n_steps") cfg.n_steps = static_cast<int>(parse_int(val, line));
    else if (key == "simulate.delta") cfg.delta = parse_double(val, line);
    else if (key == "simulate.seed") cfg.seed = static_cast<std::uint64_t>(parse_int(val, line));
    else if (key == "simulate.refine_levels") cfg.refine_levels = static_cast<int>(parse_int(val, line));
    else if (key == "simulate.small_jump_mode") cfg.small_jump_mode = val;
    else if (key == "simulate.t") cfg.sim_t = parse_double(val, line);
    else if (key == "simulate.eps") cfg.sim_eps = parse_double(val, line);
    else if (key == "verify.t_grid") cfg.t_grid = parse_list(val, line);
    else if (key == "verify.eps_grid") cfg.eps_grid = parse_list(val, line);
    else if (key == "verify.r") cfg.r = parse_double(val, line);
    else if (key == "verify.k_min") cfg.k_min = static_cast<int>(parse_int(val, line));
    else if (key == "verify.k_max") cfg.k_max = static_cast<int>(parse_int(val, line));
    else throw ConfigError("unknown key: " + key, line);
  }

  // range validation up front, before any computation
  if (!(cfg.sigma2 >= 0.0)) throw ConfigError("model.sigma2 must be >= 0", 0);
  if (!(cfg.eps_min > 0.0) || !(cfg.eps_min < cfg.eps_max) || cfg.eps_max > 1.0)
    throw ConfigError("need 0 < rate.eps_min < rate.eps_max <= 1", 0);
  if (cfg.n_points < 2) throw ConfigError("rate.n_points must be >= 2", 0);
  if (cfg.lambda && !(*cfg.lambda > 0.0)) throw ConfigError("norming.lambda must be > 0", 0);
  if (!(cfg.t_max > 0.0) || cfg.t_max > kDefaultTMax)
    throw ConfigError("norming.t_max must lie in (0, e^-e]", 0);
  if (!(cfg.t_min > 0.0) || !(cfg.t_min < cfg.t_max))
    throw ConfigError("need 0 < norming.t_min < norming.t_max", 0);
  if (cfg.norming_points < 2) throw ConfigError("norming.n_points must be >= 2", 0);
  if (cfg.n_paths < 100) throw ConfigError("simulate.n_paths must be >= 100", 0);
  if (cfg.n_steps < 16) throw ConfigError("simulate.n_steps must be >= 16", 0);
  if (!(cfg.delta > 0.0) || !(cfg.delta < 1.0))
    throw ConfigError("simulate.delta must lie in (0, 1)", 0);
  if (cfg.refine_levels < 0 || cfg.refine_levels > 16)
    throw ConfigError("simulate.refine_levels must lie in [0, 16]", 0);
  if (cfg.small_jump_mode != "gauss" && cfg.small_jump_mode != "drop")
    throw ConfigError("simulate.small_jump_mode must be gauss or drop", 0);
  if (!(cfg.r > 0.0) || !(cfg.r < 1.0)) throw ConfigError("verify.r must lie in (0, 1)", 0);
  if (cfg.k_min < 1 || cfg.k_max <= cfg.k_min)
    throw ConfigError("need 1 <= verify.k_min < verify.k_max", 0);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

LevyModel tabulated_from_file(const RunConfig& cfg) {
  if (cfg.table_file.empty())
    throw ConfigError("model.table_file is required for the tabulated family", 0);
  std::ifstream in(cfg.table_file);
  if (!in) throw ConfigError("cannot open table file: " + cfg.table_file, 0);
  TabulatedDensity tab;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string f1, f2, f3;
    if (!std::getline(ss, f1, ',') || !std::getline(ss, f2, ',') || !std::getline(ss, f3))
      throw ConfigError("table row needs x,dens_pos,dens_neg", lineno);
    tab.abs_x.push_back(parse_double(trim(f1), lineno));
    tab.dens_pos.push_back(parse_double(trim(f2), lineno));
    tab.dens_neg.push_back(parse_double(trim(f3), lineno));
  }
  return LevyModel(cfg.gamma.value_or(0.0), cfg.sigma2, std::move(tab));
}

}  // namespace

LevyModel model_from_config(const RunConfig& cfg) {
  const double gamma = cfg.gamma.value_or(0.0);
  if (cfg.family == "brownian") {
    return LevyModel::brownian(cfg.sigma2, gamma);
  }
  if (cfg.family == "two_sided_polynomial") {
    return LevyModel(gamma, cfg.sigma2,
                     TwoSidedPolynomial{cfg.c1, cfg.alpha1, cfg.c2, cfg.alpha2});
  }
  if (cfg.family == "symmetric_log_polynomial") {
    return LevyModel(gamma, cfg.sigma2,
                     SymmetricLogPolynomial{cfg.alpha, cfg.gamma_exp, cfg.scale});
  }
  if (cfg.family == "gamma_jumps") {
    if (cfg.gamma) {
      return LevyModel(*cfg.gamma, 0.0, GammaJumps{cfg.a, cfg.b, cfg.mu, cfg.sigma});
    }
    return LevyModel::variance_gamma(cfg.a, cfg.b, cfg.mu, cfg.sigma);
  }
  if (cfg.family == "subordinated_bm") {
    SubordinatorSpec sub;
    if (cfg.sub_family == "stable") {
      sub.kind = SubordinatorSpec::Kind::Stable;
      sub.c = cfg.sub_c;
      sub.rho = cfg.sub_rho;
    } else if (cfg.sub_family == "gamma") {
      sub.kind = SubordinatorSpec::Kind::Gamma;
      sub.shape = cfg.sub_a;
      sub.rate = cfg.sub_b;
    } else {
      throw UnknownFamilyError("model.sub_family must be stable or gamma");
    }
    return LevyModel::subordinated_bm(sub, cfg.gamma_a, cfg.sigma);
  }
  if (cfg.family == "tabulated") {
    return tabulated_from_file(cfg);
  }
  throw UnknownFamilyError("unknown model.family: " + cfg.family);
}

PathConfig path_config_from(const RunConfig& cfg) {
  PathConfig pc;
  pc.n_steps = cfg.n_steps;
  pc.small_jump_cutoff = cfg.delta;
  pc.small_jump_mode = cfg.small_jump_mode == "drop"
                           ? PathConfig::SmallJumpMode::Drop
                           : PathConfig::SmallJumpMode::GaussianApprox;
  pc.seed = cfg.seed;
  pc.refine_levels = cfg.refine_levels;
  return pc;
}

}  // namespace levysd
