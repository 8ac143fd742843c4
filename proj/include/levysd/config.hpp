#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levysd/levy_model.hpp"
#include "levysd/norming.hpp"
#include "levysd/simulate.hpp"

namespace levysd {

// Flat `section.key = value` text config. Unknown keys are rejected with the
// offending line number; `#` starts a comment.
struct RunConfig {
  // [model]
  std::string family = "brownian";
  std::optional<double> gamma;
  double sigma2 = 0.0;
  double c1 = 0.0, alpha1 = 0.5, c2 = 0.0, alpha2 = 0.5;
  double alpha = 1.0, gamma_exp = 0.0, scale = 1.0;
  double a = 1.0, b = 1.0, mu = 0.0, sigma = 1.0;
  std::string sub_family = "stable";
  double sub_c = 1.0, sub_rho = 0.5, sub_a = 1.0, sub_b = 1.0, gamma_a = 0.0;
  std::string table_file;

  // [rate]
  double eps_min = 1e-5;
  double eps_max = 0.5;
  int n_points = 120;

  // [norming]
  std::optional<double> lambda;  // never defaulted; exponent-level sensitivity
  double t_max = kDefaultTMax;
  double t_min = 1e-6;
  int norming_points = 50;

  // [simulate]
  long long n_paths = 10000;
  int n_steps = 1024;
  double delta = 0.01;
  std::uint64_t seed = 12345;
  int refine_levels = 2;
  std::string small_jump_mode = "gauss";
  std::optional<double> sim_t;
  std::optional<double> sim_eps;

  // [verify]
  std::vector<double> t_grid;
  std::vector<double> eps_grid;
  double r = 0.5;
  int k_min = 5;
  int k_max = 40;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

LevyModel model_from_config(const RunConfig& cfg);
PathConfig path_config_from(const RunConfig& cfg);

}  // namespace levysd
