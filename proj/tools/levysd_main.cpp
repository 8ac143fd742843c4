#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "levysd/commands.hpp"
#include "levysd/errors.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  long long seed = -1;
};

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config_path, "model/run configuration file")
      ->required();
  sub->add_option("--out", opt.out_dir, "output directory");
  sub->add_option("--seed", opt.seed, "override simulate.seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"small-deviation rates and small-time norming functions for Levy processes"};
  app.require_subcommand(1);

  Options opt;
  using Cmd = std::function<int(const levysd::RunConfig&, const std::string&, std::ostream&)>;
  Cmd selected;

  auto wire = [&](const char* name, const char* help, Cmd fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, opt);
    sub->callback([&selected, fn] { selected = fn; });
  };

  wire("rate", "tabulate the small-deviation rate function F", levysd::cmd_rate);
  wire("norming", "emit the norming curve b(t)", levysd::cmd_norming);
  wire("sd-bounds", "emit the two-sided bounds for -log P(||X||_t <= eps)",
       levysd::cmd_sd_bounds);
  wire("estimate-sd", "Monte Carlo estimate of P(||X||_t <= eps)",
       levysd::cmd_estimate_sd);
  wire("verify-sandwich", "check the Monte Carlo -log p band against the bounds",
       levysd::cmd_verify_sandwich);
  wire("verify-lil", "estimate liminf ||X||_t / b(t) along a geometric grid",
       levysd::cmd_verify_lil);
  wire("check-conditions", "run the side-condition diagnostics",
       levysd::cmd_check_conditions);

  CLI11_PARSE(app, argc, argv);

  try {
    levysd::RunConfig cfg = levysd::parse_config_file(opt.config_path);
    if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
    return selected(cfg, opt.out_dir, std::cout);
  } catch (const levysd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const levysd::NoEstimableCellsError& e) {
    std::cerr << "NoEstimableCells: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
