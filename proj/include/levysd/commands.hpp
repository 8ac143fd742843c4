#pragma once

#include <ostream>
#include <string>

#include "levysd/config.hpp"

namespace levysd {

// Command implementations shared by the CLI binary and the tests. Each writes
// its output files under out_dir and a short summary to `log`; the return
// value is the process exit code.
int cmd_rate(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_norming(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_sd_bounds(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_estimate_sd(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_verify_sandwich(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_verify_lil(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_check_conditions(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

}  // namespace levysd
