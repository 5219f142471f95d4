#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "kellerscope/config.hpp"

namespace kellerscope {

// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1, // usage, configuration or failed checks
    kExitBlowUp = 2,
    kExitUndecided = 3,
    kExitIo = 10,
};

struct CommandOptions {
    std::optional<std::string> out_dir;
    std::optional<int> workers;
    std::optional<std::string> resume;
};

// Worker count: --workers, then [sweep] workers, then KELLERSCOPE_WORKERS,
// then 1.
int resolve_workers(const RunConfig& cfg, const CommandOptions& opts);

int exit_code_for(Outcome o);

int cmd_run(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_resume(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_theta0(double gamma0, double chi, double c_reg, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Single CSV row: gamma0,chi,C_reg,eta_star,mu_min,theta0
std::string theta0_row(double gamma0, double chi, double c_reg);

} // namespace kellerscope
