// kellerscope: run, sweep, resume and inspect chemotaxis simulations.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "kellerscope/commands.hpp"

using namespace kellerscope;

namespace {

// Config problems exit 1, unreadable files exit 10.
std::optional<RunConfig> load_or_report(const std::string& path, int& code) {
    try {
        if (path.empty()) return RunConfig{};
        return load_config(path);
    } catch (const ConfigError& e) {
        for (const ConfigIssue& issue : e.issues()) {
            std::cerr << path;
            if (issue.line > 0) std::cerr << ':' << issue.line;
            std::cerr << ": " << issue.message << '\n';
        }
        code = kExitFailure;
    } catch (const IoError& e) {
        std::cerr << e.what() << '\n';
        code = kExitIo;
    }
    return std::nullopt;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Keller-Segel chemotaxis simulator and boundedness diagnostics"};
    app.require_subcommand(1);

    std::string config_path;
    CommandOptions opts;
    int workers = 0;
    std::string out_dir;
    std::string resume_path;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", config_path, "configuration file");
        if (need_config) opt->required();
        sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    };

    auto* run = app.add_subcommand("run", "simulate one configuration");
    add_common(run, true);
    run->add_option("--resume", resume_path, "continue from a snapshot instead of the initial condition");

    auto* resume = app.add_subcommand("resume", "continue a run from its snapshot");
    add_common(resume, true);
    resume->add_option("--resume", resume_path, "snapshot to read (default: the configured snapshot)");

    auto* sweep = app.add_subcommand("sweep", "map outcomes over a (chi, mu, p) grid");
    add_common(sweep, true);
    sweep->add_option("--workers", workers, "worker threads (default: KELLERSCOPE_WORKERS or 1)")
        ->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("check", "evaluate the invariant suite");
    check->add_option("--config", config_path, "configuration file (defaults if omitted)");

    double gamma0 = 0.0, chi = 0.0, c_reg = 0.0;
    auto* th = app.add_subcommand("theta0", "print gamma0,chi,C_reg,eta_star,mu_min,theta0");
    th->add_option("gamma0", gamma0)->required();
    th->add_option("chi", chi)->required();
    th->add_option("C_reg", c_reg)->required();

    CLI11_PARSE(app, argc, argv);

    if (!out_dir.empty()) opts.out_dir = out_dir;
    if (workers > 0) opts.workers = workers;
    if (!resume_path.empty()) opts.resume = resume_path;

    if (th->parsed()) return cmd_theta0(gamma0, chi, c_reg, std::cout, std::cerr);

    int code = kExitOk;
    const auto cfg = load_or_report(config_path, code);
    if (!cfg) return code;

    if (run->parsed()) return cmd_run(*cfg, opts, std::cout, std::cerr);
    if (resume->parsed()) return cmd_resume(*cfg, opts, std::cout, std::cerr);
    if (sweep->parsed()) return cmd_sweep(*cfg, opts, std::cout, std::cerr);
    return cmd_check(*cfg, std::cout, std::cerr);
}
