#include "kellerscope/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <string>

#include "kellerscope/check.hpp"
#include "kellerscope/csv.hpp"
#include "kellerscope/snapshot.hpp"

namespace kellerscope {

namespace fs = std::filesystem;

namespace {

fs::path output_dir(const RunConfig& cfg, const CommandOptions& opts) {
    fs::path dir = opts.out_dir.value_or(cfg.output.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

void print_summary(const RunResult& result, Outcome outcome, std::ostream& out) {
    const SimState& s = result.final;
    double peak = 0.0;
    for (const Sample& sm : result.series) peak = std::max(peak, sm.sup_u);
    out << "status=" << to_string(s.status) << " outcome=" << to_string(outcome) << " t=" << format_number(s.t)
        << " steps=" << s.steps << " sup_u_max=" << format_number(peak) << '\n';
}

int finish_run(const RunConfig& cfg, const fs::path& dir, const RunResult& result, std::ostream& out,
               std::ostream& err) {
    write_text_file((dir / cfg.output.series).string(), format_series_csv(result.series));
    write_snapshot(result.final, (dir / cfg.output.snapshot).string());
    if (result.error) err << "solver failure: " << *result.error << '\n';
    const Outcome outcome = result.error ? Outcome::Undecided : classify_run(result.final, result.series, cfg.classify);
    print_summary(result, outcome, out);
    return exit_code_for(outcome);
}

} // namespace

int resolve_workers(const RunConfig& cfg, const CommandOptions& opts) {
    if (opts.workers && *opts.workers > 0) return *opts.workers;
    if (cfg.sweep && cfg.sweep->workers > 0) return cfg.sweep->workers;
    if (const char* env = std::getenv("KELLERSCOPE_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0 && n < 4096) return static_cast<int>(n);
    }
    return 1;
}

int exit_code_for(Outcome o) {
    switch (o) {
    case Outcome::Bounded:
        return kExitOk;
    case Outcome::BlowUp:
        return kExitBlowUp;
    case Outcome::Undecided:
        return kExitUndecided;
    }
    return kExitUndecided;
}

int cmd_run(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.resume) return cmd_resume(cfg, opts, out, err);
    try {
        const fs::path dir = output_dir(cfg, opts);
        auto [u0, v0] = make_initial(cfg.initial, cfg.domain, cfg.model, cfg.seed);
        const RunResult result = run(cfg.domain, u0, v0, cfg.model, cfg.stepper);
        return finish_run(cfg, dir, result, out, err);
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_resume(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const fs::path dir = output_dir(cfg, opts);
        const std::string path = opts.resume.value_or((dir / cfg.output.snapshot).string());
        SimState state = read_snapshot(path, cfg.domain);
        if (state.t >= cfg.stepper.t_end) {
            err << "snapshot time " << format_number(state.t) << " is already at or past t_end\n";
            return kExitFailure;
        }
        const RunResult result = run_from(std::move(state), cfg.model, cfg.stepper);
        return finish_run(cfg, dir, result, out, err);
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_sweep(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const fs::path dir = output_dir(cfg, opts);
        const SweepSpec spec = make_sweep_spec(cfg);
        const std::vector<RunRecord> records = run_sweep(spec, resolve_workers(cfg, opts));
        const RegimeMap map = regime_map(records);
        write_text_file((dir / cfg.output.records).string(), format_records_csv(records));
        write_text_file((dir / cfg.output.regime_map).string(), format_regime_csv(map));
        write_text_file((dir / "timings.csv").string(), format_timings_csv(records));

        out << "runs=" << records.size() << " cells=" << map.total << " agree=" << map.matches
            << " agreement=" << format_number(map.agreement_fraction) << '\n';
        for (const auto& v : map.monotonicity_violations)
            out << "monotonicity chi=" << format_number(v.chi) << " p=" << format_number(v.p)
                << " bounded_at_mu=" << format_number(v.mu_bounded) << " not_bounded_at_mu=" << format_number(v.mu_other)
                << '\n';
        return kExitOk;
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
}

std::string theta0_row(double gamma0, double chi, double c_reg) {
    const Theta0 t = theta0(gamma0, chi, c_reg);
    return format_number(gamma0) + "," + format_number(chi) + "," + format_number(c_reg) + "," +
           format_number(t.eta_star) + "," + format_number(t.mu_min) + "," + format_number(t.theta0);
}

int cmd_theta0(double gamma0, double chi, double c_reg, std::ostream& out, std::ostream& err) {
    try {
        out << theta0_row(gamma0, chi, c_reg) << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<CheckResult> results;
    try {
        results = run_invariant_checks(cfg);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
    bool ok = true;
    for (const CheckResult& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (!r.passed && !r.detail.empty()) out << "  " << r.detail;
        out << '\n';
        ok = ok && r.passed;
    }
    return ok ? kExitOk : kExitFailure;
}

} // namespace kellerscope
