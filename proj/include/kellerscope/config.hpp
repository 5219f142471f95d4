#pragma once

// Run configuration files.
//
//   # comment
//   [section]
//   key = value          lists are comma separated: cells = 64, 64
//
// Sections and keys (defaults in parentheses):
//   [domain]   dim (1), lengths (1.0), cells (64)
//   [model]    tau (1), chi (1), mu (1), a (0), k (1), p (0), s0_phi (2),
//              phi_family (canonical | linear), reaction (true)
//   [stepper]  dt_init (1e-3), dt_min (1e-12), dt_max (0.1), safety (0.5),
//              blowup_threshold (auto), t_end (1), observer_stride (10),
//              observer_gamma (3), helmholtz_tol (1e-10),
//              helmholtz_max_iter (20000), stall_steps (100)
//   [initial]  kind (gaussian_bump), background (0), amplitude (1),
//              width (0.1), relative (false), noise (0),
//              signal (steady | match_u | zero), seed (0)
//   [output]   dir (out), series (series.csv), snapshot (final.snap),
//              records (records.csv), regime_map (regime_map.csv)
//   [sweep]    chi, mu, p (lists), repeat (1), seed (0), workers (0 = env/1)
//   [theory]   q (1), gamma0 (dim + 1), c_reg (1)
//   [classify] window_fraction (0.2), max_drift (0.05), spike_factor (10)
//
// Unknown sections or keys and repeated keys are errors. Every error
// carries the line it refers to.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kellerscope/diagnostics.hpp"
#include "kellerscope/initial_conditions.hpp"
#include "kellerscope/model.hpp"
#include "kellerscope/stepper.hpp"
#include "kellerscope/sweep.hpp"

namespace kellerscope {

struct OutputSettings {
    std::string dir = "out";
    std::string series = "series.csv";
    std::string snapshot = "final.snap";
    std::string records = "records.csv";
    std::string regime_map = "regime_map.csv";

    bool operator==(const OutputSettings&) const = default;
};

struct SweepSettings {
    std::vector<double> chi;
    std::vector<double> mu;
    std::vector<double> p;
    int repeat = 1;
    std::uint64_t seed = 0;
    int workers = 0;

    bool operator==(const SweepSettings&) const = default;
};

struct TheorySettings {
    double q = 1.0;
    std::optional<double> gamma0;
    double c_reg = 1.0;

    bool operator==(const TheorySettings&) const = default;
};

struct RunConfig {
    Domain domain = Domain::interval(1.0, 64);
    ModelParams model;
    StepperConfig stepper;
    InitialCondition initial;
    std::uint64_t seed = 0;
    OutputSettings output;
    std::optional<SweepSettings> sweep;
    TheorySettings theory;
    ClassifyRules classify;

    bool operator==(const RunConfig& o) const;
};

struct ConfigIssue {
    int line; // 0 when the issue is not tied to a line
    std::string message;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

// Parses and validates; throws ConfigError listing every problem found.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Text that parse_config maps back to an equal RunConfig.
std::string serialize_config(const RunConfig& cfg);

SweepSpec make_sweep_spec(const RunConfig& cfg);

} // namespace kellerscope
