#pragma once

// Parameter-regime mapping over (chi, mu, p) grids.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kellerscope/diagnostics.hpp"
#include "kellerscope/initial_conditions.hpp"
#include "kellerscope/stepper.hpp"

namespace kellerscope {

struct SweepSpec {
    std::vector<double> chi_values;
    std::vector<double> mu_values;
    std::vector<double> p_values;
    Domain domain;
    ModelParams base_params;
    StepperConfig base_cfg;
    InitialCondition ic;
    int repeat = 1;
    std::uint64_t seed = 0;
    // Theory side of each record.
    double q = 1.0;
    std::optional<double> gamma0; // defaults to dim + 1
    double c_reg = 1.0;
    ClassifyRules rules;
};

// Throws DomainError on empty or non-ascending lists, nonpositive chi/mu or
// repeat < 1.
void validate(const SweepSpec& spec);

struct RunRecord {
    double chi = 0.0;
    double mu = 0.0;
    double p = 0.0;
    int replica = 0;
    ModelParams params;
    Outcome outcome = Outcome::Undecided;
    Status final_status = Status::Running;
    double sup_u_max = 0.0;
    double t_final = 0.0;
    std::int64_t steps = 0;
    TheoryRegime prediction = TheoryRegime::CriticalUndetermined;
    double theta0_est = 0.0;
    double wall_time = 0.0; // seconds; excluded from the records CSV
    std::string note;
};

// Seed of the IC perturbation stream for one replica.
std::uint64_t replica_seed(std::uint64_t sweep_seed, int replica);

// Runs every (chi, mu, p, replica) cell on `workers` threads. The returned
// list is ordered lexicographically by (chi, mu, p, replica) whatever the
// scheduling. Failing runs become Undecided records carrying a note.
std::vector<RunRecord> run_sweep(const SweepSpec& spec, int workers);

// Runs a single cell of the sweep (exposed for tests and bindings).
RunRecord run_cell(const SweepSpec& spec, double chi, double mu, double p, int replica);

struct RegimeRow {
    double chi;
    double mu;
    double p;
    int replicas;
    Outcome outcome; // worst over replicas: BlowUp > Undecided > Bounded
    TheoryRegime prediction;
    bool agree;      // predicts_bounded(prediction) == (outcome == Bounded)
};

struct MonotonicityViolation {
    double chi;
    double p;
    double mu_bounded; // smaller mu with a Bounded cell
    double mu_other;   // larger mu that is not Bounded
};

struct RegimeMap {
    std::vector<RegimeRow> rows;
    std::size_t matches = 0;
    std::size_t total = 0;
    double agreement_fraction = 0.0;
    std::vector<MonotonicityViolation> monotonicity_violations;
};

Outcome worst_outcome(Outcome a, Outcome b);

RegimeMap regime_map(const std::vector<RunRecord>& records);

} // namespace kellerscope
