#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kellerscope/grid.hpp"
#include "kellerscope/model.hpp"

namespace kellerscope {

struct StepperConfig {
    double dt_init = 1e-3;
    double dt_min = 1e-12;
    double dt_max = 1e-1;
    double safety = 0.5; // CFL safety factor in (0, 1]
    // Sup-norm trigger for the blow-up detector. Unset means
    // 1e6 * max(1, sup u0), resolved when a run starts.
    std::optional<double> blowup_threshold;
    double t_end = 1.0;
    int observer_stride = 10;
    double observer_gamma = 3.0;
    double helmholtz_tol = 1e-10;
    int helmholtz_max_iter = 20000;
    // Consecutive steps with the stable step pinned below dt_min before
    // the run is declared stalled.
    int stall_steps = 100;

    bool operator==(const StepperConfig&) const = default;
};

// Throws DomainError on any violated constraint.
void validate(const StepperConfig& cfg);

enum class Status { Running, Finished, BlowUp, StalledDt };

std::string_view to_string(Status s);
Status status_from_string(std::string_view name);

struct SimState {
    Domain domain;
    double t = 0.0;
    Field u;
    Field v;
    std::int64_t steps = 0;
    Status status = Status::Running;
    int pinned_steps = 0;
};

SimState initial_state(const Domain& d, Field u0, Field v0);

struct HelmholtzResult {
    Field w;
    int iterations = 0;
    double residual = 0.0; // ||(alpha I - lap) w - rhs||_inf
};

// Solves (alpha I - lap_h) w = rhs with the Neumann Laplacian. 1D uses
// tridiagonal elimination, 2D Jacobi-preconditioned conjugate gradients
// started from `guess` when given. Throws SolverError when the residual
// does not reach tol * ||rhs||_inf within max_iter iterations.
HelmholtzResult solve_helmholtz(const Field& rhs, double alpha, const Domain& d, double tol = 1e-10,
                                int max_iter = 20000, const Field* guess = nullptr);

// (alpha I - lap_h) w
Field apply_helmholtz(const Field& w, double alpha, const Domain& d);

struct DtLimits {
    double diffusion;   // h^2 / (2 dim max phi(u))
    double advection;   // min over faces of h / |chi grad_h v|
    double reaction;    // 1 / (a + 2 mu max u + 1e-30)
    double positivity;  // 1 / max_cell(sum_faces phi_f/h^2 + sum_outflow |w_f|/h)
    double combined() const;
};

DtLimits dt_limits(const Field& u, const Field& v, const ModelParams& params, const Domain& d);

// safety * min(limits), clipped to [dt_min, dt_max].
double stable_dt(const Field& u, const Field& v, const ModelParams& params, const Domain& d,
                 const StepperConfig& cfg);

// One IMEX step: implicit v, then explicit upwind transport and diffusion
// for u with the -mu u^2 sink treated semi-implicitly. Requires
// status == Running; throws PreconditionError otherwise.
SimState step(const SimState& state, const ModelParams& params, const StepperConfig& cfg);

struct Sample {
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    double sup_u = 0.0;
    double sup_v = 0.0;
    double l2_u = 0.0;
    double lgamma_u = 0.0;
    Status status = Status::Running;
};

Sample observe(const SimState& state, double dt, double gamma);

struct RunResult {
    SimState final;
    std::vector<Sample> series;
    std::optional<std::string> error; // solver failure that ended the run early
};

// Called with every sampled state (including the first and the last).
using StateObserver = std::function<void(const SimState&, const Sample&)>;

// Steps until the status leaves Running. A default blowup threshold is
// resolved from sup u0 before the first step.
RunResult run(const Domain& d, const Field& u0, const Field& v0, const ModelParams& params, StepperConfig cfg,
              const StateObserver& observer = {});

// Continues an existing state (for resume); the blowup threshold must
// already be resolved or is resolved from the state's current u.
RunResult run_from(SimState state, const ModelParams& params, StepperConfig cfg, const StateObserver& observer = {});

double resolved_blowup_threshold(const StepperConfig& cfg, const Field& u0);

} // namespace kellerscope
