#include "kellerscope/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kellerscope/diagnostics.hpp"

namespace kellerscope {

void validate(const StepperConfig& cfg) {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw DomainError(msg);
    };
    require(cfg.dt_min > 0.0 && cfg.dt_init > 0.0 && cfg.dt_max > 0.0, "time steps must be positive");
    require(cfg.dt_min <= cfg.dt_init && cfg.dt_init <= cfg.dt_max, "need dt_min <= dt_init <= dt_max");
    require(cfg.safety > 0.0 && cfg.safety <= 1.0, "safety must lie in (0, 1]");
    require(!cfg.blowup_threshold || *cfg.blowup_threshold > 1.0, "blowup_threshold must exceed 1");
    require(cfg.t_end > 0.0 && std::isfinite(cfg.t_end), "t_end must be positive");
    require(cfg.observer_stride >= 1, "observer_stride must be a positive integer");
    require(cfg.observer_gamma >= 1.0, "observer_gamma must be >= 1");
    require(cfg.helmholtz_tol > 0.0, "helmholtz_tol must be positive");
    require(cfg.helmholtz_max_iter >= 1, "helmholtz_max_iter must be positive");
    require(cfg.stall_steps >= 1, "stall_steps must be positive");
}

std::string_view to_string(Status s) {
    switch (s) {
    case Status::Running:
        return "running";
    case Status::Finished:
        return "finished";
    case Status::BlowUp:
        return "blowup";
    case Status::StalledDt:
        return "stalled_dt";
    }
    return "running";
}

Status status_from_string(std::string_view name) {
    if (name == "running") return Status::Running;
    if (name == "finished") return Status::Finished;
    if (name == "blowup") return Status::BlowUp;
    if (name == "stalled_dt") return Status::StalledDt;
    throw DomainError("unknown status '" + std::string(name) + "'");
}

SimState initial_state(const Domain& d, Field u0, Field v0) {
    require_on(u0, d, "initial u");
    require_on(v0, d, "initial v");
    if (u0.min() < 0.0 || v0.min() < 0.0) throw PreconditionError("initial data must be nonnegative");
    SimState s;
    s.domain = d;
    s.u = std::move(u0);
    s.v = std::move(v0);
    return s;
}

Field apply_helmholtz(const Field& w, double alpha, const Domain& d) {
    require_on(w, d, "apply_helmholtz");
    const std::size_t nx = d.nx();
    const std::size_t ny = d.ny();
    const double cx = 1.0 / (d.spacing(0) * d.spacing(0));
    const double cy = d.dim() == 2 ? 1.0 / (d.spacing(1) * d.spacing(1)) : 0.0;
    std::vector<double> out(d.size());
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = d.index(i, j);
            const double c = w[k];
            double lx = 0.0;
            if (i + 1 < nx) lx += w[k + 1] - c;
            if (i > 0) lx -= c - w[k - 1];
            double ly = 0.0;
            if (j + 1 < ny) ly += w[k + nx] - c;
            if (j > 0) ly -= c - w[k - nx];
            out[k] = alpha * c - (cx * lx + cy * ly);
        }
    }
    return Field(d.shape(), std::move(out));
}

namespace {

double residual_inf(const Field& w, const Field& rhs, double alpha, const Domain& d) {
    Field r = apply_helmholtz(w, alpha, d);
    r -= rhs;
    return r.sup_abs();
}

HelmholtzResult solve_tridiagonal(const Field& rhs, double alpha, const Domain& d) {
    const std::size_t n = d.nx();
    const double c = 1.0 / (d.spacing(0) * d.spacing(0));
    // Thomas elimination; diagonal alpha + 2c in the interior, alpha + c at
    // the mirrored ends, off-diagonals -c.
    std::vector<double> cp(n), dp(n);
    double diag = alpha + c;
    cp[0] = -c / diag;
    dp[0] = rhs[0] / diag;
    for (std::size_t i = 1; i < n; ++i) {
        diag = (i + 1 == n ? alpha + c : alpha + 2.0 * c);
        const double m = diag + c * cp[i - 1];
        cp[i] = -c / m;
        dp[i] = (rhs[i] + c * dp[i - 1]) / m;
    }
    std::vector<double> w(n);
    w[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) w[i] = dp[i] - cp[i] * w[i + 1];
    HelmholtzResult out{Field(d.shape(), std::move(w)), 1, 0.0};
    out.residual = residual_inf(out.w, rhs, alpha, d);
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double inf_norm(const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::abs(x));
    return s;
}

HelmholtzResult solve_cg(const Field& rhs, double alpha, const Domain& d, double target, int max_iter,
                         const Field* guess) {
    const std::size_t nx = d.nx();
    const std::size_t ny = d.ny();
    const double cx = 1.0 / (d.spacing(0) * d.spacing(0));
    const double cy = 1.0 / (d.spacing(1) * d.spacing(1));
    std::vector<double> inv_diag(d.size());
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const double nbx = (i > 0) + (i + 1 < nx);
            const double nby = (j > 0) + (j + 1 < ny);
            inv_diag[d.index(i, j)] = 1.0 / (alpha + nbx * cx + nby * cy);
        }

    Field x = guess ? *guess : Field(d.shape(), std::vector<double>(d.size(), 0.0));
    if (!guess)
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = rhs[k] * inv_diag[k];

    int iterations = 0;
    double true_res = 0.0;
    // Recurrence residuals drift from the true residual; restart from the
    // true residual whenever the recurrence claims convergence too early.
    for (int restart = 0; restart < 4; ++restart) {
        std::vector<double> r = (rhs - apply_helmholtz(x, alpha, d)).data();
        true_res = inf_norm(r);
        if (true_res <= target) return {std::move(x), iterations, true_res};

        std::vector<double> z(r.size()), p(r.size());
        for (std::size_t k = 0; k < r.size(); ++k) z[k] = r[k] * inv_diag[k];
        p = z;
        double rz = dot(r, z);
        while (iterations < max_iter) {
            ++iterations;
            const Field ap_field = apply_helmholtz(Field(d.shape(), p), alpha, d);
            const auto& ap = ap_field.data();
            const double pap = dot(p, ap);
            if (!(pap > 0.0)) break;
            const double step = rz / pap;
            for (std::size_t k = 0; k < p.size(); ++k) {
                x[k] += step * p[k];
                r[k] -= step * ap[k];
            }
            if (inf_norm(r) <= 0.5 * target) break;
            for (std::size_t k = 0; k < r.size(); ++k) z[k] = r[k] * inv_diag[k];
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t k = 0; k < p.size(); ++k) p[k] = z[k] + beta * p[k];
        }
        if (iterations >= max_iter) break;
    }
    true_res = residual_inf(x, rhs, alpha, d);
    if (true_res <= target) return {std::move(x), iterations, true_res};
    std::ostringstream msg;
    msg << "helmholtz CG did not converge: residual " << true_res << " > " << target << " after " << iterations
        << " iterations";
    throw SolverError(msg.str(), true_res, iterations);
}

} // namespace

HelmholtzResult solve_helmholtz(const Field& rhs, double alpha, const Domain& d, double tol, int max_iter,
                                const Field* guess) {
    require_on(rhs, d, "solve_helmholtz");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("solve_helmholtz: alpha must be positive");
    if (guess) require_on(*guess, d, "solve_helmholtz (guess)");
    const double scale = rhs.sup_abs();
    if (scale == 0.0) return {Field::zeros(d), 0, 0.0};
    if (d.dim() == 1) {
        auto out = solve_tridiagonal(rhs, alpha, d);
        if (out.residual > tol * scale) {
            std::ostringstream msg;
            msg << "tridiagonal helmholtz residual " << out.residual << " exceeds " << tol * scale;
            throw SolverError(msg.str(), out.residual, 1);
        }
        return out;
    }
    return solve_cg(rhs, alpha, d, tol * scale, max_iter, guess);
}

double DtLimits::combined() const { return std::min({diffusion, advection, reaction, positivity}); }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-cell coefficient on u_i in the explicit update (diffusive outflow plus
// donor-cell outflow); dt * max coefficient <= 1 keeps u nonnegative.
double max_outflow_rate(const Field& u, const Field& v, const ModelParams& params, const Domain& d) {
    std::vector<double> rate(d.size(), 0.0);
    const auto h = d.spacings();
    for_each_interior_face(d, [&](std::size_t lo, std::size_t hi, int axis) {
        const double diff = phi(0.5 * (u[lo] + u[hi]), params) / (h[axis] * h[axis]);
        rate[lo] += diff;
        rate[hi] += diff;
        const double w = params.chi * (v[hi] - v[lo]) / h[axis];
        if (w > 0.0) rate[lo] += w / h[axis];
        if (w < 0.0) rate[hi] += -w / h[axis];
    });
    return *std::max_element(rate.begin(), rate.end());
}

} // namespace

DtLimits dt_limits(const Field& u, const Field& v, const ModelParams& params, const Domain& d) {
    require_on(u, d, "dt_limits (u)");
    require_on(v, d, "dt_limits (v)");
    DtLimits lim{kInf, kInf, kInf, kInf};

    double phi_max = 0.0;
    for (double s : u.values()) phi_max = std::max(phi_max, phi(s, params));
    const double h = d.min_spacing();
    lim.diffusion = h * h / (2.0 * d.dim() * phi_max);

    const auto hs = d.spacings();
    for_each_interior_face(d, [&](std::size_t lo, std::size_t hi, int axis) {
        const double w = std::abs(params.chi * (v[hi] - v[lo]) / hs[axis]);
        if (w > 0.0) lim.advection = std::min(lim.advection, hs[axis] / w);
    });

    if (params.reaction) lim.reaction = 1.0 / (params.a + 2.0 * params.mu * u.max() + 1e-30);

    const double rate = max_outflow_rate(u, v, params, d);
    if (rate > 0.0) lim.positivity = 1.0 / rate;
    return lim;
}

double stable_dt(const Field& u, const Field& v, const ModelParams& params, const Domain& d,
                 const StepperConfig& cfg) {
    const double raw = cfg.safety * dt_limits(u, v, params, d).combined();
    return std::clamp(raw, cfg.dt_min, cfg.dt_max);
}

double resolved_blowup_threshold(const StepperConfig& cfg, const Field& u0) {
    return cfg.blowup_threshold.value_or(1e6 * std::max(1.0, u0.max()));
}

SimState step(const SimState& state, const ModelParams& params, const StepperConfig& cfg) {
    if (state.status != Status::Running) throw PreconditionError("step: state is not running");
    const Domain& d = state.domain;
    const Field& u = state.u;

    const double raw = cfg.safety * dt_limits(u, state.v, params, d).combined();
    bool pinned = raw < cfg.dt_min;
    double dt = std::clamp(raw, cfg.dt_min, cfg.dt_max);
    if (state.steps == 0) dt = std::min(dt, cfg.dt_init);
    bool hits_end = false;
    if (state.t + dt >= cfg.t_end) {
        dt = cfg.t_end - state.t;
        hits_end = true;
    }

    // Implicit signal update: (tau/dt + 1 - lap) v_new = (tau/dt) v + u.
    // The donor-cell bound is re-checked against v_new because the
    // transport step uses the updated signal.
    Field v_new;
    for (int attempt = 0;; ++attempt) {
        const double relax = params.tau / dt;
        Field rhs = relax * state.v;
        rhs += u;
        v_new = solve_helmholtz(rhs, relax + 1.0, d, cfg.helmholtz_tol, cfg.helmholtz_max_iter, &state.v).w;
        const double rate = max_outflow_rate(u, v_new, params, d);
        if (dt * rate <= 1.0 || attempt == 4) break;
        const double reduced = cfg.safety / rate;
        if (reduced < cfg.dt_min) {
            pinned = true;
            if (dt <= cfg.dt_min) break;
            dt = cfg.dt_min;
        } else {
            dt = reduced;
        }
        hits_end = false;
    }

    Field flux = diffusive_divergence(u, params, d);
    flux -= chemotactic_divergence(u, v_new, params.chi, d);

    Field u_new(d.shape(), std::vector<double>(d.size()));
    const double tiny = 1e-14 * std::max(1.0, u.sup_abs());
    bool negative = false;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double explicit_part = u[k] + dt * flux[k];
        double value = explicit_part;
        if (params.reaction) value = (explicit_part + dt * params.a * u[k]) / (1.0 + dt * params.mu * u[k]);
        if (value < 0.0) {
            if (value >= -tiny) {
                value = 0.0;
            } else {
                negative = true;
            }
        }
        u_new[k] = value;
    }

    SimState next = state;
    if (!u_new.all_finite() || !v_new.all_finite()) {
        next.status = Status::BlowUp;
        return next;
    }
    if (negative) {
        // Only reachable when the step was forced above the stable limit.
        next.status = Status::StalledDt;
        return next;
    }

    next.u = std::move(u_new);
    next.v = std::move(v_new);
    next.t = hits_end ? cfg.t_end : state.t + dt;
    next.steps = state.steps + 1;
    next.pinned_steps = pinned ? state.pinned_steps + 1 : 0;

    const double threshold = resolved_blowup_threshold(cfg, state.u);
    if (next.u.max() > threshold) {
        next.status = Status::BlowUp;
    } else if (next.pinned_steps >= cfg.stall_steps) {
        next.status = Status::StalledDt;
    } else if (next.t >= cfg.t_end) {
        next.status = Status::Finished;
    }
    return next;
}

Sample observe(const SimState& state, double dt, double gamma) {
    const Domain& d = state.domain;
    Sample s;
    s.t = state.t;
    s.dt = dt;
    s.mass = integrate(state.u, d);
    s.sup_u = state.u.max();
    s.sup_v = state.v.max();
    Field clamped = state.u;
    for (double& x : clamped.data()) x = std::max(x, 0.0);
    s.l2_u = lgamma_norm(clamped, 2.0, d);
    s.lgamma_u = lgamma_norm(clamped, gamma, d);
    s.status = state.status;
    return s;
}

RunResult run_from(SimState state, const ModelParams& params, StepperConfig cfg, const StateObserver& observer) {
    validate(cfg);
    cfg.blowup_threshold = resolved_blowup_threshold(cfg, state.u);
    if (state.status == Status::Running && state.t >= cfg.t_end) state.status = Status::Finished;

    RunResult result;
    auto record = [&](const SimState& s, double dt) {
        result.series.push_back(observe(s, dt, cfg.observer_gamma));
        if (observer) observer(s, result.series.back());
    };

    record(state, 0.0);
    bool last_recorded = true;
    while (state.status == Status::Running) {
        SimState next;
        try {
            next = step(state, params, cfg);
        } catch (const SolverError& e) {
            result.error = e.what();
            break;
        }
        const double dt = next.t - state.t;
        state = std::move(next);
        last_recorded = false;
        if (state.steps % cfg.observer_stride == 0 || state.status != Status::Running) {
            record(state, dt);
            last_recorded = true;
        }
    }
    if (!last_recorded) record(state, 0.0);
    result.final = std::move(state);
    return result;
}

RunResult run(const Domain& d, const Field& u0, const Field& v0, const ModelParams& params, StepperConfig cfg,
              const StateObserver& observer) {
    return run_from(initial_state(d, u0, v0), params, cfg, observer);
}

} // namespace kellerscope
