#include "kellerscope/check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kellerscope/initial_conditions.hpp"

namespace kellerscope {

namespace {

Field random_field(const Domain& d, SeededStream& rng, double lo, double hi) {
    Field f = Field::zeros(d);
    for (double& x : f.data()) x = lo + (hi - lo) * rng.uniform01();
    return f;
}

Field reflect_x(const Field& f, const Domain& d) {
    Field out = f;
    for (std::size_t j = 0; j < d.ny(); ++j)
        for (std::size_t i = 0; i < d.nx(); ++i) out[d.index(d.nx() - 1 - i, j)] = f[d.index(i, j)];
    return out;
}

std::string describe(double value, double bound) {
    std::ostringstream out;
    out.precision(6);
    out << value << " > " << bound;
    return out.str();
}

} // namespace

std::vector<CheckResult> run_invariant_checks(const RunConfig& cfg) {
    std::vector<CheckResult> results;
    auto add = [&](std::string name, bool ok, std::string detail = {}) {
        results.push_back({std::move(name), ok, ok ? std::string{} : std::move(detail)});
    };

    const Domain& d = cfg.domain;
    const ModelParams& params = cfg.model;
    SeededStream rng(cfg.seed ^ 0x5eedULL);
    const Field u = random_field(d, rng, 0.0, 2.0);
    const Field v = random_field(d, rng, 0.0, 2.0);
    const auto h = d.spacings();

    {
        const double scale = flux_magnitude(d, [&](auto lo, auto hi, int axis) { return (u[hi] - u[lo]) / h[axis]; });
        const double total = std::abs(integrate(laplacian_neumann(u, d), d));
        add("conservation/laplacian", total <= 1e-12 * scale, describe(total, 1e-12 * scale));
    }
    {
        const double scale = flux_magnitude(d, [&](auto lo, auto hi, int axis) {
            return phi(0.5 * (u[lo] + u[hi]), params) * (u[hi] - u[lo]) / h[axis];
        });
        const double total = std::abs(integrate(diffusive_divergence(u, params, d), d));
        add("conservation/diffusion", total <= 1e-12 * scale, describe(total, 1e-12 * scale));
    }
    {
        const double scale = flux_magnitude(d, [&](auto lo, auto hi, int axis) {
            return upwind_flux(params.chi * (v[hi] - v[lo]) / h[axis], u[lo], u[hi]);
        });
        const double total = std::abs(integrate(chemotactic_divergence(u, v, params.chi, d), d));
        add("conservation/chemotaxis", total <= 1e-12 * scale, describe(total, 1e-12 * scale));
    }
    {
        const Field c = Field::constant(d, 1.7);
        const bool ok = laplacian_neumann(c, d).sup_abs() == 0.0 && diffusive_divergence(c, params, d).sup_abs() == 0.0 &&
                        chemotactic_divergence(u, c, params.chi, d).sup_abs() == 0.0;
        add("constant_kernel", ok, "an operator is nonzero on a constant field");
    }
    {
        const Field ur = reflect_x(u, d);
        const Field vr = reflect_x(v, d);
        const bool ok = reflect_x(laplacian_neumann(u, d), d) == laplacian_neumann(ur, d) &&
                        reflect_x(diffusive_divergence(u, params, d), d) == diffusive_divergence(ur, params, d) &&
                        reflect_x(chemotactic_divergence(u, v, params.chi, d), d) ==
                            chemotactic_divergence(ur, vr, params.chi, d);
        add("mirror_symmetry", ok, "reflected inputs do not give reflected outputs");
    }

    const SteadyState star = homogeneous_steady_state(params);
    {
        const Field us = Field::constant(d, star.u_star);
        const Field vs = Field::constant(d, star.v_star);
        const double r = std::max(rhs_u(us, vs, params, d).sup_abs(), rhs_v(us, vs, params, d).sup_abs());
        add("steady_state/rhs", r <= 1e-12 * std::max(1.0, star.u_star * star.u_star),
            describe(r, 1e-12 * std::max(1.0, star.u_star * star.u_star)));

        StepperConfig sc = cfg.stepper;
        sc.t_end = 1e300;
        SimState s = initial_state(d, us, vs);
        for (int n = 0; n < 100 && s.status == Status::Running; ++n) s = step(s, params, sc);
        double drift = 0.0;
        for (std::size_t k = 0; k < s.u.size(); ++k)
            drift = std::max({drift, std::abs(s.u[k] - star.u_star), std::abs(s.v[k] - star.v_star)});
        add("steady_state/fixed_point", drift <= 1e-10, describe(drift, 1e-10));
    }

    {
        auto [u0, v0] = make_initial(cfg.initial, d, params, cfg.seed);
        StepperConfig sc = cfg.stepper;
        SimState s = initial_state(d, u0, v0);
        const double m0 = integrate(u0, d);
        const double bound = params.reaction ? std::max(m0, params.a * d.measure() / params.mu) * (1.0 + 1e-6) : m0;
        double worst_excess = 0.0;
        double min_value = 0.0;
        double worst_drift = 0.0;
        for (int n = 0; n < 500 && s.status == Status::Running; ++n) {
            s = step(s, params, sc);
            const double m = integrate(s.u, d);
            if (params.reaction) {
                worst_excess = std::max(worst_excess, m - bound);
            } else {
                worst_drift = std::max(worst_drift, std::abs(m - m0) / std::max(m0, 1e-300));
            }
            min_value = std::min({min_value, s.u.min(), s.v.min()});
        }
        add("positivity", min_value >= 0.0, describe(-min_value, 0.0));
        if (params.reaction) {
            add("mass_bound", worst_excess <= 0.0, describe(worst_excess, 0.0));
        } else {
            add("mass_conservation", worst_drift <= 1e-12, describe(worst_drift, 1e-12));
        }
    }

    if (params.chi > 0.0) {
        const double g0 = cfg.theory.gamma0.value_or(d.dim() + 1.0);
        try {
            theta0(g0, params.chi, cfg.theory.c_reg);
            add("theta0/closed_form", true);
        } catch (const ConsistencyError& e) {
            add("theta0/closed_form", false, e.what());
        }
    }
    return results;
}

} // namespace kellerscope
