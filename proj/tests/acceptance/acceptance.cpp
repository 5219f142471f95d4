// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kellerscope/commands.hpp"
#include "kellerscope/csv.hpp"
#include "kellerscope/diagnostics.hpp"
#include "kellerscope/initial_conditions.hpp"
#include "kellerscope/stepper.hpp"
#include "kellerscope/sweep.hpp"

using namespace kellerscope;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// ---- 1 -------------------------------------------------------------------

Verdict homogeneous_logistic() {
    ModelParams m;
    m.a = 2.0;
    m.mu = 1.0;
    m.tau = 1.0;
    const Domain d = Domain::rectangle(1.0, 1.0, 4, 4);
    StepperConfig cfg;
    cfg.dt_max = 1e-3;
    cfg.t_end = 5.0;
    cfg.observer_stride = 1;
    double worst = 0.0;
    double worst_v = 0.0;
    const RunResult r = run(d, Field::constant(d, 1.0), Field::constant(d, 1.0), m, cfg, [&](const SimState& s, const Sample&) {
        const double exact = 2.0 / (1.0 + std::exp(-2.0 * s.t));
        for (double x : s.u.values()) worst = std::max(worst, std::abs(x - exact));
        worst_v = std::max(worst_v, s.v.max() - s.v.min());
    });
    const bool ok = r.final.status == Status::Finished && worst <= 1e-3;
    return {ok, "max |u - logistic| = " + fmt("%.3e", worst) + " over t in [0, 5], dt = 1e-3"};
}

// ---- 2 -------------------------------------------------------------------

Verdict steady_state_fixed_point() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int set = 0; set < 5; ++set) {
        ModelParams m;
        m.tau = 0.2 + 2.0 * U(rng);
        m.chi = 0.1 + 10.0 * U(rng);
        m.mu = 0.1 + 5.0 * U(rng);
        m.a = 0.1 + 5.0 * U(rng);
        m.p = 2.0 * U(rng);
        m = checked(m);
        const auto st = homogeneous_steady_state(m);
        const Domain d = set % 2 ? Domain::interval(1.0 + U(rng), 24) : Domain::rectangle(1.0, 1.0 + U(rng), 10, 12);
        StepperConfig cfg;
        cfg.t_end = 1e300;
        cfg.dt_max = 0.01 + 0.5 * U(rng);
        cfg.dt_init = cfg.dt_max;
        SimState s = initial_state(d, Field::constant(d, st.u_star), Field::constant(d, st.v_star));
        for (int n = 0; n < 10000; ++n) {
            s = step(s, m, cfg);
            if (s.status != Status::Running) return {false, "status left Running at step " + std::to_string(n)};
        }
        for (std::size_t k = 0; k < s.u.size(); ++k)
            worst = std::max({worst, std::abs(s.u[k] - st.u_star), std::abs(s.v[k] - st.v_star)});
    }
    return {worst <= 1e-10, "max drift after 1e4 steps over 5 parameter sets = " + fmt("%.3e", worst)};
}

// ---- 3, 4 ----------------------------------------------------------------

struct RandomRunStats {
    double worst_negative = 0.0; // most negative entry / scale
    double worst_bound_excess = -1.0; // max over runs of mass / bound - 1
    double worst_ode_excess = -1.0; // max over runs of mass / m_ode - 1
    double ode_bound_excess = -1.0; // max of m_ode / bound - 1
    int runs = 0;
    int blowups = 0;
    double seconds = 0.0;
};

// RK4 for m' = a m - (mu/|Omega|) m^2 on [t0, t1].
double comparison_ode(double m, double a, double mu_over_vol, double t0, double t1) {
    const int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / 1e-3)));
    const double h = (t1 - t0) / n;
    auto f = [&](double x) { return a * x - mu_over_vol * x * x; };
    for (int i = 0; i < n; ++i) {
        const double k1 = f(m), k2 = f(m + 0.5 * h * k1), k3 = f(m + 0.5 * h * k2), k4 = f(m + h * k3);
        m += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return m;
}

const RandomRunStats& random_runs() {
    static RandomRunStats stats = [] {
        RandomRunStats st;
        const auto start = std::chrono::steady_clock::now();
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (int run_id = 0; run_id < 50; ++run_id) {
            ModelParams m;
            m.tau = 0.1 + 2.0 * U(rng);
            m.chi = 0.1 + 10.0 * U(rng);
            m.mu = 0.05 + 5.0 * U(rng);
            m.a = 3.0 * U(rng);
            m.k = 0.2 + U(rng);
            m.p = 2.0 * U(rng);
            if (run_id % 5 == 4) m.phi_family = PhiFamily::Linear;
            m = checked(m);
            const Domain d = run_id % 2 ? Domain::interval(0.5 + 2.0 * U(rng), 16 + rng() % 48)
                                        : Domain::rectangle(0.5 + U(rng), 0.5 + U(rng), 8 + rng() % 16, 8 + rng() % 16);
            // nonnegative data with exact zeros and sharp jumps
            Field u0 = Field::zeros(d), v0 = Field::zeros(d);
            const double amp = std::pow(10.0, 2.0 * U(rng) - 1.0);
            for (std::size_t k = 0; k < d.size(); ++k) {
                u0[k] = U(rng) < 0.3 ? 0.0 : amp * U(rng);
                v0[k] = U(rng) < 0.3 ? 0.0 : amp * U(rng);
            }
            StepperConfig cfg;
            cfg.t_end = 0.2 + 0.8 * U(rng);
            cfg.observer_stride = 1;

            const double vol = d.measure();
            const double m0 = integrate(u0, d);
            const double bound = std::max(m0, m.a * vol / m.mu) * (1.0 + 1e-6);
            double t_prev = 0.0;
            double m_ode = m0;
            const RunResult r = run(d, u0, v0, m, cfg, [&](const SimState& s, const Sample& sm) {
                const double scale = std::max(1.0, std::max(s.u.sup_abs(), s.v.sup_abs()));
                st.worst_negative = std::min({st.worst_negative, s.u.min() / scale, s.v.min() / scale});
                m_ode = comparison_ode(m_ode, m.a, m.mu / vol, t_prev, s.t);
                t_prev = s.t;
                st.worst_bound_excess = std::max(st.worst_bound_excess, sm.mass / bound - 1.0);
                st.ode_bound_excess = std::max(st.ode_bound_excess, m_ode / bound - 1.0);
                if (m_ode > 0.0) st.worst_ode_excess = std::max(st.worst_ode_excess, sm.mass / m_ode - 1.0);
            });
            st.blowups += r.final.status == Status::BlowUp;
            ++st.runs;
        }
        st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return st;
    }();
    return stats;
}

Verdict positivity() {
    const auto& st = random_runs();
    const bool ok = st.runs == 50 && st.worst_negative >= -1e-14 && st.seconds < 120.0;
    return {ok, "50 runs, most negative entry / scale = " + fmt("%.3e", st.worst_negative) + ", " +
                    fmt("%.1f s", st.seconds)};
}

Verdict mass_bound() {
    const auto& st = random_runs();
    // Jensen gives mass' <= a m - (mu/|Omega|) m^2, so the RK4 solution of the
    // comparison ODE should dominate the discrete mass as well as the bound.
    const bool ok = st.worst_bound_excess <= 0.0 && st.ode_bound_excess <= 0.0 && st.worst_ode_excess <= 1e-6;
    return {ok, "max mass/bound - 1 = " + fmt("%.3e", st.worst_bound_excess) +
                    ", max m_ode/bound - 1 = " + fmt("%.3e", st.ode_bound_excess) +
                    ", max mass/m_ode - 1 = " + fmt("%.3e", st.worst_ode_excess)};
}

// ---- 5 -------------------------------------------------------------------

Verdict conservation() {
    double worst = 0.0;
    for (int dim = 1; dim <= 2; ++dim) {
        ModelParams m;
        m.a = 0.0;
        m.reaction = false;
        m.chi = 2.0;
        m.p = 1.0;
        const Domain d = dim == 1 ? Domain::interval(2.0, 64) : Domain::rectangle(2.0, 2.0, 24, 24);
        InitialCondition ic;
        ic.kind = IcKind::TwoBumps;
        ic.background = 0.2;
        ic.width = 0.2;
        ic.noise = 0.3;
        auto [u0, v0] = make_initial(ic, d, m, 5);
        StepperConfig cfg;
        cfg.t_end = 1e300;
        SimState s = initial_state(d, u0, v0);
        const double m0 = integrate(u0, d);
        for (int n = 0; n < 10000 && s.status == Status::Running; ++n) {
            s = step(s, m, cfg);
            worst = std::max(worst, std::abs(integrate(s.u, d) - m0) / m0);
        }
        if (s.steps != 10000) return {false, "run stopped early with status " + std::string(to_string(s.status))};
    }
    return {worst <= 1e-12, "max relative mass drift over 1e4 steps (1D and 2D) = " + fmt("%.3e", worst)};
}

// ---- 6 -------------------------------------------------------------------

Verdict constants() {
    const auto start = std::chrono::steady_clock::now();
    double best = 1.0 * std::pow(2.0, -2.0); // gamma -> 1+
    for (double g = 1.0 + 1e-4; g <= 500.0; g += 1e-4) best = std::max(best, (1.0 / g) * std::pow(1.0 + 1.0 / g, -(g + 1.0)));
    const bool c2_ok = std::abs(c2_constant() - best) <= 1e-6 && std::abs(c2_constant() - 0.25) <= 1e-6;

    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double g0 = 1.05 + 8.0 * U(rng);
        const double chi = std::pow(10.0, 4.0 * U(rng) - 2.0);
        const double c = std::pow(10.0, 4.0 * U(rng) - 2.0);
        const Theta0 closed = theta0(g0, chi, c);
        const Theta0 golden = theta0_golden(g0, chi, c);
        worst = std::max(worst, std::abs(closed.mu_min - golden.mu_min) / closed.mu_min);
    }

    std::ostringstream out, err;
    const int code = cmd_theta0(3.0, 1.0, 2.0, out, err);
    std::vector<double> row;
    std::stringstream ss(out.str());
    for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
    const bool row_ok = code == 0 && row.size() == 6 && row[0] == 3 && row[1] == 1 && row[2] == 2 &&
                        std::abs(row[3] - 1.1066819) <= 1e-6 && std::abs(row[4] - 1.4755759) <= 1e-6 &&
                        std::abs(row[5] - 0.67770) <= 1e-5;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = c2_ok && worst <= 1e-10 && row_ok && secs < 5.0;
    return {ok, "c2 = " + fmt("%.8f", c2_constant()) + " (scan " + fmt("%.8f", best) + "), closed vs golden max rel = " +
                    fmt("%.2e", worst) + ", row " + out.str().substr(0, out.str().size() - 1) + ", " + fmt("%.2f s", secs)};
}

// ---- 7 -------------------------------------------------------------------

Verdict regime_consistency() {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool ok = true;
    for (double mu : {5.0, 10.0, 20.0}) {
        ModelParams m;
        m.p = 0.0;
        m.k = 1.0;
        m.chi = 1.0;
        m.mu = mu;
        m.a = 1.0;
        InitialCondition ic;
        ic.kind = IcKind::GaussianBump;
        ic.relative = true; // background u*, bump of 3 u* on top
        ic.background = 1.0;
        ic.amplitude = 3.0;
        ic.width = 0.5;
        StepperConfig cfg;
        cfg.t_end = 10.0;
        cfg.observer_stride = 20;
        double peak[2], last[2];
        Outcome outcome[2];
        for (int level = 0; level < 2; ++level) {
            const std::size_t n = level == 0 ? 32 : 64;
            const Domain d = Domain::rectangle(4.0, 4.0, n, n);
            auto [u0, v0] = make_initial(ic, d, m, 0);
            const RunResult r = run(d, u0, v0, m, cfg);
            outcome[level] = classify_run(r.final, r.series);
            peak[level] = 0.0;
            for (const Sample& s : r.series) peak[level] = std::max(peak[level], s.sup_u);
            last[level] = r.series.back().sup_u;
        }
        const double peak_rel = std::abs(peak[0] - peak[1]) / peak[1];
        const double last_rel = std::abs(last[0] - last[1]) / last[1];
        const bool cell_ok = outcome[0] == Outcome::Bounded && outcome[1] == Outcome::Bounded && peak_rel <= 0.05 &&
                             last_rel <= 0.05;
        ok = ok && cell_ok;
        detail << "mu=" << mu << ": " << to_string(outcome[0]) << "/" << to_string(outcome[1]) << " peak diff "
               << fmt("%.2f%%", 100 * peak_rel) << " final diff " << fmt("%.2f%%", 100 * last_rel) << "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail << fmt("%.1f s", secs);
    return {ok && secs < 600.0, detail.str()};
}

// ---- 8 -------------------------------------------------------------------

// Frozen from the first run of this exact instance.
constexpr double kGoldenBlowupTime = 0.00233775;

Verdict blowup_detector() {
    const auto start = std::chrono::steady_clock::now();
    ModelParams m;
    m.a = 0.0;
    m.reaction = false;
    m.phi_family = PhiFamily::Linear;
    m.k = 1.0;
    m.chi = 8.0;
    const Domain d = Domain::rectangle(1.0, 1.0, 64, 64);
    InitialCondition ic;
    ic.kind = IcKind::GaussianBump;
    ic.width = 0.1;
    ic.amplitude = 20.0 / (2.0 * M_PI * ic.width * ic.width); // mass ~ 20
    ic.signal = SignalInit::Steady;
    auto [u0, v0] = make_initial(ic, d, m, 0);
    StepperConfig cfg;
    cfg.t_end = 1.0;
    cfg.blowup_threshold = 50.0 * u0.max();
    const RunResult r = run(d, u0, v0, m, cfg);
    const Outcome o = classify_run(r.final, r.series);
    double peak = 0.0;
    for (const Sample& s : r.series) peak = std::max(peak, s.sup_u);
    const double growth = peak / u0.max();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = (o == Outcome::BlowUp || growth >= 1e3) && o != Outcome::Undecided && secs < 300.0;
    if (kGoldenBlowupTime > 0.0) ok = ok && std::abs(r.final.t - kGoldenBlowupTime) <= 0.01 * kGoldenBlowupTime;
    return {ok, "mass " + fmt("%.3f", integrate(u0, d)) + ", outcome " + std::string(to_string(o)) + " at t = " +
                    fmt("%.6g", r.final.t) + " after " + std::to_string(r.final.steps) + " steps, sup growth " +
                    fmt("%.1fx", growth) + ", " + fmt("%.1f s", secs)};
}

// ---- 9 -------------------------------------------------------------------

Verdict self_convergence() {
    const auto start = std::chrono::steady_clock::now();
    ModelParams m;
    m.p = 1.0;
    m.chi = 1.0;
    m.a = 1.0;
    m.mu = 1.0;
    m.tau = 1.0;
    const double t_end = 0.05;
    auto solve = [&](std::size_t n) {
        const Domain d = Domain::interval(1.0, n);
        const Field u0 = Field::sample(d, [](double x, double) { return 1.0 + 0.5 * std::cos(M_PI * x); });
        const Field v0 = Field::sample(d, [](double x, double) { return 1.0 - 0.3 * std::cos(M_PI * x); });
        StepperConfig cfg;
        const double h = 1.0 / n;
        cfg.dt_max = 0.08 * h * h; // fixed step, below every stability limit
        cfg.dt_init = cfg.dt_max;
        cfg.dt_min = std::min(cfg.dt_min, cfg.dt_max);
        cfg.t_end = t_end;
        cfg.observer_stride = 1000000;
        return run(d, u0, v0, m, cfg).final.u;
    };
    const std::size_t ref_n = 640;
    const Field ref = solve(ref_n);
    std::vector<double> errors;
    const std::vector<std::size_t> levels{20, 40, 80, 160};
    for (std::size_t n : levels) {
        const Field u = solve(n);
        const std::size_t ratio = ref_n / n;
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double avg = 0.0;
            for (std::size_t j = 0; j < ratio; ++j) avg += ref[i * ratio + j];
            avg /= static_cast<double>(ratio);
            err += std::abs(u[i] - avg) / n; // L1
        }
        errors.push_back(err);
    }
    std::ostringstream detail;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        const double order = std::log2(errors[i] / errors[i + 1]);
        ok = ok && order >= 0.8 && order <= 2.2;
        detail << "order(" << levels[i] << "->" << levels[i + 1] << ") = " << fmt("%.3f", order) << "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail << "L1 errors " << fmt("%.3e", errors.front()) << " .. " << fmt("%.3e", errors.back()) << "; "
           << fmt("%.1f s", secs);
    return {ok && secs < 60.0, detail.str()};
}

// ---- 10 ------------------------------------------------------------------

Verdict sweep_determinism() {
    const auto start = std::chrono::steady_clock::now();
    SweepSpec spec;
    spec.chi_values = {0.5, 1.0, 2.0};
    spec.mu_values = {2.0, 5.0, 10.0};
    spec.p_values = {0.0};
    spec.domain = Domain::rectangle(4.0, 4.0, 32, 32);
    spec.base_params.a = 1.0;
    spec.base_cfg.t_end = 2.0;
    spec.ic.kind = IcKind::GaussianBump;
    spec.ic.relative = true;
    spec.ic.background = 1.0;
    spec.ic.amplitude = 3.0;
    spec.ic.width = 0.5;
    spec.ic.noise = 0.05;
    spec.seed = 1234;
    const std::string one = format_records_csv(run_sweep(spec, 1));
    const std::string eight = format_records_csv(run_sweep(spec, 8));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = one == eight && secs < 300.0;
    return {ok, std::string(one == eight ? "byte-identical" : "DIFFERENT") + " records (" +
                    std::to_string(one.size()) + " bytes, 9 runs) for 1 vs 8 workers, " + fmt("%.1f s", secs)};
}

// ---- 11 ------------------------------------------------------------------

Verdict c_reg_estimator() {
    ModelParams m;
    m.tau = 1.0;
    const Domain z = Domain::interval(1.0, 32);
    std::vector<TimeSlice> zero, steady;
    for (int i = 0; i < 10; ++i) {
        zero.push_back({0.1 * i, Field::zeros(z), Field::zeros(z)});
        steady.push_back({0.1 * i, Field::constant(z, 0.7), Field::constant(z, 0.7)});
    }
    const double r_zero = estimate_C_reg(zero, 2.0, m, 0.0, z);
    const double r_steady = estimate_C_reg(steady, 2.0, m, 0.0, z);

    ModelParams bump = m;
    bump.chi = 1.0;
    bump.a = 1.0;
    bump.mu = 1.0;
    const double dt = 1e-5;
    auto ratio_at = [&](std::size_t n, std::optional<double> t_ref) {
        const Domain d = Domain::interval(1.0, n);
        InitialCondition ic;
        ic.background = 0.5;
        ic.amplitude = 2.0;
        ic.width = 0.08;
        auto [u0, v0] = make_initial(ic, d, bump, 0);
        StepperConfig cfg;
        cfg.dt_max = dt;
        cfg.dt_init = dt;
        cfg.t_end = 0.5;
        cfg.observer_stride = 500;
        std::vector<TimeSlice> slices;
        run(d, u0, v0, bump, cfg, [&](const SimState& s, const Sample&) {
            if (s.steps % cfg.observer_stride == 0) slices.push_back({s.t, s.u, s.v});
        });
        return estimate_c_reg_detail(slices, 2.0, bump, 0.0, d, t_ref).ratio;
    };
    const double coarse = ratio_at(64, std::nullopt);
    const double fine = ratio_at(128, std::nullopt);
    const double shifted = ratio_at(128, 3.0);
    const double drift = std::abs(coarse - fine) / fine;
    const double shift_rel = std::abs(shifted - fine) / fine;
    const bool ok = r_zero == 0.0 && r_steady == 0.0 && std::isfinite(fine) && fine > 0.0 && drift <= 0.2 &&
                    shift_rel <= 1e-12;
    return {ok, "zero " + fmt("%g", r_zero) + ", steady " + fmt("%g", r_steady) + ", bump ratio " + fmt("%.6g", coarse) +
                    " (64) vs " + fmt("%.6g", fine) + " (128), diff " + fmt("%.2f%%", 100 * drift) +
                    ", reference shift rel " + fmt("%.2e", shift_rel)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"homogeneous logistic ODE", homogeneous_logistic},
        {"steady state fixed point", steady_state_fixed_point},
        {"positivity", positivity},
        {"mass bound", mass_bound},
        {"mass conservation", conservation},
        {"theory constants", constants},
        {"regime consistency", regime_consistency},
        {"blow-up detector", blowup_detector},
        {"self-convergence", self_convergence},
        {"sweep determinism", sweep_determinism},
        {"C_reg estimator", c_reg_estimator},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.pass;
        std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
