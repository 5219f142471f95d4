#include "kellerscope/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace kellerscope {

double lgamma_norm(const Field& u, double gamma, const Domain& d) {
    if (!(gamma >= 1.0)) throw DomainError("lgamma_norm: gamma must be >= 1");
    require_on(u, d, "lgamma_norm");
    double sum = 0.0;
    for (double x : u.values()) {
        if (x < 0.0) throw PreconditionError("lgamma_norm: negative entry " + std::to_string(x));
        sum += gamma == 1.0 ? x : std::pow(x, gamma);
    }
    const double integral = sum * d.cell_volume();
    return gamma == 1.0 ? integral : std::pow(integral, 1.0 / gamma);
}

double young_factor(double gamma) { return (1.0 / gamma) * std::pow(1.0 + 1.0 / gamma, -(gamma + 1.0)); }

double c2_constant() {
    // young_factor decreases on (1, inf), so the supremum is its value at 1.
    return young_factor(1.0);
}

double mu_threshold(double gamma, double eta, double chi, double c_reg) {
    if (!(gamma > 1.0)) throw DomainError("mu_threshold: gamma must exceed 1");
    if (!(eta > 0.0) || !(chi > 0.0) || !(c_reg > 0.0))
        throw DomainError("mu_threshold: eta, chi and C_reg must be positive");
    return eta + c2_constant() * c_reg * std::pow(eta, -gamma) * std::pow(chi, gamma + 1.0);
}

namespace {

void check_theta0_args(double gamma0, double chi, double c_reg) {
    if (!(gamma0 > 1.0)) throw DomainError("theta0: gamma0 must exceed 1");
    if (!(chi > 0.0) || !(c_reg > 0.0)) throw DomainError("theta0: chi and C_reg must be positive");
}

} // namespace

Theta0 theta0_golden(double gamma0, double chi, double c_reg) {
    check_theta0_args(gamma0, chi, c_reg);
    // eta + c e^{-gamma x} is convex in x = log(eta), so a bracket found by
    // doubling outward from log(chi) contains the unique minimum.
    auto h = [&](double x) { return mu_threshold(gamma0, std::exp(x), chi, c_reg); };
    double a = std::log(chi) - 1.0;
    double b = std::log(chi);
    double c = std::log(chi) + 1.0;
    double step = 1.0;
    for (int i = 0; i < 200 && !(h(b) <= h(a) && h(b) <= h(c)); ++i) {
        step *= 2.0;
        if (h(a) < h(b)) {
            c = b;
            b = a;
            a = b - step;
        } else {
            a = b;
            b = c;
            c = b + step;
        }
    }

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = a;
    double hi = c;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = h(x1);
    double f2 = h(x2);
    for (int i = 0; i < 300 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++i) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = h(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = h(x2);
        }
    }
    const double x = f1 < f2 ? x1 : x2;
    const double mu_min = std::min(f1, f2);
    return {chi / mu_min, std::exp(x), mu_min};
}

Theta0 theta0(double gamma0, double chi, double c_reg) {
    check_theta0_args(gamma0, chi, c_reg);
    const double c2 = c2_constant();
    const double eta_star = std::pow(gamma0 * c2 * c_reg * std::pow(chi, gamma0 + 1.0), 1.0 / (gamma0 + 1.0));
    const double mu_min = eta_star * (1.0 + 1.0 / gamma0);
    const Theta0 closed{chi / mu_min, eta_star, mu_min};

    const Theta0 numeric = theta0_golden(gamma0, chi, c_reg);
    const double rel = std::abs(numeric.mu_min - closed.mu_min) / closed.mu_min;
    if (rel > 1e-10) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "theta0: closed-form minimum " << closed.mu_min << " disagrees with golden-section minimum "
            << numeric.mu_min << " (relative " << rel << ")";
        throw ConsistencyError(msg.str());
    }
    return closed;
}

TheoryConstants theory_constants(int n, double chi, double c_reg, std::optional<double> gamma0) {
    const double g0 = gamma0.value_or(static_cast<double>(n) + 1.0);
    return {g0, c2_constant(), c_reg, theta0(g0, chi, c_reg).theta0};
}

CRegEstimate estimate_c_reg_detail(std::span<const TimeSlice> slices, double r, const ModelParams& params,
                                   double s0_time, const Domain& d, std::optional<double> reference_time) {
    if (!(r > 1.0)) throw DomainError("estimate_C_reg: r must exceed 1");
    auto first = std::find_if(slices.begin(), slices.end(), [&](const TimeSlice& s) { return s.t >= s0_time; });
    const std::span<const TimeSlice> used(first, slices.end());
    if (used.size() < 2) throw DomainError("estimate_C_reg: need at least 2 samples at or after s0_time");

    const double dt = (used.back().t - used.front().t) / static_cast<double>(used.size() - 1);
    if (!(dt > 0.0)) throw DomainError("estimate_C_reg: samples must advance in time");
    for (std::size_t i = 1; i < used.size(); ++i) {
        if (std::abs((used[i].t - used[i - 1].t) - dt) > 1e-6 * dt)
            throw DomainError("estimate_C_reg: samples must be uniformly spaced in time");
    }

    auto power_integral = [&](const Field& f) {
        require_on(f, d, "estimate_C_reg");
        double sum = 0.0;
        for (double x : f.values()) sum += std::pow(std::abs(x), r);
        return sum * d.cell_volume();
    };

    const double rate = r / params.tau;
    const double t_ref = reference_time.value_or(used.back().t);
    double lhs = 0.0;
    double den = 0.0;
    for (const TimeSlice& s : used) {
        const double w = std::exp(rate * (s.t - t_ref)) * dt;
        lhs += w * power_integral(laplacian_neumann(s.v, d));
        den += w * power_integral(s.u);
    }
    const TimeSlice& start = used.front();
    den += params.tau * std::exp(rate * (start.t - t_ref)) *
           (power_integral(start.v) + power_integral(laplacian_neumann(start.v, d)));

    if (den == 0.0) {
        if (lhs > 0.0) throw ConsistencyError("estimate_C_reg: zero denominator with positive numerator");
        return {0.0, lhs, den};
    }
    return {lhs / den, lhs, den};
}

double estimate_C_reg(std::span<const TimeSlice> slices, double r, const ModelParams& params, double s0_time,
                      const Domain& d) {
    return estimate_c_reg_detail(slices, r, params, s0_time, d).ratio;
}

std::string_view to_string(TheoryRegime r) {
    switch (r) {
    case TheoryRegime::SubcriticalBounded:
        return "SubcriticalBounded";
    case TheoryRegime::SupercriticalUnboundedPossible:
        return "SupercriticalUnboundedPossible";
    case TheoryRegime::SubLogisticBounded:
        return "SubLogisticBounded";
    case TheoryRegime::CriticalBoundedByLogistic:
        return "CriticalBoundedByLogistic";
    case TheoryRegime::CriticalUndetermined:
        return "CriticalUndetermined";
    }
    return "CriticalUndetermined";
}

bool predicts_bounded(TheoryRegime r) {
    return r == TheoryRegime::SubcriticalBounded || r == TheoryRegime::SubLogisticBounded ||
           r == TheoryRegime::CriticalBoundedByLogistic;
}

TheoryRegime classify_theory(double p, double q, int n, double chi, double mu, double theta0_est) {
    if (n < 1) throw DomainError("classify_theory: dimension must be positive");
    if (q < 1.0) return TheoryRegime::SubLogisticBounded;
    const double gap = q - p;
    const double critical = 2.0 / n;
    if (q > 1.0) {
        if (gap < critical) return TheoryRegime::SubcriticalBounded;
        if (gap > critical) return TheoryRegime::SupercriticalUnboundedPossible;
        return TheoryRegime::CriticalUndetermined;
    }
    if (chi / mu < theta0_est) return TheoryRegime::CriticalBoundedByLogistic;
    return TheoryRegime::CriticalUndetermined;
}

std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::Bounded:
        return "Bounded";
    case Outcome::BlowUp:
        return "BlowUp";
    case Outcome::Undecided:
        return "Undecided";
    }
    return "Undecided";
}

Outcome outcome_from_string(std::string_view name) {
    if (name == "Bounded") return Outcome::Bounded;
    if (name == "BlowUp") return Outcome::BlowUp;
    if (name == "Undecided") return Outcome::Undecided;
    throw DomainError("unknown outcome '" + std::string(name) + "'");
}

Outcome classify_run(const SimState& final, std::span<const Sample> series, const ClassifyRules& rules) {
    if (final.status == Status::BlowUp) return Outcome::BlowUp;
    if (final.status != Status::Finished || series.empty()) return Outcome::Undecided;

    const std::size_t n = series.size();
    const auto window =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(rules.window_fraction * static_cast<double>(n))));
    double lo = series[n - window].sup_u;
    double hi = lo;
    for (std::size_t i = n - window; i < n; ++i) {
        lo = std::min(lo, series[i].sup_u);
        hi = std::max(hi, series[i].sup_u);
    }
    if (hi > 0.0 && (hi - lo) / hi >= rules.max_drift) return Outcome::Undecided;

    std::vector<double> sups(n);
    for (std::size_t i = 0; i < n; ++i) sups[i] = series[i].sup_u;
    const double peak = *std::max_element(sups.begin(), sups.end());
    std::sort(sups.begin(), sups.end());
    const double median = n % 2 == 1 ? sups[n / 2] : 0.5 * (sups[n / 2 - 1] + sups[n / 2]);
    if (peak > rules.spike_factor * median) return Outcome::Undecided;
    return Outcome::Bounded;
}

} // namespace kellerscope
