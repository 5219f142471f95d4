#include "kellerscope/model.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace kellerscope {

std::string_view to_string(PhiFamily f) {
    switch (f) {
    case PhiFamily::Canonical:
        return "canonical";
    case PhiFamily::Linear:
        return "linear";
    }
    return "canonical";
}

PhiFamily phi_family_from_string(std::string_view name) {
    if (name == "canonical") return PhiFamily::Canonical;
    if (name == "linear") return PhiFamily::Linear;
    throw DomainError("unknown phi family '" + std::string(name) + "' (expected canonical or linear)");
}

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
}

bool finite_all(const ModelParams& m) {
    return std::isfinite(m.tau) && std::isfinite(m.chi) && std::isfinite(m.mu) && std::isfinite(m.a) &&
           std::isfinite(m.k) && std::isfinite(m.p) && std::isfinite(m.s0_phi);
}

} // namespace

double phi_lower_bound_violation(const ModelParams& params, double upper, int samples) {
    const double lo = std::log(params.s0_phi);
    const double hi = std::log(upper);
    double worst = -1.0;
    for (int i = 0; i < samples; ++i) {
        const double s = std::exp(lo + (hi - lo) * i / (samples - 1));
        const double bound = params.k * std::pow(s, params.p);
        const double value = phi(s, params);
        worst = std::max(worst, (bound - value) / bound);
    }
    return worst;
}

ModelParams checked(ModelParams params) {
    require(finite_all(params), "model parameters must be finite");
    require(params.tau > 0.0, "tau must be positive");
    require(params.chi >= 0.0, "chi must be nonnegative");
    require(params.mu > 0.0, "mu must be positive");
    require(params.a >= 0.0, "a must be nonnegative");
    require(params.k > 0.0, "k must be positive");
    require(params.s0_phi > 1.0, "s0_phi must exceed 1");
    if (params.phi_family == PhiFamily::Linear) {
        params.p = 0.0;
    } else if (phi_lower_bound_violation(params) > 1e-12) {
        std::ostringstream msg;
        msg << "canonical diffusivity k(1+s)^p with p = " << params.p
            << " violates k s^p <= phi(s) on [s0_phi, 1e6]";
        throw DomainError(msg.str());
    }
    return params;
}

double phi(double s, const ModelParams& params) {
    if (s < 0.0) throw DomainError("phi: negative density " + std::to_string(s));
    if (params.phi_family == PhiFamily::Linear) return params.k;
    return params.k * std::pow(1.0 + s, params.p);
}

double g_logistic(double s, const ModelParams& params) {
    if (s < 0.0) throw DomainError("g_logistic: negative density " + std::to_string(s));
    return params.a * s - params.mu * s * s;
}

double source(double s, const ModelParams& params) { return params.reaction ? g_logistic(s, params) : 0.0; }

Field rhs_u(const Field& u, const Field& v, const ModelParams& params, const Domain& d) {
    Field out = diffusive_divergence(u, params, d);
    out -= chemotactic_divergence(u, v, params.chi, d);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += source(u[k], params);
    return out;
}

Field rhs_v(const Field& u, const Field& v, const ModelParams& params, const Domain& d) {
    require_on(u, d, "rhs_v (u)");
    Field out = laplacian_neumann(v, d);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (out[k] - v[k] + u[k]) / params.tau;
    return out;
}

SteadyState homogeneous_steady_state(const ModelParams& params) {
    const double u_star = params.a / params.mu;
    return {u_star, u_star};
}

} // namespace kellerscope
