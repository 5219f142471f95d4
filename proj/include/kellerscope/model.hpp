#pragma once

#include <string_view>
#include <utility>

#include "kellerscope/grid.hpp"

namespace kellerscope {

enum class PhiFamily {
    Canonical, // phi(s) = k (1 + s)^p
    Linear,    // phi(s) = k
};

std::string_view to_string(PhiFamily f);
PhiFamily phi_family_from_string(std::string_view name);

// Coefficients of the cell/signal system
//   u_t = div(phi(u) grad u) - div(chi u grad v) + g(u)
//   tau v_t = lap v - v + u
// with g(s) = a s - mu s^2. Setting reaction = false replaces g by zero,
// which is how the pure aggregation and pure transport tests switch the
// source off while keeping mu > 0.
struct ModelParams {
    double tau = 1.0;
    double chi = 1.0;
    double mu = 1.0;
    double a = 0.0;
    double k = 1.0;
    double p = 0.0;
    double s0_phi = 2.0;
    PhiFamily phi_family = PhiFamily::Canonical;
    bool reaction = true;

    bool operator==(const ModelParams&) const = default;
};

// Validates every constraint and returns the normalized parameters
// (Linear forces p = 0). For the Canonical family the lower bound
// k s^p <= phi(s) is scanned on [s0_phi, 1e6]; families violating it are
// rejected. Throws DomainError.
ModelParams checked(ModelParams params);

// Largest relative violation of k s^p <= phi(s) over a geometric scan of
// [s0_phi, upper]; <= 0 means the bound holds everywhere on the scan.
double phi_lower_bound_violation(const ModelParams& params, double upper = 1e6, int samples = 2000);

double phi(double s, const ModelParams& params);
double g_logistic(double s, const ModelParams& params);
// g_logistic, or 0 when the reaction is switched off.
double source(double s, const ModelParams& params);

Field rhs_u(const Field& u, const Field& v, const ModelParams& params, const Domain& d);
Field rhs_v(const Field& u, const Field& v, const ModelParams& params, const Domain& d);

struct SteadyState {
    double u_star;
    double v_star;
};

SteadyState homogeneous_steady_state(const ModelParams& params);

} // namespace kellerscope
