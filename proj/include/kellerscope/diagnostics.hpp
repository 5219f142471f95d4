#pragma once

// Norm monitors, the explicit constants behind the boundedness threshold,
// the empirical maximal-regularity estimator, and the run/theory
// classifiers.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kellerscope/grid.hpp"
#include "kellerscope/model.hpp"
#include "kellerscope/stepper.hpp"

namespace kellerscope {

// (integral of u^gamma)^(1/gamma). Throws DomainError for gamma < 1 and
// PreconditionError for negative entries.
double lgamma_norm(const Field& u, double gamma, const Domain& d);

// (1/g) (1 + 1/g)^-(g+1), the Young's-inequality factor whose supremum over
// g > 1 is c2.
double young_factor(double gamma);

// sup over gamma > 1 of young_factor; attained in the limit gamma -> 1+.
double c2_constant();

// eta + c2 C_reg eta^-gamma chi^(gamma+1).
double mu_threshold(double gamma, double eta, double chi, double c_reg);

struct Theta0 {
    double theta0;
    double eta_star;
    double mu_min; // min over eta of mu_threshold(gamma0, eta, chi, C_reg)
};

// Minimizes mu_threshold over eta in closed form and cross-checks the
// minimum value against a golden-section search; throws ConsistencyError if
// the two disagree by more than 1e-10 relative.
Theta0 theta0(double gamma0, double chi, double c_reg);

// Golden-section minimum of mu_threshold(gamma0, ., chi, c_reg), searched
// in log(eta). Independent of the closed form.
Theta0 theta0_golden(double gamma0, double chi, double c_reg);

struct TheoryConstants {
    double gamma0;
    double c2;
    double c_reg;
    double theta0;
};

// gamma0 defaults to n + 1 when not given.
TheoryConstants theory_constants(int n, double chi, double c_reg, std::optional<double> gamma0 = std::nullopt);

struct TimeSlice {
    double t;
    Field u;
    Field v;
};

struct CRegEstimate {
    double ratio;
    double lhs;
    double den;
};

// Empirical lower bound on the weighted maximal-regularity constant:
//   sum_t e^{(r/tau)(t-T)} int |lap_h v|^r dt
//   ------------------------------------------------------------------------
//   sum_t e^{(r/tau)(t-T)} int u^r dt + tau e^{(r/tau)(s0-T)} (|v(s0)|_r^r + |lap_h v(s0)|_r^r)
// over the slices with t >= s0_time (uniformly spaced). T defaults to the
// last slice time; the ratio does not depend on it.
CRegEstimate estimate_c_reg_detail(std::span<const TimeSlice> slices, double r, const ModelParams& params,
                                   double s0_time, const Domain& d,
                                   std::optional<double> reference_time = std::nullopt);

double estimate_C_reg(std::span<const TimeSlice> slices, double r, const ModelParams& params, double s0_time,
                      const Domain& d);

enum class TheoryRegime {
    SubcriticalBounded,
    SupercriticalUnboundedPossible,
    SubLogisticBounded,
    CriticalBoundedByLogistic,
    CriticalUndetermined,
};

std::string_view to_string(TheoryRegime r);
// True for regimes in which every solution is known to stay bounded.
bool predicts_bounded(TheoryRegime r);

// Rule order: q < 1, then q > 1 against the exponent gap 2/n, then the
// critical q == 1 case against chi/mu < theta0_est. A gap exactly equal to
// 2/n with q > 1 is reported as CriticalUndetermined.
TheoryRegime classify_theory(double p, double q, int n, double chi, double mu, double theta0_est);

enum class Outcome { Bounded, BlowUp, Undecided };

std::string_view to_string(Outcome o);
Outcome outcome_from_string(std::string_view name);

struct ClassifyRules {
    double window_fraction = 0.2;
    double max_drift = 0.05;
    double spike_factor = 10.0;
};

Outcome classify_run(const SimState& final, std::span<const Sample> series, const ClassifyRules& rules = {});

} // namespace kellerscope
