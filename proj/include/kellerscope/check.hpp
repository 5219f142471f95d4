#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "kellerscope/config.hpp"

namespace kellerscope {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

// Operator, steady-state, positivity and mass-bound invariants evaluated on
// the configured domain and parameters.
std::vector<CheckResult> run_invariant_checks(const RunConfig& cfg);

// Face-flux scale used by the conservation tolerance: sum over interior
// faces of |F| * cell_volume / h.
template <class FaceFlux>
double flux_magnitude(const Domain& d, FaceFlux&& flux) {
    double total = 0.0;
    const auto h = d.spacings();
    for_each_interior_face(d, [&](std::size_t lo, std::size_t hi, int axis) {
        total += std::abs(flux(lo, hi, axis)) * d.cell_volume() / h[axis];
    });
    return total;
}

} // namespace kellerscope
