#include "kellerscope/initial_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kellerscope/stepper.hpp"

namespace kellerscope {

std::string_view to_string(IcKind k) {
    switch (k) {
    case IcKind::Constant:
        return "constant";
    case IcKind::GaussianBump:
        return "gaussian_bump";
    case IcKind::TwoBumps:
        return "two_bumps";
    case IcKind::Checkerboard:
        return "checkerboard";
    }
    return "constant";
}

IcKind ic_kind_from_string(std::string_view name) {
    if (name == "constant") return IcKind::Constant;
    if (name == "gaussian_bump") return IcKind::GaussianBump;
    if (name == "two_bumps") return IcKind::TwoBumps;
    if (name == "checkerboard") return IcKind::Checkerboard;
    throw DomainError("unknown initial condition '" + std::string(name) +
                      "' (expected constant, gaussian_bump, two_bumps or checkerboard)");
}

std::string_view to_string(SignalInit s) {
    switch (s) {
    case SignalInit::Steady:
        return "steady";
    case SignalInit::MatchU:
        return "match_u";
    case SignalInit::Zero:
        return "zero";
    }
    return "steady";
}

SignalInit signal_init_from_string(std::string_view name) {
    if (name == "steady") return SignalInit::Steady;
    if (name == "match_u") return SignalInit::MatchU;
    if (name == "zero") return SignalInit::Zero;
    throw DomainError("unknown signal initialisation '" + std::string(name) + "' (expected steady, match_u or zero)");
}

// splitmix64
std::uint64_t SeededStream::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void validate(const InitialCondition& ic) {
    if (!(ic.background >= 0.0)) throw DomainError("initial background must be nonnegative");
    if (!(ic.amplitude >= 0.0)) throw DomainError("initial amplitude must be nonnegative");
    if (!(ic.width > 0.0)) throw DomainError("initial width must be positive");
    if (!(ic.noise >= 0.0 && ic.noise <= 1.0)) throw DomainError("initial noise must lie in [0, 1]");
}

std::pair<Field, Field> make_initial(const InitialCondition& ic, const Domain& d, const ModelParams& params,
                                     std::uint64_t seed) {
    validate(ic);
    const double scale = ic.relative ? homogeneous_steady_state(params).u_star : 1.0;
    const double lx = d.length(0);
    const double ly = d.dim() == 2 ? d.length(1) : 0.0;
    const double cy = 0.5 * ly;
    const double w2 = 2.0 * ic.width * ic.width;
    auto bump = [&](double x, double y, double cx) {
        const double dy = d.dim() == 2 ? y - cy : 0.0;
        return std::exp(-((x - cx) * (x - cx) + dy * dy) / w2);
    };

    auto shape = [&](double x, double y) -> double {
        switch (ic.kind) {
        case IcKind::Constant:
            return 1.0;
        case IcKind::GaussianBump:
            return bump(x, y, 0.5 * lx);
        case IcKind::TwoBumps:
            return bump(x, y, 0.3 * lx) + bump(x, y, 0.7 * lx);
        case IcKind::Checkerboard: {
            const auto bx = static_cast<long long>(std::floor(x / ic.width));
            const auto by = d.dim() == 2 ? static_cast<long long>(std::floor(y / ic.width)) : 0LL;
            return (bx + by) % 2 == 0 ? 1.0 : 0.0;
        }
        }
        return 0.0;
    };

    Field u = Field::sample(d, [&](double x, double y) { return scale * (ic.background + ic.amplitude * shape(x, y)); });
    if (ic.noise > 0.0) {
        SeededStream stream(seed);
        for (double& x : u.data()) x *= 1.0 + ic.noise * (2.0 * stream.uniform01() - 1.0);
    }

    Field v;
    switch (ic.signal) {
    case SignalInit::Steady:
        if (u.min() == u.max()) {
            v = u;
            break;
        }
        v = solve_helmholtz(u, 1.0, d).w;
        for (double& x : v.data()) x = std::max(x, 0.0);
        break;
    case SignalInit::MatchU:
        v = u;
        break;
    case SignalInit::Zero:
        v = Field::zeros(d);
        break;
    }
    return {std::move(u), std::move(v)};
}

} // namespace kellerscope
