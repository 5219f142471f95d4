#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

#include "kellerscope/grid.hpp"
#include "kellerscope/model.hpp"

namespace kellerscope {

enum class IcKind { Constant, GaussianBump, TwoBumps, Checkerboard };

std::string_view to_string(IcKind k);
IcKind ic_kind_from_string(std::string_view name);

// How v0 is built from u0.
enum class SignalInit {
    Steady, // (I - lap) v0 = u0
    MatchU, // v0 = u0
    Zero,
};

std::string_view to_string(SignalInit s);
SignalInit signal_init_from_string(std::string_view name);

// u0 = background + amplitude * shape(x), optionally in units of the
// homogeneous steady state a/mu, then multiplied cellwise by
// (1 + noise * xi) with xi uniform on [-1, 1) from a seeded stream.
//   Constant      shape = 1
//   GaussianBump  exp(-|x - c|^2 / (2 width^2)), c the domain center
//   TwoBumps      sum of two such bumps at 0.3 and 0.7 of the x extent
//   Checkerboard  1 on blocks of side `width` with even parity, else 0
struct InitialCondition {
    IcKind kind = IcKind::GaussianBump;
    double background = 0.0;
    double amplitude = 1.0;
    double width = 0.1;
    bool relative = false;
    double noise = 0.0;
    SignalInit signal = SignalInit::Steady;

    bool operator==(const InitialCondition&) const = default;
};

// Throws DomainError when the description can produce negative data.
void validate(const InitialCondition& ic);

std::pair<Field, Field> make_initial(const InitialCondition& ic, const Domain& d, const ModelParams& params,
                                     std::uint64_t seed);

// Deterministic uniform double on [0, 1) streams, independent of the
// standard library's distribution implementations.
class SeededStream {
public:
    explicit SeededStream(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

} // namespace kellerscope
