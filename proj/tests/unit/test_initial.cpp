#include <cmath>

#include "doctest.h"
#include "kellerscope/initial_conditions.hpp"
#include "kellerscope/stepper.hpp"

using namespace kellerscope;

TEST_CASE("constant and relative initial data") {
    const Domain d = Domain::rectangle(1.0, 1.0, 6, 6);
    ModelParams m;
    m.a = 3.0;
    m.mu = 2.0;
    InitialCondition ic;
    ic.kind = IcKind::Constant;
    ic.amplitude = 1.0;
    ic.relative = true;
    auto [u, v] = make_initial(ic, d, m, 0);
    for (std::size_t k = 0; k < u.size(); ++k) {
        CHECK(u[k] == 1.5);
        CHECK(v[k] == 1.5);
    }
}

TEST_CASE("gaussian bump is centred and the signal solves the elliptic problem") {
    const Domain d = Domain::interval(2.0, 41);
    InitialCondition ic;
    ic.width = 0.2;
    ic.background = 0.1;
    auto [u, v] = make_initial(ic, d, ModelParams{}, 0);
    CHECK(u[20] == doctest::Approx(1.1)); // centre cell
    for (std::size_t i = 0; i < 20; ++i) CHECK(u[i] == doctest::Approx(u[40 - i]).epsilon(1e-14));
    const Field resid = apply_helmholtz(v, 1.0, d) - u;
    CHECK(resid.sup_abs() <= 1e-10 * u.sup_abs());
    CHECK(v.min() >= 0.0);
}

TEST_CASE("two bumps and checkerboard") {
    const Domain d = Domain::interval(1.0, 100);
    InitialCondition ic;
    ic.kind = IcKind::TwoBumps;
    ic.width = 0.05;
    ic.signal = SignalInit::Zero;
    auto [u, v] = make_initial(ic, d, ModelParams{}, 0);
    CHECK(v.sup_abs() == 0.0);
    CHECK(u[29] > u[50]);
    CHECK(u[70] > u[50]);

    const Domain sq = Domain::rectangle(1.0, 1.0, 4, 4);
    ic.kind = IcKind::Checkerboard;
    ic.width = 0.5;
    ic.signal = SignalInit::MatchU;
    auto [c, cv] = make_initial(ic, sq, ModelParams{}, 0);
    CHECK(c == cv);
    CHECK(c[sq.index(0, 0)] == 1.0);
    CHECK(c[sq.index(2, 0)] == 0.0);
    CHECK(c[sq.index(2, 2)] == 1.0);
}

TEST_CASE("noise is seeded and bounded") {
    const Domain d = Domain::interval(1.0, 50);
    InitialCondition ic;
    ic.kind = IcKind::Constant;
    ic.noise = 0.2;
    auto [a, av] = make_initial(ic, d, ModelParams{}, 7);
    auto [b, bv] = make_initial(ic, d, ModelParams{}, 7);
    auto [c, cv] = make_initial(ic, d, ModelParams{}, 8);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    CHECK(a.min() >= 0.8);
    CHECK(a.max() < 1.2);
}

TEST_CASE("seeded stream is fixed") {
    SeededStream s(0);
    CHECK(s.next() == 0xe220a8397b1dcdafULL);
    SeededStream t(42);
    for (int i = 0; i < 1000; ++i) {
        const double x = t.uniform01();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("invalid descriptions") {
    InitialCondition ic;
    ic.width = 0.0;
    CHECK_THROWS_AS(validate(ic), DomainError);
    ic = {};
    ic.background = -1.0;
    CHECK_THROWS_AS(validate(ic), DomainError);
    ic = {};
    ic.noise = 1.5;
    CHECK_THROWS_AS(validate(ic), DomainError);
    CHECK(ic_kind_from_string("two_bumps") == IcKind::TwoBumps);
    CHECK_THROWS_AS(ic_kind_from_string("ring"), DomainError);
    CHECK(signal_init_from_string("match_u") == SignalInit::MatchU);
}
