#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "latgas/hydro.hpp"
#include "latgas/spde.hpp"
#include "latgas/stability.hpp"

using namespace latgas;
using hydro::HydroState;
using hydro::PdeConfig;
using hydro::System;

namespace {

PdeConfig mips_cfg(double D, double lambda, double gamma) {
    PdeConfig c;
    c.system = System::Mips;
    c.D = D;
    c.lambda = lambda;
    c.gamma = gamma;
    return c;
}

double sine_amplitude(const std::vector<double>& f) {
    return 2.0 * std::sqrt(spde::mode_power(f, 1));
}

} // namespace

TEST_CASE("F identities") {
    for (double rho : {0.2, 1.0, 3.0})
        for (double beta : {0.0, 0.5, 2.0})
            CHECK(evaluate_F(rho, 0.0, beta) == doctest::Approx(0.0).epsilon(1e-14));
    for (double rho : {0.2, 1.0})
        for (double m : {-0.8, 0.3, 1.5})
            CHECK(evaluate_F(rho, m, 0.0) == doctest::Approx(m));
    // log-scale branch agrees with a tanh-form reference at large arguments
    const double rho = 1.0, m = 0.9, beta = 5.0;
    const double s = std::sinh(beta);
    const double ref = std::cosh(m * s) * std::exp(-beta + rho * std::cosh(beta) - rho) *
                       (m - rho * std::tanh(m * s));
    CHECK(evaluate_F(rho, m, beta) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("analytic F derivatives match centered finite differences") {
    const double h = 1e-5;
    for (double rho : {0.5, 1.0, 2.0}) {
        for (double m : {-0.6, 0.1, 0.7}) {
            for (double beta : {0.3, 1.0, 2.0}) {
                const double fm = (evaluate_F(rho, m + h, beta) -
                                   evaluate_F(rho, m - h, beta)) / (2 * h);
                const double fr = (evaluate_F(rho + h, m, beta) -
                                   evaluate_F(rho - h, m, beta)) / (2 * h);
                CHECK(dF_dm(rho, m, beta) == doctest::Approx(fm).epsilon(1e-6));
                CHECK(dF_drho(rho, m, beta) == doctest::Approx(fr).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("uniform states are fixed points of all three solvers") {
    auto u1 = hydro::uniform_state(System::Mips, 64, 0.4, 0.0);
    auto cfg = mips_cfg(1.0, 2.0, 1.5);
    for (int i = 0; i < 50; ++i) hydro::step_mips(u1, cfg);
    for (double v : u1.rho) CHECK(v == doctest::Approx(0.4).epsilon(1e-13));
    for (double v : u1.m) CHECK(std::abs(v) < 1e-13);

    auto u2 = hydro::uniform_state(System::Peclet2d, 16, 0.6, 0.0);
    PdeConfig pc;
    pc.system = System::Peclet2d;
    pc.peclet = 4.0;
    for (int i = 0; i < 20; ++i) hydro::step_peclet_2d(u2, pc);
    for (double v : u2.rho) CHECK(v == doctest::Approx(0.6).epsilon(1e-13));

    PdeConfig fc;
    fc.system = System::Flock;
    fc.D = 1.0;
    fc.lambda = 1.0;
    fc.beta = 1.2;
    auto u3 = hydro::uniform_state(System::Flock, 64, 1.0, 0.0);
    for (int i = 0; i < 50; ++i) hydro::step_flock(u3, fc);
    for (double v : u3.m) CHECK(std::abs(v) < 1e-13);

    // magnetized branch: F(rho0, m0) = 0 with m0 > 0 is also stationary
    const double m0 = stability::self_consistent_m(1.0, 1.2);
    REQUIRE(m0 > 0.0);
    auto u4 = hydro::uniform_state(System::Flock, 64, 1.0, m0);
    for (int i = 0; i < 50; ++i) hydro::step_flock(u4, fc);
    for (double v : u4.m) CHECK(v == doctest::Approx(m0).epsilon(1e-10));
}

TEST_CASE("fourier mode of the heat equation decays at rate D q^2") {
    const int grid = 256;
    auto state = hydro::state_from_profiles(
        System::Mips, {Profile::sine(0.5, 0.1, 1), Profile::constant(0.0)}, grid);
    // split evenly so m = rho: use rho+ only; the rho field carries the sine
    auto cfg = mips_cfg(1.0, 0.0, 0.0);
    const double T = 0.02;
    const double a0 = sine_amplitude(state.rho);
    hydro::advance(state, cfg, T);
    const double a1 = sine_amplitude(state.rho);
    const double q = 2.0 * std::numbers::pi;
    CHECK(a1 / a0 == doctest::Approx(std::exp(-q * q * T)).epsilon(0.01));
}

TEST_CASE("magnetization mode decays at rate D q^2 + 2 gamma") {
    const int grid = 256;
    auto state = hydro::state_from_profiles(
        System::Mips, {Profile::sine(0.25, 0.05, 1), Profile::sine(0.25, -0.05, 1)}, grid);
    // rho = 0.5 uniform, m = 0.1 sin(2 pi u)
    auto cfg = mips_cfg(1.0, 0.0, 1.0);
    const double T = 0.02;
    const double a0 = sine_amplitude(state.m);
    CHECK(a0 == doctest::Approx(0.1).epsilon(1e-6));
    hydro::advance(state, cfg, T);
    const double a1 = sine_amplitude(state.m);
    const double q = 2.0 * std::numbers::pi;
    CHECK(a1 / a0 == doctest::Approx(std::exp(-(q * q + 2.0) * T)).epsilon(0.02));
}

TEST_CASE("discrete conservation laws of the solver") {
    auto state = hydro::state_from_profiles(
        System::Mips, {Profile::sine(0.3, 0.08, 2), Profile::constant(0.25)}, 200);
    auto cfg = mips_cfg(1.0, 1.5, 0.8);
    const double mass0 = hydro::total_mass(state);
    const double mag0 = hydro::total_magnetization(state);
    const double T = 0.05;
    hydro::advance(state, cfg, T);
    CHECK(std::abs(hydro::total_mass(state) - mass0) < 1e-10 * std::abs(mass0));
    CHECK(std::abs(hydro::total_magnetization(state)) <=
          std::abs(mag0) * std::exp(-2.0 * cfg.gamma * T) + 1e-10);
}

TEST_CASE("species reflection symmetry: m -> -m, u -> -u") {
    const int grid = 128;
    auto state = hydro::state_from_profiles(
        System::Mips, {Profile::sine(0.3, 0.1, 1), Profile::constant(0.25)}, grid);
    HydroState mirrored = state;
    for (int j = 0; j < grid; ++j) {
        const auto src = static_cast<std::size_t>((grid - j) % grid);
        mirrored.rho[static_cast<std::size_t>(j)] = state.rho[src];
        mirrored.m[static_cast<std::size_t>(j)] = -state.m[src];
    }
    auto cfg = mips_cfg(1.0, 2.0, 1.0);
    const double T = 0.05;
    hydro::advance(state, cfg, T);
    hydro::advance(mirrored, cfg, T);
    for (int j = 0; j < grid; ++j) {
        const auto src = static_cast<std::size_t>((grid - j) % grid);
        CHECK(mirrored.rho[static_cast<std::size_t>(j)] ==
              doctest::Approx(state.rho[src]).epsilon(1e-8));
        CHECK(mirrored.m[static_cast<std::size_t>(j)] ==
              doctest::Approx(-state.m[src]).epsilon(1e-8));
    }
}

TEST_CASE("grid self-convergence is first order or better") {
    auto run = [&](int grid) {
        auto state = hydro::state_from_profiles(
            System::Mips, {Profile::sine(0.35, 0.1, 1), Profile::constant(0.3)}, grid);
        PdeConfig cfg = mips_cfg(1.0, 2.0, 1.0);
        cfg.scheme = hydro::Scheme::UpwindAdvection;
        hydro::advance(state, cfg, 0.02);
        return state;
    };
    const auto a = run(256);
    const auto b = run(512);
    const auto c = run(1024);
    auto restrict_diff = [](const HydroState& coarse, const HydroState& fine) {
        const int ratio = fine.grid / coarse.grid;
        double acc = 0.0;
        for (int j = 0; j < coarse.grid; ++j)
            acc += std::abs(coarse.rho[static_cast<std::size_t>(j)] -
                            fine.rho[static_cast<std::size_t>(j * ratio)]);
        return acc / coarse.grid;
    };
    const double d1 = restrict_diff(a, b);
    const double d2 = restrict_diff(b, c);
    CHECK(d1 <= 4.0 * d2);
}

TEST_CASE("peclet 2d: decoupled decay and seeded instability inside the spinodal") {
    PdeConfig pc;
    pc.system = System::Peclet2d;
    pc.peclet = 0.0;
    auto state = hydro::uniform_state(System::Peclet2d, 32, 0.5, 0.2);
    const double T = 0.2;
    hydro::advance(state, pc, T);
    for (double v : state.m) CHECK(v == doctest::Approx(0.2 * std::exp(-2.0 * T)).epsilon(1e-3));

    // rho0 = 0.75, Pe = 6 on a domain wide enough to fit the unstable band:
    // seed the longest wavelength along the drift axis (1% amplitude)
    pc.peclet = 6.0;
    const double L = 8.0;
    const int grid = 64;
    auto seeded = hydro::uniform_state(System::Peclet2d, grid, 0.75, 0.0, L);
    for (int y = 0; y < grid; ++y)
        for (int x = 0; x < grid; ++x)
            seeded.rho[static_cast<std::size_t>(y * grid + x)] +=
                0.0075 * std::sin(2.0 * std::numbers::pi * x / grid);
    auto range = [&](const std::vector<double>& f) {
        double lo = f[0], hi = f[0];
        for (double v : f) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi - lo;
    };
    const double r0 = range(seeded.rho);
    hydro::advance(seeded, pc, 4.0);
    const double r1 = range(seeded.rho);
    hydro::advance(seeded, pc, 8.0);
    const double r2 = range(seeded.rho);
    CHECK(r1 > 1.5 * r0);
    CHECK(r2 > 1.5 * r1);
}

TEST_CASE("flock with beta = 0 damps m at rate 2") {
    PdeConfig fc;
    fc.system = System::Flock;
    fc.D = 1.0;
    fc.lambda = 0.0;
    fc.beta = 0.0;
    auto state = hydro::uniform_state(System::Flock, 64, 1.0, 0.1);
    const double T = 0.3;
    hydro::advance(state, fc, T);
    for (double v : state.m) CHECK(v == doctest::Approx(0.1 * std::exp(-2.0 * T)).epsilon(0.01));
}

TEST_CASE("solver guards: CFL bound and invariant monitor") {
    auto state = hydro::uniform_state(System::Mips, 64, 0.5, 0.0);
    PdeConfig cfg = mips_cfg(1.0, 0.0, 0.0);
    cfg.dt = 1.0; // grossly violates the CFL bound
    CHECK_THROWS_AS(hydro::step_mips(state, cfg), StepRejected);

    auto bad = hydro::uniform_state(System::Mips, 64, 1.2, 0.0);
    PdeConfig ok = mips_cfg(1.0, 0.0, 0.0);
    CHECK_THROWS_AS(hydro::step_mips(bad, ok), StepRejected);
}

TEST_CASE("solve returns snapshots at the requested times") {
    auto state = hydro::state_from_profiles(
        System::Mips, {Profile::sine(0.3, 0.05, 1), Profile::constant(0.3)}, 100);
    const std::vector<double> times{0.0, 0.005, 0.01};
    const auto snaps = hydro::solve(state, mips_cfg(1.0, 1.0, 1.0), 0.01, times);
    REQUIRE(snaps.size() == 3);
    CHECK(snaps[0].time == doctest::Approx(0.0));
    CHECK(snaps[1].time == doctest::Approx(0.005));
    CHECK(snaps[2].time == doctest::Approx(0.01));
}
