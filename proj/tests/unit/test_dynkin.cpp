#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "latgas/dynkin.hpp"
#include "support/stats.hpp"

using namespace latgas;

namespace {
double sine1(double u, double) { return std::sin(2.0 * std::numbers::pi * u); }
double one(double, double) { return 1.0; }
} // namespace

TEST_CASE("conserved observable has an exactly vanishing martingale") {
    ModelSpec spec;
    spec.kind = ModelKind::MipsExclusion;
    spec.dimension = 1;
    spec.side = 64;
    spec.D = 1.0;
    spec.lambda = 0.0;
    spec.gamma = 0.0;
    Lattice lat(1, 64);
    RngStream rng(21);
    SpeciesProfiles p{Profile::constant(0.3), Profile::constant(0.3)};
    auto cfg = init_exclusion(p, lat, rng);
    const auto s = dynkin_trajectory(cfg, spec, 0.2, one, rng);
    CHECK(std::abs(s.martingale) < 1e-12);
    CHECK(std::abs(s.drift_integral) < 1e-12);
}

TEST_CASE("zero-range quadratic-variation identity") {
    // zero-range flips run at e^{-+beta(n+ - n-)} regardless of gamma, so
    // sigma+ is never conserved; check E[M^2] = E[<M>] instead.
    ModelSpec spec;
    spec.kind = ModelKind::ZrFlock;
    spec.dimension = 1;
    spec.side = 128;
    spec.D = 1.0;
    spec.lambda = 1.0;
    spec.beta = 0.5;
    SpeciesProfiles p{Profile::constant(0.6), Profile::constant(0.4)};
    const auto st = martingale_variance_check(spec, p, sine1, 0.1, 80, 616);
    const double ratio = st.second_moment / st.mean_quadratic_variation;
    CHECK(ratio > 0.5);
    CHECK(ratio < 1.8);
}

TEST_CASE("martingale second moment matches the quadratic-variation identity") {
    ModelSpec spec;
    spec.kind = ModelKind::MipsExclusion;
    spec.dimension = 1;
    spec.side = 128;
    spec.D = 1.0;
    spec.lambda = 1.0;
    spec.gamma = 1.0;
    SpeciesProfiles p{Profile::constant(0.2), Profile::constant(0.2)};
    const auto st = martingale_variance_check(spec, p, sine1, 0.1, 120, 3131);
    CHECK(st.second_moment > 0.0);
    CHECK(st.mean_quadratic_variation > 0.0);
    const double ratio = st.second_moment / st.mean_quadratic_variation;
    CHECK(ratio > 0.55);
    CHECK(ratio < 1.6);
}

TEST_CASE("martingale variance halves when N doubles (small sizes)") {
    auto run = [&](int n) {
        ModelSpec spec;
        spec.kind = ModelKind::MipsExclusion;
        spec.dimension = 1;
        spec.side = n;
        spec.D = 1.0;
        spec.lambda = 1.0;
        spec.gamma = 1.0;
        SpeciesProfiles p{Profile::constant(0.2), Profile::constant(0.2)};
        return martingale_variance_check(spec, p, sine1, 0.1, 150, 999);
    };
    const auto small = run(64);
    const auto large = run(256);
    const double ratio = small.second_moment / large.second_moment;
    CHECK(ratio > 2.5);
    CHECK(ratio < 6.5);
}

TEST_CASE("ensemble guard") {
    ModelSpec spec;
    spec.kind = ModelKind::MipsExclusion;
    spec.dimension = 1;
    spec.side = 16;
    SpeciesProfiles p{Profile::constant(0.2), Profile::constant(0.2)};
    CHECK_THROWS_AS(martingale_variance_check(spec, p, one, 0.01, 10, 1), Error);
}
