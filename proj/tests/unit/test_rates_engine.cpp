#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "latgas/engine.hpp"
#include "latgas/parallel.hpp"
#include "support/stats.hpp"

using namespace latgas;

namespace {

ModelSpec mips_spec(int side, double D, double lambda, double gamma, int dim = 1) {
    ModelSpec s;
    s.kind = ModelKind::MipsExclusion;
    s.dimension = dim;
    s.side = side;
    s.D = D;
    s.lambda = lambda;
    s.gamma = gamma;
    return s;
}

ModelSpec zr_spec(int side, double D, double lambda, double beta) {
    ModelSpec s;
    s.kind = ModelKind::ZrFlock;
    s.dimension = 1;
    s.side = side;
    s.D = D;
    s.lambda = lambda;
    s.beta = beta;
    return s;
}

ModelSpec aep_spec(int side, double D, double lambda, double gamma) {
    ModelSpec s;
    s.kind = ModelKind::Aep;
    s.dimension = 2;
    s.side = side;
    s.D = D;
    s.lambda = lambda;
    s.gamma = gamma;
    return s;
}

} // namespace

TEST_CASE("mips rates: lone particle reduces to a symmetric walk") {
    for (int dim : {1, 2}) {
        const int n = 8;
        Lattice lat(dim, n);
        ExclusionConfig cfg(lat);
        cfg.state[3] = 1;
        const auto spec = mips_spec(n, 1.5, 0.0, 0.0, dim);
        const auto t = rates_mips(cfg, spec);
        CHECK(t.total(EventKind::SymmetricJump) ==
              doctest::Approx(2 * dim * spec.D * n * n));
        CHECK(t.total(EventKind::ActiveJump) == 0.0);
        CHECK(t.total(EventKind::Flip) == 0.0);
    }
}

TEST_CASE("mips rates: jammed lattice blocks all active hops") {
    const int n = 6;
    Lattice lat(1, n);
    ExclusionConfig cfg(lat);
    for (int s = 0; s < n; ++s) cfg.state[static_cast<std::size_t>(s)] = s % 2 ? 1 : -1;
    const auto t = rates_mips(cfg, mips_spec(n, 1.0, 2.0, 0.5));
    CHECK(t.total(EventKind::ActiveJump) == 0.0);
    CHECK(t.total(EventKind::Flip) == doctest::Approx(0.5 * n));
}

TEST_CASE("mips rates on the two-site ring, enumerated by hand") {
    Lattice lat(1, 2);
    ExclusionConfig cfg(lat);
    cfg.state = {1, -1};
    const double D = 1.3, gamma = 0.7;
    const auto t = rates_mips(cfg, mips_spec(2, D, 2.0, gamma));
    CHECK(t.total(EventKind::SymmetricJump) == doctest::Approx(D * 4.0)); // one bond at D N^2
    CHECK(t.total(EventKind::ActiveJump) == 0.0);                         // both hops blocked
    CHECK(t.total(EventKind::Flip) == doctest::Approx(2.0 * gamma));
}

TEST_CASE("zero-range rates: flip factors and free-walk totals") {
    const int n = 4;
    Lattice lat(1, n);
    ZeroRangeConfig cfg(lat);
    cfg.n_plus = {3, 0, 0, 0};
    cfg.n_minus = {1, 0, 0, 0};

    // beta = 0: every particle flips at rate 1
    auto t = rates_zr(cfg, zr_spec(n, 1.0, 0.0, 0.0));
    CHECK(t.total(EventKind::Flip) == doctest::Approx(4.0));

    // beta = 1, site (3,1): per-particle + rate e^{-2}, - rate e^{+2}
    t = rates_zr(cfg, zr_spec(n, 1.0, 0.0, 1.0));
    double plus_rate = 0.0, minus_rate = 0.0;
    for (const auto& e : t.events) {
        if (e.kind != EventKind::Flip) continue;
        (e.species == 1 ? plus_rate : minus_rate) = e.per_particle;
    }
    CHECK(plus_rate == doctest::Approx(std::exp(-2.0)));
    CHECK(minus_rate == doctest::Approx(std::exp(2.0)));

    // lambda = 0: total hop rate out of a site with k particles is 2 k D N^2
    t = rates_zr(cfg, zr_spec(n, 2.0, 0.0, 1.0));
    CHECK(t.total(EventKind::SymmetricJump) == doctest::Approx(2.0 * 4 * 2.0 * n * n));
}

TEST_CASE("aep rates: exclusion on every jump") {
    const int n = 6;
    Lattice lat(2, n);
    ExclusionConfig cfg(lat);
    // fully packed: only flips fire
    for (auto& v : cfg.state) v = 1;
    auto t = rates_aep(cfg, aep_spec(n, 1.0, 2.0, 0.3));
    CHECK(t.total(EventKind::SymmetricJump) == 0.0);
    CHECK(t.total(EventKind::ActiveJump) == 0.0);
    CHECK(t.total(EventKind::Flip) == doctest::Approx(0.3 * n * n));

    // two adjacent opposite particles: no enumerated event swaps them
    ExclusionConfig two(lat);
    two.state[static_cast<std::size_t>(lat.index(2, 2))] = 1;
    two.state[static_cast<std::size_t>(lat.index(3, 2))] = -1;
    t = rates_aep(two, aep_spec(n, 1.0, 2.0, 0.0));
    for (const auto& e : t.events) {
        if (e.kind == EventKind::Flip) continue;
        const int target = lat.neighbor(e.site, e.axis, e.step);
        CHECK(two.state[static_cast<std::size_t>(target)] == 0); // always onto empty
    }

    // isolated particle: same law as the MIPS lone particle
    ExclusionConfig one(lat);
    one.state[static_cast<std::size_t>(lat.index(1, 1))] = 1;
    t = rates_aep(one, aep_spec(n, 1.5, 0.0, 0.0));
    CHECK(t.total(EventKind::SymmetricJump) == doctest::Approx(4 * 1.5 * n * n));
}

TEST_CASE("simulate T=0 returns the input and an all-zero ledger") {
    Lattice lat(1, 32);
    RngStream rng(1);
    SpeciesProfiles p{Profile::constant(0.3), Profile::constant(0.3)};
    auto cfg = init_exclusion(p, lat, rng);
    const auto before = cfg.state;
    CurrentLedger ledger(lat);
    simulate(cfg, mips_spec(32, 1.0, 1.0, 1.0), 0.0, rng, nullptr, &ledger);
    CHECK(cfg.state == before);
    for (auto v : ledger.sym_plus) CHECK(v == 0);
    for (auto v : ledger.flips_up) CHECK(v == 0);
}

TEST_CASE("stirring conserves particle number and magnetization") {
    Lattice lat(1, 128);
    RngStream rng(17);
    SpeciesProfiles p{Profile::constant(0.25), Profile::constant(0.35)};
    auto cfg = init_exclusion(p, lat, rng);
    const auto np0 = cfg.count_plus();
    const auto nm0 = cfg.count_minus();
    simulate(cfg, mips_spec(128, 1.0, 0.0, 0.0), 0.5, rng);
    CHECK(cfg.count_plus() == np0);
    CHECK(cfg.count_minus() == nm0);
}

TEST_CASE("continuity identity holds event-exactly for all three dynamics") {
    SUBCASE("mips 1d") {
        Lattice lat(1, 64);
        RngStream rng(3);
        SpeciesProfiles p{Profile::constant(0.3), Profile::constant(0.2)};
        auto cfg = init_exclusion(p, lat, rng);
        const auto before = cfg;
        CurrentLedger ledger(lat);
        simulate(cfg, mips_spec(64, 1.0, 2.0, 3.0), 0.05, rng, nullptr, &ledger);
        CHECK(continuity_holds(ledger, before, cfg));
        // magnetization changes by exactly +-2 per flip
        std::int64_t flips_up = 0, flips_down = 0;
        for (auto v : ledger.flips_up) flips_up += v;
        for (auto v : ledger.flips_down) flips_down += v;
        CHECK(cfg.magnetization() - before.magnetization() == 2 * (flips_up - flips_down));
    }
    SUBCASE("mips 2d") {
        Lattice lat(2, 16);
        RngStream rng(4);
        SpeciesProfiles p{Profile::constant(0.35), Profile::constant(0.35)};
        auto cfg = init_exclusion(p, lat, rng);
        const auto before = cfg;
        CurrentLedger ledger(lat);
        simulate(cfg, mips_spec(16, 1.0, 4.0, 2.0, 2), 0.05, rng, nullptr, &ledger);
        CHECK(continuity_holds(ledger, before, cfg));
    }
    SUBCASE("zero range") {
        Lattice lat(1, 64);
        RngStream rng(5);
        SpeciesProfiles p{Profile::constant(0.8), Profile::constant(0.5)};
        auto cfg = init_zero_range_poisson(p, lat, rng);
        const auto before = cfg;
        CurrentLedger ledger(lat);
        simulate(cfg, zr_spec(64, 1.0, 1.5, 0.7), 0.05, rng, nullptr, &ledger);
        CHECK(continuity_holds(ledger, before, cfg));
        CHECK(cfg.count_particles() == before.count_particles());
    }
    SUBCASE("aep") {
        Lattice lat(2, 16);
        RngStream rng(6);
        SpeciesProfiles p{Profile::constant(0.3), Profile::constant(0.3)};
        auto cfg = init_exclusion(p, lat, rng);
        const auto before = cfg;
        CurrentLedger ledger(lat);
        simulate(cfg, aep_spec(16, 1.0, 1.0, 0.5), 0.05, rng, nullptr, &ledger);
        CHECK(continuity_holds(ledger, before, cfg));
    }
}

TEST_CASE("identical seeds give identical trajectories") {
    Lattice lat(1, 96);
    SpeciesProfiles p{Profile::sine(0.3, 0.1, 1), Profile::constant(0.3)};
    auto run = [&] {
        RngStream rng(123456);
        auto cfg = init_exclusion(p, lat, rng);
        CurrentLedger ledger(lat);
        simulate(cfg, mips_spec(96, 1.0, 1.0, 1.0), 0.1, rng, nullptr, &ledger);
        return std::pair{cfg.state, ledger.sym_plus};
    };
    const auto a = run();
    const auto b = run();
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
}

TEST_CASE("stirring stationarity: one-site marginals stay at the product measure") {
    const int n = 128;
    const int seeds = 300;
    const double rp = 0.3, rm = 0.2;
    Lattice lat(1, n);
    SpeciesProfiles p{Profile::constant(rp), Profile::constant(rm)};
    const int probe_sites[3] = {10, 60, 110};
    std::vector<std::array<int, 3>> per_seed(seeds);
    parallel_for(0, seeds, [&](int i) {
        RngStream rng(777, static_cast<std::uint64_t>(i));
        auto cfg = init_exclusion(p, lat, rng);
        simulate(cfg, mips_spec(n, 1.0, 0.0, 0.0), 0.2, rng);
        std::array<int, 3> c{0, 0, 0};
        for (int s : probe_sites) {
            const auto v = cfg.state[static_cast<std::size_t>(s)];
            ++c[static_cast<std::size_t>(v == 1 ? 0 : (v == -1 ? 1 : 2))];
        }
        per_seed[static_cast<std::size_t>(i)] = c;
    });
    int np = 0, nm = 0, n0 = 0;
    for (const auto& c : per_seed) {
        np += c[0];
        nm += c[1];
        n0 += c[2];
    }
    const int total = 3 * seeds;
    auto check_one = [&](int count, double prob) {
        const double sd = std::sqrt(total * prob * (1 - prob));
        CHECK(std::abs(count - total * prob) < 3.0 * sd + 1.0);
    };
    check_one(np, rp);
    check_one(nm, rm);
    check_one(n0, 1 - rp - rm);
}

TEST_CASE("zero-range stationarity: site totals stay Poisson") {
    const int n = 256;
    const int seeds = 24;
    Lattice lat(1, n);
    SpeciesProfiles p{Profile::constant(0.5), Profile::constant(0.5)};
    std::vector<std::map<int, int>> hists(seeds);
    parallel_for(0, seeds, [&](int i) {
        RngStream rng(888, static_cast<std::uint64_t>(i));
        auto cfg = init_zero_range_poisson(p, lat, rng);
        simulate(cfg, zr_spec(n, 1.0, 0.0, 1.0), 0.2, rng);
        for (int s = 0; s < n; ++s)
            ++hists[static_cast<std::size_t>(i)][static_cast<int>(
                cfg.n_plus[static_cast<std::size_t>(s)] +
                cfg.n_minus[static_cast<std::size_t>(s)])];
    });
    std::map<int, int> hist;
    for (const auto& h : hists)
        for (const auto& [k, c] : h) hist[k] += c;
    const double total = n * seeds;
    double pk = std::exp(-1.0); // Poisson(1)
    for (int k = 0; k <= 5; ++k) {
        const double expected = total * pk;
        const double sd = std::sqrt(total * pk * (1 - pk));
        CHECK(std::abs(hist[k] - expected) < 3.0 * sd + 1.0);
        pk /= (k + 1);
    }
}

TEST_CASE("symmetric event counts scale as the rate-class totals") {
    // zero range: attempts per unit time = 2 D N^2 * particles (density factor)
    {
        const int n = 64;
        Lattice lat(1, n);
        RngStream rng(9);
        SpeciesProfiles p{Profile::constant(0.4), Profile::constant(0.2)};
        auto cfg = init_zero_range_poisson(p, lat, rng);
        const auto particles = static_cast<double>(cfg.count_particles());
        const double T = 0.2;
        const auto stats = simulate(cfg, zr_spec(n, 1.0, 0.0, 0.0), T, rng);
        const double expected = 2.0 * n * n * particles * T;
        CHECK(static_cast<double>(stats.attempts_sym) > expected / 2);
        CHECK(static_cast<double>(stats.attempts_sym) < expected * 2);
    }
    // mips: attempts per unit time = D N^2 * bonds
    {
        const int n = 64;
        Lattice lat(1, n);
        RngStream rng(10);
        SpeciesProfiles p{Profile::constant(0.3), Profile::constant(0.3)};
        auto cfg = init_exclusion(p, lat, rng);
        const double T = 0.1;
        const auto stats = simulate(cfg, mips_spec(n, 1.0, 0.0, 0.0), T, rng);
        const double expected = 1.0 * n * n * n * T;
        CHECK(static_cast<double>(stats.attempts_sym) > expected / 2);
        CHECK(static_cast<double>(stats.attempts_sym) < expected * 2);
    }
}

TEST_CASE("time-averaged magnetization vanishes for the symmetric ensemble") {
    const int n = 400;
    const int seeds = 100;
    const double T = 5.0;
    Lattice lat(1, n);
    SpeciesProfiles p{Profile::constant(0.2), Profile::constant(0.2)};
    std::vector<double> averages(seeds);
    parallel_for(0, seeds, [&](int i) {
        RngStream rng(4242, static_cast<std::uint64_t>(i));
        auto cfg = init_exclusion(p, lat, rng);
        double acc = 0.0;
        int count = 0;
        Recorder<ExclusionConfig> rec;
        rec.times = uniform_schedule(T, 11);
        rec.sink = [&](std::size_t, double, const ExclusionConfig& c) {
            acc += static_cast<double>(c.magnetization()) / n;
            ++count;
        };
        simulate(cfg, mips_spec(n, 0.1, 0.5, 1.0), T, rng, &rec);
        averages[static_cast<std::size_t>(i)] = acc / count;
    });
    const double m = teststat::mean(averages);
    const double se = teststat::stderr_of_mean(averages);
    CHECK(std::abs(m) < 3.0 * se + 1e-12);
}

TEST_CASE("zero-range overflow guard trips on absurd occupancy") {
    Lattice lat(1, 4);
    ZeroRangeConfig cfg(lat);
    cfg.n_plus = {40, 0, 0, 0};
    cfg.n_minus = {1, 0, 0, 0};
    // the minority-species flip factor e^{+beta(n+ - n-)} overflows
    CHECK_THROWS_AS(rates_zr(cfg, zr_spec(4, 1.0, 0.0, 20.0)), OverflowGuard);
}
