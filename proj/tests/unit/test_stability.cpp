#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latgas/stability.hpp"
#include "support/stats.hpp"

using namespace latgas;
using namespace latgas::stability;

TEST_CASE("mips dispersion: limits and characteristic-polynomial identity") {
    // Pe = 0 decouples: s = {-q^2, -q^2 - 2}
    for (double q : {0.3, 1.0, 5.0}) {
        const auto r = dispersion_mips(0.6, 0.0, q);
        const double lo = std::min(r.s1.real(), r.s2.real());
        const double hi = std::max(r.s1.real(), r.s2.real());
        CHECK(hi == doctest::Approx(-q * q).epsilon(1e-12));
        CHECK(lo == doctest::Approx(-q * q - 2.0).epsilon(1e-12));
    }
    // q -> 0: conservation zero mode and flip decay
    const auto r0 = dispersion_mips(0.7, 5.0, 1e-9);
    CHECK(std::abs(r0.max_growth()) < 1e-8);
    CHECK(std::min(r0.s1.real(), r0.s2.real()) == doctest::Approx(-2.0).epsilon(1e-6));

    // trace / determinant identity of the assembled matrix
    for (double rho : {0.6, 0.75, 0.9}) {
        for (double pe : {2.0, 6.0}) {
            for (double q : {0.5, 2.0, 10.0}) {
                const auto r = dispersion_mips(rho, pe, q);
                const double tr_expected = -q * q - (q * q + 2.0);
                const std::complex<double> det_expected =
                    std::complex<double>(-q * q, 0) * std::complex<double>(-q * q - 2.0, 0) -
                    std::complex<double>(0, -q * pe * (1 - rho)) *
                        std::complex<double>(0, -q * pe * (1 - 2 * rho));
                CHECK(std::abs(r.trace() - tr_expected) < 1e-10 * std::abs(tr_expected));
                CHECK(std::abs(r.determinant() - det_expected) <=
                      1e-10 * (1.0 + std::abs(det_expected)));
            }
        }
    }
}

TEST_CASE("mips verdicts at the spec's reference points") {
    const auto unstable = max_growth_scan(
        [&](double q) { return dispersion_mips(0.75, 6.0, q).max_growth(); });
    CHECK(unstable.max_growth > growth_tol);
    const auto stable = max_growth_scan(
        [&](double q) { return dispersion_mips(0.75, 3.0, q).max_growth(); });
    CHECK(stable.max_growth <= growth_tol);
    CHECK(stable.decreasing_at_edge);
}

TEST_CASE("mips spinodal: bisection agrees with the closed form") {
    for (double rho : {0.6, 0.75, 0.9}) {
        const auto closed = spinodal_mips_closed_form(rho);
        REQUIRE(closed.has_value());
        const auto numeric = spinodal_mips(rho);
        REQUIRE(numeric.has_value());
        CHECK(*numeric == doctest::Approx(*closed).epsilon(1e-4));
    }
    CHECK(!spinodal_mips_closed_form(0.5).has_value());
    CHECK(!spinodal_mips_closed_form(0.3).has_value());
    CHECK(!spinodal_mips(0.4).has_value());
    CHECK_THROWS_AS(spinodal_mips(0.75, 10.0, 100.0), SearchWindowExceeded);
}

TEST_CASE("minimum critical Peclet number sits at rho = 3/4") {
    double best_rho = 0.0;
    double best = 1e300;
    for (double rho = 0.55; rho < 0.95; rho += 0.001) {
        const auto pe = spinodal_mips_closed_form(rho);
        if (pe && *pe < best) {
            best = *pe;
            best_rho = rho;
        }
    }
    CHECK(best == doctest::Approx(4.0).epsilon(0.0025));
    CHECK(best_rho == doctest::Approx(0.75).epsilon(0.015));
}

TEST_CASE("self-consistent magnetization root") {
    // slope at zero below one: only the trivial root
    CHECK(self_consistent_m(0.5, 0.5) == 0.0);
    CHECK(self_consistent_m(1.0, 0.8) == 0.0); // sinh(0.8) = 0.888 < 1
    // above threshold: positive root with F = 0 to 1e-10
    for (double rho : {1.0, 1.5, 2.5}) {
        for (double beta : {1.0, 1.5}) {
            if (rho * std::sinh(beta) <= 1.0) continue;
            const double m0 = self_consistent_m(rho, beta);
            CHECK(m0 > 0.0);
            CHECK(m0 < rho);
            CHECK(std::abs(evaluate_F(rho, m0, beta)) < 1e-10);
        }
    }
    // beta -> infinity: m0 -> rho
    CHECK(self_consistent_m(0.7, 20.0) == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("flock dispersion around the gaseous branch") {
    // beta = 0: stable for all rho and q
    for (double rho : {0.5, 2.0}) {
        const auto scan = max_growth_scan(
            [&](double q) { return dispersion_flock(rho, 0.0, 0.0, q, 1.0, 1.0).max_growth(); });
        CHECK(scan.max_growth <= growth_tol);
    }
    // onset at rho sinh(beta) = 1: dF/dm changes sign
    const double beta = 1.0;
    const double rho_c = 1.0 / std::sinh(beta);
    CHECK(dF_dm(rho_c, 0.0, beta) == doctest::Approx(0.0).epsilon(1e-12));
    const auto below = max_growth_scan([&](double q) {
        return dispersion_flock(rho_c * 0.98, 0.0, beta, q, 1.0, 1.0).max_growth();
    });
    CHECK(below.max_growth <= growth_tol);
    const auto above = max_growth_scan([&](double q) {
        return dispersion_flock(rho_c * 1.02, 0.0, beta, q, 1.0, 1.0).max_growth();
    });
    CHECK(above.max_growth > growth_tol);

    // q -> 0 on the stable side: zero mode plus -2 dF/dm
    const double rho_s = rho_c * 0.9;
    const auto r = dispersion_flock(rho_s, 0.0, beta, 1e-9, 1.0, 1.0);
    const double fm = dF_dm(rho_s, 0.0, beta);
    CHECK(fm > 0.0);
    CHECK(std::abs(r.max_growth()) < 1e-7);
    CHECK(std::min(r.s1.real(), r.s2.real()) == doctest::Approx(-2.0 * fm).epsilon(1e-5));
}

TEST_CASE("flock spinodal curves and the coexistence strip") {
    const std::vector<double> temps{0.8, 1.0, 1.25};
    const auto pts = spinodal_flock(temps, 1.0, 1.0);
    REQUIRE(pts.size() == temps.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double expected = 1.0 / std::sinh(1.0 / temps[i]);
        CHECK(pts[i].rho_gas_spinodal == doctest::Approx(expected).epsilon(1e-6));
        // the magnetized-branch boundary exists and bounds a nonempty strip
        REQUIRE(pts[i].rho_liquid_spinodal.has_value());
        CHECK(*pts[i].rho_liquid_spinodal > pts[i].rho_gas_spinodal);
    }
}

TEST_CASE("plateau extraction on synthetic profiles") {
    const int n = 256;
    std::vector<double> rho(n), m(n, 0.0);
    // uniform: no plateaus
    for (auto& v : rho) v = 0.6;
    CHECK(!extract_plateaus(rho, m).has_value());
    // two-phase band with tanh interfaces
    for (int j = 0; j < n; ++j) {
        const double u = static_cast<double>(j) / n;
        const double band = 0.5 * (std::tanh((u - 0.3) / 0.02) - std::tanh((u - 0.6) / 0.02));
        rho[static_cast<std::size_t>(j)] = 0.3 + 0.5 * band;
        m[static_cast<std::size_t>(j)] = 0.4 * band;
    }
    const auto p = extract_plateaus(rho, m);
    REQUIRE(p.has_value());
    CHECK(p->low == doctest::Approx(0.3).epsilon(0.02));
    CHECK(p->high == doctest::Approx(0.8).epsilon(0.02));
    CHECK(p->m_high > 0.35);
    CHECK(p->m_low < 0.05);
}

TEST_CASE("mips binodal from the pde: separation inside, none outside") {
    BinodalOptions opts;
    opts.grid = 256;
    opts.domain_length = 10.0;
    opts.t_max = 150.0;
    opts.peclet = 8.0;
    const auto res = binodal_from_pde(BinodalModel::MipsPeclet, 0.7, opts);
    REQUIRE(res.status == BinodalStatus::Ok);
    // spinodal densities at Pe = 8 from the closed form
    const double disc = std::sqrt(9.0 - 8.0 * (1.0 + 2.0 / 64.0));
    const double sp_lo = (3.0 - disc) / 4.0;
    const double sp_hi = (3.0 + disc) / 4.0;
    CHECK(res.rho_gas < sp_lo);
    CHECK(res.rho_liq > sp_hi);

    BinodalOptions stable = opts;
    stable.t_max = 40.0;
    const auto none = binodal_from_pde(BinodalModel::MipsPeclet, 0.75, [&] {
        BinodalOptions o = stable;
        o.peclet = 3.0;
        return o;
    }());
    CHECK(none.status == BinodalStatus::NoPhaseSeparation);
}

TEST_CASE("phase diagram sweeps have the expected structure") {
    std::vector<double> rhos, pes;
    for (double r = 0.55; r <= 0.951; r += 0.05) rhos.push_back(r);
    for (double p = 2.0; p <= 10.01; p += 1.0) pes.push_back(p);
    const auto points = phase_diagram_sweep_mips(rhos, pes);
    // all Pe < 4 stable; (0.75, 6) unstable
    int unstable_total = 0;
    for (const auto& pt : points) {
        if (pt.control < 4.0) CHECK(!pt.unstable);
        if (std::abs(pt.rho0 - 0.75) < 1e-9 && std::abs(pt.control - 6.0) < 1e-9)
            CHECK(pt.unstable);
        unstable_total += pt.unstable;
    }
    CHECK(unstable_total > 0);
    // per-rho rows: the unstable set is a contiguous Pe interval, and rows
    // with unstable points form a contiguous band (simply connected region)
    std::vector<std::pair<int, int>> spans;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        int first = -1, last = -1;
        for (std::size_t j = 0; j < pes.size(); ++j) {
            const auto& pt = points[i * pes.size() + j];
            if (pt.unstable) {
                if (first < 0) first = static_cast<int>(j);
                last = static_cast<int>(j);
            }
        }
        if (first >= 0) {
            for (int j = first; j <= last; ++j)
                CHECK(points[i * pes.size() + static_cast<std::size_t>(j)].unstable);
            spans.emplace_back(first, last);
        } else {
            spans.emplace_back(-1, -1);
        }
    }
    bool in_band = false, band_done = false;
    for (const auto& [f, l] : spans) {
        if (f >= 0) {
            CHECK(!band_done);
            in_band = true;
        } else if (in_band) {
            band_done = true;
        }
    }

    // flock verdict is monotone in rho at fixed temperature
    std::vector<double> frhos;
    for (double r = 0.2; r <= 3.01; r += 0.2) frhos.push_back(r);
    const std::vector<double> ts{1.0};
    const auto fpoints = phase_diagram_sweep_flock(frhos, ts, 1.0, 1.0);
    bool seen_unstable = false;
    for (const auto& pt : fpoints) {
        if (seen_unstable) CHECK(pt.unstable);
        seen_unstable |= pt.unstable;
    }
    CHECK(seen_unstable);
}
