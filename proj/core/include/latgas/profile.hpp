#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "latgas/errors.hpp"
#include "latgas/lattice.hpp"

namespace latgas {

/// Macroscopic density profile on the unit torus. Profiles are functions of
/// (u1,u2); every preset varies along u1 only, which is the drift axis.
/// Tabulated profiles use periodic linear interpolation in u1.
class Profile {
public:
    Profile() : fn_([](double, double) { return 0.0; }) {}

    static Profile constant(double c) {
        return Profile([c](double, double) { return c; });
    }

    /// base + amp * sin(2*pi*k*u1)
    static Profile sine(double base, double amp, int k = 1) {
        return Profile([base, amp, k](double u, double) {
            return base + amp * std::sin(2.0 * std::numbers::pi * k * u);
        });
    }

    /// left for u1 < 1/2, right otherwise.
    static Profile step(double left, double right) {
        return Profile([left, right](double u, double) { return u < 0.5 ? left : right; });
    }

    /// c on [0,1/2], 0 on (1/2,1).
    static Profile slab(double c) {
        return Profile([c](double u, double) { return u <= 0.5 ? c : 0.0; });
    }

    static Profile tabulated(std::vector<double> values) {
        if (values.empty()) throw ProfileInvalid("tabulated profile needs at least one value");
        return Profile([vals = std::move(values)](double u, double) {
            const double pos = (u - std::floor(u)) * static_cast<double>(vals.size());
            const auto i = static_cast<std::size_t>(pos);
            const double frac = pos - static_cast<double>(i);
            const std::size_t j = (i + 1) % vals.size();
            return vals[i % vals.size()] * (1.0 - frac) + vals[j] * frac;
        });
    }

    static Profile from_function(std::function<double(double, double)> f) {
        return Profile(std::move(f));
    }

    double operator()(double u1, double u2 = 0.0) const { return fn_(u1, u2); }

private:
    explicit Profile(std::function<double(double, double)> f) : fn_(std::move(f)) {}
    std::function<double(double, double)> fn_;
};

/// Initial profile pair (rho+, rho-).
struct SpeciesProfiles {
    Profile plus;
    Profile minus;

    std::pair<double, double> at(const Lattice& lat, int site) const {
        const double u1 = lat.unit_coord(site, 0);
        const double u2 = lat.dimension() == 2 ? lat.unit_coord(site, 1) : 0.0;
        return {plus(u1, u2), minus(u1, u2)};
    }
};

/// Exclusion constraint: both species nonnegative, sum <= 1 at every site.
inline void validate_for_exclusion(const SpeciesProfiles& p, const Lattice& lat) {
    constexpr double eps = 1e-12;
    for (int s = 0; s < lat.sites(); ++s) {
        const auto [rp, rm] = p.at(lat, s);
        if (rp < -eps || rm < -eps)
            throw ProfileInvalid("profile negative at site " + std::to_string(s));
        if (rp + rm > 1.0 + eps)
            throw ProfileInvalid("rho+ + rho- > 1 at site " + std::to_string(s));
    }
}

/// Zero-range constraint: both species nonnegative (unbounded above).
inline void validate_nonnegative(const SpeciesProfiles& p, const Lattice& lat) {
    constexpr double eps = 1e-12;
    for (int s = 0; s < lat.sites(); ++s) {
        const auto [rp, rm] = p.at(lat, s);
        if (rp < -eps || rm < -eps)
            throw ProfileInvalid("profile negative at site " + std::to_string(s));
    }
}

} // namespace latgas
