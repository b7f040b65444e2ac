#pragma once

#include <cstdint>
#include <vector>

#include "latgas/lattice.hpp"
#include "latgas/profile.hpp"
#include "latgas/rng.hpp"

namespace latgas {

/// Exclusion configuration: one value per site in {0,+1,-1}.
struct ExclusionConfig {
    Lattice lattice;
    std::vector<std::int8_t> state;

    explicit ExclusionConfig(const Lattice& lat)
        : lattice(lat), state(static_cast<std::size_t>(lat.sites()), 0) {}

    [[nodiscard]] std::int64_t count_plus() const {
        std::int64_t n = 0;
        for (auto v : state) n += (v == 1);
        return n;
    }
    [[nodiscard]] std::int64_t count_minus() const {
        std::int64_t n = 0;
        for (auto v : state) n += (v == -1);
        return n;
    }
    [[nodiscard]] std::int64_t count_particles() const { return count_plus() + count_minus(); }
    [[nodiscard]] std::int64_t magnetization() const { return count_plus() - count_minus(); }
};

/// Zero-range configuration: per-site pair of occupation numbers (n+, n-).
struct ZeroRangeConfig {
    Lattice lattice;
    std::vector<std::uint32_t> n_plus;
    std::vector<std::uint32_t> n_minus;

    explicit ZeroRangeConfig(const Lattice& lat)
        : lattice(lat),
          n_plus(static_cast<std::size_t>(lat.sites()), 0),
          n_minus(static_cast<std::size_t>(lat.sites()), 0) {}

    [[nodiscard]] std::int64_t count_plus() const {
        std::int64_t n = 0;
        for (auto v : n_plus) n += v;
        return n;
    }
    [[nodiscard]] std::int64_t count_minus() const {
        std::int64_t n = 0;
        for (auto v : n_minus) n += v;
        return n;
    }
    [[nodiscard]] std::int64_t count_particles() const { return count_plus() + count_minus(); }
    [[nodiscard]] std::int64_t magnetization() const { return count_plus() - count_minus(); }
};

namespace detail {
inline std::int64_t site_plus(const ExclusionConfig& c, int s) {
    return c.state[static_cast<std::size_t>(s)] == 1 ? 1 : 0;
}
inline std::int64_t site_minus(const ExclusionConfig& c, int s) {
    return c.state[static_cast<std::size_t>(s)] == -1 ? 1 : 0;
}
inline std::int64_t site_plus(const ZeroRangeConfig& c, int s) {
    return c.n_plus[static_cast<std::size_t>(s)];
}
inline std::int64_t site_minus(const ZeroRangeConfig& c, int s) {
    return c.n_minus[static_cast<std::size_t>(s)];
}
} // namespace detail

/// Per-site occupation fields sigma+ , sigma-, sigma = sigma+ + sigma-.
struct SigmaFields {
    std::vector<double> plus;
    std::vector<double> minus;
    std::vector<double> total;
};

inline SigmaFields sigma_fields(const ExclusionConfig& cfg) {
    const auto n = cfg.state.size();
    SigmaFields f{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        f.plus[i] = cfg.state[i] == 1 ? 1.0 : 0.0;
        f.minus[i] = cfg.state[i] == -1 ? 1.0 : 0.0;
        f.total[i] = f.plus[i] + f.minus[i];
    }
    return f;
}

inline SigmaFields sigma_fields(const ZeroRangeConfig& cfg) {
    const auto n = cfg.n_plus.size();
    SigmaFields f{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        f.plus[i] = static_cast<double>(cfg.n_plus[i]);
        f.minus[i] = static_cast<double>(cfg.n_minus[i]);
        f.total[i] = f.plus[i] + f.minus[i];
    }
    return f;
}

/// Product initial state: site x is +1 w.p. rho+(x/N), -1 w.p. rho-(x/N),
/// empty otherwise, independently across sites.
inline ExclusionConfig init_exclusion(const SpeciesProfiles& profiles, const Lattice& lat,
                                      RngStream& rng) {
    validate_for_exclusion(profiles, lat);
    ExclusionConfig cfg(lat);
    for (int s = 0; s < lat.sites(); ++s) {
        const auto [rp, rm] = profiles.at(lat, s);
        const double u = rng.uniform();
        if (u < rp)
            cfg.state[static_cast<std::size_t>(s)] = 1;
        else if (u < rp + rm)
            cfg.state[static_cast<std::size_t>(s)] = -1;
    }
    return cfg;
}

/// Product Poisson initial state: (n+_x, n-_x) independent Poisson variables
/// with means rho+(x/N), rho-(x/N).
inline ZeroRangeConfig init_zero_range_poisson(const SpeciesProfiles& profiles,
                                               const Lattice& lat, RngStream& rng) {
    validate_nonnegative(profiles, lat);
    ZeroRangeConfig cfg(lat);
    for (int s = 0; s < lat.sites(); ++s) {
        const auto [rp, rm] = profiles.at(lat, s);
        cfg.n_plus[static_cast<std::size_t>(s)] = static_cast<std::uint32_t>(rng.poisson(rp));
        cfg.n_minus[static_cast<std::size_t>(s)] = static_cast<std::uint32_t>(rng.poisson(rm));
    }
    return cfg;
}

} // namespace latgas
