#pragma once

#include <cstdint>
#include <vector>

#include "latgas/configuration.hpp"
#include "latgas/lattice.hpp"

namespace latgas {

/// Integer accounting of every state-changing event. Crossings are signed
/// per (site,axis) slot: +1 when a particle of the given type moves from
/// site to site+e_axis, -1 for the reverse. Symmetric-class and active-class
/// crossings are kept separate; flips are counted per site and direction.
struct CurrentLedger {
    std::vector<std::int64_t> sym_plus, sym_minus; ///< stirring / symmetric-jump crossings
    std::vector<std::int64_t> asym_plus, asym_minus; ///< active-jump crossings
    std::vector<std::int64_t> flips_up;   ///< - -> + per site
    std::vector<std::int64_t> flips_down; ///< + -> - per site

    CurrentLedger() = default;
    explicit CurrentLedger(const Lattice& lat) { reset(lat); }

    void reset(const Lattice& lat) {
        const auto e = static_cast<std::size_t>(lat.edge_slots());
        const auto s = static_cast<std::size_t>(lat.sites());
        sym_plus.assign(e, 0);
        sym_minus.assign(e, 0);
        asym_plus.assign(e, 0);
        asym_minus.assign(e, 0);
        flips_up.assign(s, 0);
        flips_down.assign(s, 0);
    }

    [[nodiscard]] bool empty() const { return sym_plus.empty(); }

    /// Net + crossings out of `site` along `axis` (symmetric + active).
    [[nodiscard]] std::int64_t net_plus(const Lattice& lat, int site, int axis) const {
        const auto e = static_cast<std::size_t>(lat.edge_slot(site, axis));
        return sym_plus[e] + asym_plus[e];
    }
    [[nodiscard]] std::int64_t net_minus(const Lattice& lat, int site, int axis) const {
        const auto e = static_cast<std::size_t>(lat.edge_slot(site, axis));
        return sym_minus[e] + asym_minus[e];
    }

    /// Change of sigma+_x implied by the recorded currents and flips:
    /// incoming minus outgoing crossings plus net flips into type +.
    [[nodiscard]] std::vector<std::int64_t> implied_delta_plus(const Lattice& lat) const {
        std::vector<std::int64_t> delta(static_cast<std::size_t>(lat.sites()), 0);
        for (int s = 0; s < lat.sites(); ++s) {
            std::int64_t d = flips_up[static_cast<std::size_t>(s)] -
                             flips_down[static_cast<std::size_t>(s)];
            for (int a = 0; a < lat.dimension(); ++a) {
                d -= net_plus(lat, s, a);
                d += net_plus(lat, lat.neighbor(s, a, -1), a);
            }
            delta[static_cast<std::size_t>(s)] = d;
        }
        return delta;
    }

    [[nodiscard]] std::vector<std::int64_t> implied_delta_minus(const Lattice& lat) const {
        std::vector<std::int64_t> delta(static_cast<std::size_t>(lat.sites()), 0);
        for (int s = 0; s < lat.sites(); ++s) {
            std::int64_t d = flips_down[static_cast<std::size_t>(s)] -
                             flips_up[static_cast<std::size_t>(s)];
            for (int a = 0; a < lat.dimension(); ++a) {
                d -= net_minus(lat, s, a);
                d += net_minus(lat, lat.neighbor(s, a, -1), a);
            }
            delta[static_cast<std::size_t>(s)] = d;
        }
        return delta;
    }
};

/// Discrete continuity identity, exact per site and species:
///   sigma+-(after) - sigma+-(before) == implied delta from the ledger.
template <class ConfigT>
bool continuity_holds(const CurrentLedger& ledger, const ConfigT& before, const ConfigT& after) {
    const Lattice& lat = before.lattice;
    const auto dp = ledger.implied_delta_plus(lat);
    const auto dm = ledger.implied_delta_minus(lat);
    for (int s = 0; s < lat.sites(); ++s) {
        if (detail::site_plus(after, s) - detail::site_plus(before, s) !=
            dp[static_cast<std::size_t>(s)])
            return false;
        if (detail::site_minus(after, s) - detail::site_minus(before, s) !=
            dm[static_cast<std::size_t>(s)])
            return false;
    }
    return true;
}

} // namespace latgas
