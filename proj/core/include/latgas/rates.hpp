#pragma once

#include <cmath>
#include <vector>

#include "latgas/configuration.hpp"
#include "latgas/model.hpp"

namespace latgas {

enum class EventKind { SymmetricJump, ActiveJump, Flip };

/// One enabled transition channel of the generator, with its total rate.
/// Only channels that change the state are listed (blocked hops, exchanges
/// of identical contents and flips of absent particles are omitted).
struct EventRate {
    EventKind kind;
    int site;            ///< source site (base site of the bond for exchanges)
    int axis;            ///< jump axis, -1 for flips
    int step;            ///< jump direction along axis, 0 for flips/exchanges
    int species;         ///< +1 / -1 for typed channels, 0 for type-blind
    double rate;         ///< total rate of the channel
    double per_particle; ///< rate per participating particle (== rate unless aggregated)
};

struct RateTable {
    std::vector<EventRate> events;

    [[nodiscard]] double total(EventKind k) const {
        double r = 0.0;
        for (const auto& e : events)
            if (e.kind == k) r += e.rate;
        return r;
    }
    [[nodiscard]] double total() const {
        double r = 0.0;
        for (const auto& e : events) r += e.rate;
        return r;
    }
};

/// MIPS exclusion rates: bond exchange at D N^2, typed hop onto an empty
/// site at lambda N (+ along +e1, - along -e1), flip at gamma per particle.
inline RateTable rates_mips(const ExclusionConfig& cfg, const ModelSpec& spec) {
    spec.validate();
    const Lattice& lat = cfg.lattice;
    const double n2 = static_cast<double>(spec.side) * spec.side;
    const double stir = spec.D * n2;
    const double hop = spec.lambda * spec.side;
    RateTable t;
    for (const auto& e : lat.edges()) {
        if (cfg.state[static_cast<std::size_t>(e.site)] !=
            cfg.state[static_cast<std::size_t>(e.to)])
            t.events.push_back({EventKind::SymmetricJump, e.site, e.axis, 0, 0, stir, stir});
    }
    if (hop > 0.0) {
        for (int s = 0; s < lat.sites(); ++s) {
            const auto v = cfg.state[static_cast<std::size_t>(s)];
            if (v == 0) continue;
            const int target = lat.neighbor(s, 0, v);
            if (cfg.state[static_cast<std::size_t>(target)] == 0)
                t.events.push_back({EventKind::ActiveJump, s, 0, v, v, hop, hop});
        }
    }
    if (spec.gamma > 0.0) {
        for (int s = 0; s < lat.sites(); ++s) {
            const auto v = cfg.state[static_cast<std::size_t>(s)];
            if (v != 0)
                t.events.push_back({EventKind::Flip, s, -1, 0, v, spec.gamma, spec.gamma});
        }
    }
    return t;
}

/// Zero-range flip factors exp(-+ beta (n+ - n-)); guarded against overflow.
inline double zr_flip_factor(int species, double beta, std::int64_t imbalance) {
    const double x = -static_cast<double>(species) * beta * static_cast<double>(imbalance);
    if (x > 690.0) throw OverflowGuard("zero-range flip rate overflows double range");
    return std::exp(x);
}

/// Zero-range rates: each particle hops to either neighbor at D N^2, typed
/// extra hop at lambda N, and flips at exp(-+ beta (n+ - n-)) per particle.
/// Hops and flips are aggregated per (site, species) channel.
inline RateTable rates_zr(const ZeroRangeConfig& cfg, const ModelSpec& spec) {
    spec.validate();
    const Lattice& lat = cfg.lattice;
    const double n2 = static_cast<double>(spec.side) * spec.side;
    const double walk = spec.D * n2;
    const double hop = spec.lambda * spec.side;
    RateTable t;
    for (int s = 0; s < lat.sites(); ++s) {
        const auto np = static_cast<double>(cfg.n_plus[static_cast<std::size_t>(s)]);
        const auto nm = static_cast<double>(cfg.n_minus[static_cast<std::size_t>(s)]);
        const std::int64_t imb =
            static_cast<std::int64_t>(cfg.n_plus[static_cast<std::size_t>(s)]) -
            static_cast<std::int64_t>(cfg.n_minus[static_cast<std::size_t>(s)]);
        for (int step : {+1, -1}) {
            if (np > 0)
                t.events.push_back(
                    {EventKind::SymmetricJump, s, 0, step, +1, np * walk, walk});
            if (nm > 0)
                t.events.push_back(
                    {EventKind::SymmetricJump, s, 0, step, -1, nm * walk, walk});
        }
        if (hop > 0.0) {
            if (np > 0)
                t.events.push_back({EventKind::ActiveJump, s, 0, +1, +1, np * hop, hop});
            if (nm > 0)
                t.events.push_back({EventKind::ActiveJump, s, 0, -1, -1, nm * hop, hop});
        }
        if (np > 0) {
            const double c = zr_flip_factor(+1, spec.beta, imb);
            t.events.push_back({EventKind::Flip, s, -1, 0, +1, np * c, c});
        }
        if (nm > 0) {
            const double c = zr_flip_factor(-1, spec.beta, imb);
            t.events.push_back({EventKind::Flip, s, -1, 0, -1, nm * c, c});
        }
    }
    return t;
}

/// AEP rates: exclusion also on the symmetric part. A particle hops to an
/// empty neighbor at D N^2 per direction, typed hop along +-e1 at lambda N
/// onto an empty site, flips at gamma.
inline RateTable rates_aep(const ExclusionConfig& cfg, const ModelSpec& spec) {
    spec.validate();
    const Lattice& lat = cfg.lattice;
    const double n2 = static_cast<double>(spec.side) * spec.side;
    const double walk = spec.D * n2;
    const double hop = spec.lambda * spec.side;
    RateTable t;
    for (int s = 0; s < lat.sites(); ++s) {
        const auto v = cfg.state[static_cast<std::size_t>(s)];
        if (v == 0) continue;
        for (int a = 0; a < lat.dimension(); ++a) {
            for (int step : {+1, -1}) {
                if (step == -1 && spec.side == 2) break; // both steps reach the same site
                const int target = lat.neighbor(s, a, step);
                if (cfg.state[static_cast<std::size_t>(target)] == 0)
                    t.events.push_back({EventKind::SymmetricJump, s, a, step, v, walk, walk});
            }
        }
        if (hop > 0.0) {
            const int target = lat.neighbor(s, 0, v);
            if (cfg.state[static_cast<std::size_t>(target)] == 0)
                t.events.push_back({EventKind::ActiveJump, s, 0, v, v, hop, hop});
        }
        if (spec.gamma > 0.0)
            t.events.push_back({EventKind::Flip, s, -1, 0, v, spec.gamma, spec.gamma});
    }
    return t;
}

} // namespace latgas
