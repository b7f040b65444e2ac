#include "latgas/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "latgas/fenwick.hpp"

namespace latgas {
namespace {

constexpr std::uint32_t zr_count_cap = 1u << 30;
constexpr int zr_table_halfwidth = 64;
constexpr std::uint64_t flip_rate_refresh_interval = 1ull << 22;

/// Precomputed periodic neighbor tables, one per (axis, step).
struct NeighborTables {
    std::array<std::vector<std::int32_t>, 4> nb; // [axis*2 + (step>0)]
    int dim;

    explicit NeighborTables(const Lattice& lat) : dim(lat.dimension()) {
        for (int a = 0; a < dim; ++a) {
            for (int sgn = 0; sgn < 2; ++sgn) {
                auto& v = nb[static_cast<std::size_t>(a * 2 + sgn)];
                v.resize(static_cast<std::size_t>(lat.sites()));
                for (int s = 0; s < lat.sites(); ++s)
                    v[static_cast<std::size_t>(s)] = lat.neighbor(s, a, sgn ? +1 : -1);
            }
        }
    }

    [[nodiscard]] int step(int site, int axis, int dir) const {
        return nb[static_cast<std::size_t>(axis * 2 + (dir > 0))][static_cast<std::size_t>(site)];
    }
};

/// Particle bookkeeping for exclusion states.
struct ParticleIndex {
    std::vector<std::int32_t> site_particle; // -1 when empty
    std::vector<std::int32_t> particle_site;
    std::vector<std::int8_t> particle_type;

    explicit ParticleIndex(const ExclusionConfig& cfg) {
        site_particle.assign(cfg.state.size(), -1);
        for (std::size_t s = 0; s < cfg.state.size(); ++s) {
            if (cfg.state[s] != 0) {
                site_particle[s] = static_cast<std::int32_t>(particle_site.size());
                particle_site.push_back(static_cast<std::int32_t>(s));
                particle_type.push_back(cfg.state[s]);
            }
        }
    }

    [[nodiscard]] std::size_t count() const { return particle_site.size(); }

    void move(int from, int to) {
        const std::int32_t p = site_particle[static_cast<std::size_t>(from)];
        site_particle[static_cast<std::size_t>(from)] = -1;
        site_particle[static_cast<std::size_t>(to)] = p;
        particle_site[static_cast<std::size_t>(p)] = to;
    }

    void swap_sites(int x, int y) {
        auto& px = site_particle[static_cast<std::size_t>(x)];
        auto& py = site_particle[static_cast<std::size_t>(y)];
        std::swap(px, py);
        if (px >= 0) particle_site[static_cast<std::size_t>(px)] = x;
        if (py >= 0) particle_site[static_cast<std::size_t>(py)] = y;
    }
};

/// Shared simulate skeleton: exponential waiting times against the current
/// total rate, snapshot boundaries handled by the memoryless property.
template <class ConfigT, class RateFn, class AttemptFn>
void run_events(ConfigT& cfg, double T, const Recorder<ConfigT>* recorder, RngStream& rng,
                EventObserver* obs, EngineStats& stats, RateFn&& total_rate,
                AttemptFn&& attempt) {
    const std::vector<double> no_times;
    const std::vector<double>& times = recorder ? recorder->times : no_times;
    std::size_t si = 0;
    double t = 0.0;

    auto emit = [&](double now) {
        while (si < times.size() && times[si] <= now) {
            recorder->sink(si, now, cfg);
            ++si;
        }
    };
    emit(0.0);

    while (t < T) {
        const double rate = total_rate();
        const double boundary = si < times.size() ? times[si] : T;
        if (!(rate > 0.0)) {
            if (obs) obs->advance(boundary - t);
            t = boundary;
            if (si < times.size()) emit(t);
            continue;
        }
        const double dt = rng.exponential(rate);
        if (t + dt >= boundary) {
            if (obs) obs->advance(boundary - t);
            t = boundary;
            if (si < times.size()) emit(t);
            continue;
        }
        if (obs) obs->advance(dt);
        t += dt;
        attempt(rate);
    }
    stats.final_time = t;
}

// ---------------------------------------------------------------------------
// MIPS exclusion: stirring exchanges + typed hops onto empty sites + flips.
// ---------------------------------------------------------------------------
EngineStats run_mips(ExclusionConfig& cfg, const ModelSpec& spec, double T, RngStream& rng,
                     const Recorder<ExclusionConfig>* recorder, CurrentLedger* ledger,
                     EventObserver* obs) {
    const Lattice& lat = cfg.lattice;
    const auto edges = lat.edges();
    NeighborTables nbt(lat);
    ParticleIndex part(cfg);
    EngineStats stats;

    const double n2 = static_cast<double>(spec.side) * spec.side;
    const double rate_sym = spec.D * n2 * static_cast<double>(edges.size());
    const double rate_active = spec.lambda * spec.side * static_cast<double>(part.count());
    const double rate_flip = spec.gamma * static_cast<double>(part.count());
    const double total = rate_sym + rate_active + rate_flip;
    auto* state = cfg.state.data();

    run_events(cfg, T, recorder, rng, obs, stats, [&] { return total; }, [&](double rate) {
        const double u = rng.uniform() * rate;
        if (u < rate_sym) {
            ++stats.attempts_sym;
            const auto& e = edges[rng.below(edges.size())];
            const std::int8_t a = state[e.site];
            const std::int8_t b = state[e.to];
            if (a == b) return;
            const AppliedEvent ev{EventKind::SymmetricJump, e.site, e.to, e.axis, +1, 0};
            if (obs) obs->before_event(ev);
            state[e.site] = b;
            state[e.to] = a;
            part.swap_sites(e.site, e.to);
            if (ledger) {
                const auto slot = static_cast<std::size_t>(lat.edge_slot(e.site, e.axis));
                if (a == 1) ++ledger->sym_plus[slot];
                else if (a == -1) ++ledger->sym_minus[slot];
                if (b == 1) --ledger->sym_plus[slot];
                else if (b == -1) --ledger->sym_minus[slot];
            }
            ++stats.moves_sym;
            if (obs) obs->after_event(ev);
        } else if (u < rate_sym + rate_active) {
            ++stats.attempts_active;
            const auto p = static_cast<std::size_t>(rng.below(part.count()));
            const std::int8_t type = part.particle_type[p];
            const int from = part.particle_site[p];
            const int to = nbt.step(from, 0, type);
            if (state[to] != 0) return;
            const AppliedEvent ev{EventKind::ActiveJump, from, to, 0, type, type};
            if (obs) obs->before_event(ev);
            state[to] = type;
            state[from] = 0;
            part.move(from, to);
            if (ledger) {
                auto& lane = type == 1 ? ledger->asym_plus : ledger->asym_minus;
                if (type == 1)
                    ++lane[static_cast<std::size_t>(lat.edge_slot(from, 0))];
                else
                    --lane[static_cast<std::size_t>(lat.edge_slot(to, 0))];
            }
            ++stats.moves_active;
            if (obs) obs->after_event(ev);
        } else {
            ++stats.attempts_flip;
            const auto p = static_cast<std::size_t>(rng.below(part.count()));
            const std::int8_t type = part.particle_type[p];
            const int site = part.particle_site[p];
            const AppliedEvent ev{EventKind::Flip, site, site, -1, 0, type};
            if (obs) obs->before_event(ev);
            part.particle_type[p] = static_cast<std::int8_t>(-type);
            state[site] = static_cast<std::int8_t>(-type);
            if (ledger) {
                if (type == 1) ++ledger->flips_down[static_cast<std::size_t>(site)];
                else ++ledger->flips_up[static_cast<std::size_t>(site)];
            }
            ++stats.flips;
            if (obs) obs->after_event(ev);
        }
    });
    return stats;
}

// ---------------------------------------------------------------------------
// AEP: the exclusion rule also applies to the symmetric jumps (non-gradient).
// ---------------------------------------------------------------------------
EngineStats run_aep(ExclusionConfig& cfg, const ModelSpec& spec, double T, RngStream& rng,
                    const Recorder<ExclusionConfig>* recorder, CurrentLedger* ledger,
                    EventObserver* obs) {
    const Lattice& lat = cfg.lattice;
    NeighborTables nbt(lat);
    ParticleIndex part(cfg);
    EngineStats stats;

    // On a two-site axis both steps reach the same neighbor; enumerate the
    // bond once so the rate convention matches rates_aep().
    const int dirs = (spec.side == 2 ? 1 : 2) * lat.dimension();
    const double n2 = static_cast<double>(spec.side) * spec.side;
    const double rate_sym = spec.D * n2 * dirs * static_cast<double>(part.count());
    const double rate_active = spec.lambda * spec.side * static_cast<double>(part.count());
    const double rate_flip = spec.gamma * static_cast<double>(part.count());
    const double total = rate_sym + rate_active + rate_flip;
    auto* state = cfg.state.data();

    auto apply_jump = [&](std::size_t p, int axis, int step, bool active) {
        const int from = part.particle_site[p];
        const int to = nbt.step(from, axis, step);
        if (state[to] != 0) return;
        const std::int8_t type = part.particle_type[p];
        const AppliedEvent ev{active ? EventKind::ActiveJump : EventKind::SymmetricJump,
                              from, to, axis, step, type};
        if (obs) obs->before_event(ev);
        state[to] = type;
        state[from] = 0;
        part.move(from, to);
        if (ledger) {
            auto& lane = active ? (type == 1 ? ledger->asym_plus : ledger->asym_minus)
                                : (type == 1 ? ledger->sym_plus : ledger->sym_minus);
            if (step > 0)
                ++lane[static_cast<std::size_t>(lat.edge_slot(from, axis))];
            else
                --lane[static_cast<std::size_t>(lat.edge_slot(to, axis))];
        }
        if (active) ++stats.moves_active;
        else ++stats.moves_sym;
        if (obs) obs->after_event(ev);
    };

    run_events(cfg, T, recorder, rng, obs, stats, [&] { return total; }, [&](double rate) {
        const double u = rng.uniform() * rate;
        if (u < rate_sym) {
            ++stats.attempts_sym;
            const auto p = static_cast<std::size_t>(rng.below(part.count()));
            const auto d = static_cast<int>(rng.below(static_cast<std::uint64_t>(dirs)));
            if (spec.side == 2)
                apply_jump(p, d, +1, false);
            else
                apply_jump(p, d >> 1, (d & 1) ? +1 : -1, false);
        } else if (u < rate_sym + rate_active) {
            ++stats.attempts_active;
            const auto p = static_cast<std::size_t>(rng.below(part.count()));
            apply_jump(p, 0, part.particle_type[p], true);
        } else {
            ++stats.attempts_flip;
            const auto p = static_cast<std::size_t>(rng.below(part.count()));
            const std::int8_t type = part.particle_type[p];
            const int site = part.particle_site[p];
            const AppliedEvent ev{EventKind::Flip, site, site, -1, 0, type};
            if (obs) obs->before_event(ev);
            part.particle_type[p] = static_cast<std::int8_t>(-type);
            state[site] = static_cast<std::int8_t>(-type);
            if (ledger) {
                if (type == 1) ++ledger->flips_down[static_cast<std::size_t>(site)];
                else ++ledger->flips_up[static_cast<std::size_t>(site)];
            }
            ++stats.flips;
            if (obs) obs->after_event(ev);
        }
    });
    return stats;
}

// ---------------------------------------------------------------------------
// Zero-range flocking model. Hops are aggregated per site (n+-_x times the
// per-particle rate, choosing the moved particle uniformly in its class is
// the same law); flip rates depend on the local imbalance and are kept as a
// per-site table with an incrementally maintained total.
// ---------------------------------------------------------------------------
struct ZrFlipRates {
    std::vector<double> site_rate;
    double total = 0.0;
    double beta;
    std::array<double, 2 * zr_table_halfwidth + 1> table_plus{};
    std::array<double, 2 * zr_table_halfwidth + 1> table_minus{};

    ZrFlipRates(const ZeroRangeConfig& cfg, double beta_in) : beta(beta_in) {
        for (int k = -zr_table_halfwidth; k <= zr_table_halfwidth; ++k) {
            table_plus[static_cast<std::size_t>(k + zr_table_halfwidth)] =
                zr_flip_factor(+1, beta, k);
            table_minus[static_cast<std::size_t>(k + zr_table_halfwidth)] =
                zr_flip_factor(-1, beta, k);
        }
        site_rate.assign(cfg.n_plus.size(), 0.0);
        for (std::size_t s = 0; s < site_rate.size(); ++s) {
            site_rate[s] = rate_of(cfg, s);
            total += site_rate[s];
        }
    }

    [[nodiscard]] double factor(int species, std::int64_t imbalance) const {
        if (imbalance >= -zr_table_halfwidth && imbalance <= zr_table_halfwidth) {
            const auto i = static_cast<std::size_t>(imbalance + zr_table_halfwidth);
            return species == 1 ? table_plus[i] : table_minus[i];
        }
        return zr_flip_factor(species, beta, imbalance);
    }

    [[nodiscard]] double rate_of(const ZeroRangeConfig& cfg, std::size_t s) const {
        const auto np = static_cast<std::int64_t>(cfg.n_plus[s]);
        const auto nm = static_cast<std::int64_t>(cfg.n_minus[s]);
        const std::int64_t imb = np - nm;
        double r = 0.0;
        if (np > 0) r += static_cast<double>(np) * factor(+1, imb);
        if (nm > 0) r += static_cast<double>(nm) * factor(-1, imb);
        return r;
    }

    void refresh_site(const ZeroRangeConfig& cfg, std::size_t s) {
        const double fresh = rate_of(cfg, s);
        total += fresh - site_rate[s];
        site_rate[s] = fresh;
    }

    void recompute_total() {
        total = 0.0;
        for (double r : site_rate) total += r;
    }
};

EngineStats run_zr(ZeroRangeConfig& cfg, const ModelSpec& spec, double T, RngStream& rng,
                   const Recorder<ZeroRangeConfig>* recorder, CurrentLedger* ledger,
                   EventObserver* obs) {
    const Lattice& lat = cfg.lattice;
    NeighborTables nbt(lat);
    EngineStats stats;

    std::vector<std::int64_t> wp(cfg.n_plus.begin(), cfg.n_plus.end());
    std::vector<std::int64_t> wm(cfg.n_minus.begin(), cfg.n_minus.end());
    Fenwick tree_plus{std::span<const std::int64_t>(wp)};
    Fenwick tree_minus{std::span<const std::int64_t>(wm)};

    const double n2 = static_cast<double>(spec.side) * spec.side;
    const double walk = spec.D * n2;          // per particle per direction
    const double hop = spec.lambda * spec.side; // per particle, typed direction
    ZrFlipRates flip(cfg, spec.beta);
    std::uint64_t since_refresh = 0;

    auto particles = [&] { return tree_plus.total() + tree_minus.total(); };

    auto pick_species_site = [&](std::int64_t idx) -> std::pair<int, std::size_t> {
        if (idx < tree_plus.total())
            return {+1, tree_plus.find(idx)};
        return {-1, tree_minus.find(idx - tree_plus.total())};
    };

    auto apply_move = [&](int species, std::size_t from, int step, bool active) {
        const auto to = static_cast<std::size_t>(nbt.step(static_cast<int>(from), 0, step));
        auto& counts = species == 1 ? cfg.n_plus : cfg.n_minus;
        if (counts[to] + 1 >= zr_count_cap)
            throw OverflowGuard("zero-range occupancy exceeded the storage bound");
        const AppliedEvent ev{active ? EventKind::ActiveJump : EventKind::SymmetricJump,
                              static_cast<int>(from), static_cast<int>(to), 0, step,
                              static_cast<std::int8_t>(species)};
        if (obs) obs->before_event(ev);
        --counts[from];
        ++counts[to];
        (species == 1 ? tree_plus : tree_minus).add(from, -1);
        (species == 1 ? tree_plus : tree_minus).add(to, +1);
        flip.refresh_site(cfg, from);
        flip.refresh_site(cfg, to);
        if (ledger) {
            auto& lane = active ? (species == 1 ? ledger->asym_plus : ledger->asym_minus)
                                : (species == 1 ? ledger->sym_plus : ledger->sym_minus);
            if (step > 0)
                ++lane[static_cast<std::size_t>(lat.edge_slot(static_cast<int>(from), 0))];
            else
                --lane[static_cast<std::size_t>(lat.edge_slot(static_cast<int>(to), 0))];
        }
        if (active) ++stats.moves_active;
        else ++stats.moves_sym;
        if (obs) obs->after_event(ev);
    };

    run_events(
        cfg, T, recorder, rng, obs, stats,
        [&] {
            const auto p = static_cast<double>(particles());
            return 2.0 * walk * p + hop * p + flip.total;
        },
        [&](double rate) {
            const auto p = static_cast<double>(particles());
            const double rate_walk = 2.0 * walk * p;
            const double rate_hop = hop * p;
            const double u = rng.uniform() * rate;
            if (u < rate_walk) {
                ++stats.attempts_sym;
                const auto [species, site] =
                    pick_species_site(static_cast<std::int64_t>(rng.below(
                        static_cast<std::uint64_t>(particles()))));
                const int step = (rng.next() & 1) ? +1 : -1;
                apply_move(species, site, step, false);
            } else if (u < rate_walk + rate_hop) {
                ++stats.attempts_active;
                const auto [species, site] =
                    pick_species_site(static_cast<std::int64_t>(rng.below(
                        static_cast<std::uint64_t>(particles()))));
                apply_move(species, site, species, true);
            } else {
                ++stats.attempts_flip;
                // rare event: linear scan over per-site flip rates
                double r = rng.uniform() * flip.total;
                std::size_t site = 0;
                const std::size_t last = flip.site_rate.size() - 1;
                while (site < last) {
                    if (r < flip.site_rate[site]) break;
                    r -= flip.site_rate[site];
                    ++site;
                }
                const auto np = static_cast<std::int64_t>(cfg.n_plus[site]);
                const auto nm = static_cast<std::int64_t>(cfg.n_minus[site]);
                if (np == 0 && nm == 0) return; // numerical drift fallback
                const std::int64_t imb = np - nm;
                const double plus_rate = static_cast<double>(np) * flip.factor(+1, imb);
                const int species = (np > 0 && (nm == 0 || r < plus_rate)) ? +1 : -1;
                const AppliedEvent ev{EventKind::Flip, static_cast<int>(site),
                                      static_cast<int>(site), -1, 0,
                                      static_cast<std::int8_t>(species)};
                if (obs) obs->before_event(ev);
                if (species == 1) {
                    --cfg.n_plus[site];
                    ++cfg.n_minus[site];
                    tree_plus.add(site, -1);
                    tree_minus.add(site, +1);
                    if (ledger) ++ledger->flips_down[site];
                } else {
                    --cfg.n_minus[site];
                    ++cfg.n_plus[site];
                    tree_minus.add(site, -1);
                    tree_plus.add(site, +1);
                    if (ledger) ++ledger->flips_up[site];
                }
                flip.refresh_site(cfg, site);
                ++stats.flips;
                if (obs) obs->after_event(ev);
            }
            if (++since_refresh >= flip_rate_refresh_interval) {
                since_refresh = 0;
                flip.recompute_total();
            }
        });
    return stats;
}

} // namespace

EngineStats simulate(ExclusionConfig& cfg, const ModelSpec& spec, double T, RngStream& rng,
                     const Recorder<ExclusionConfig>* recorder, CurrentLedger* ledger,
                     EventObserver* observer) {
    spec.validate();
    if (spec.kind == ModelKind::ZrFlock)
        throw Error("simulate: zero-range spec passed with an exclusion configuration");
    if (spec.side != cfg.lattice.side() || spec.dimension != cfg.lattice.dimension())
        throw Error("simulate: spec lattice does not match configuration lattice");
    if (T < 0.0) throw Error("simulate: T must be >= 0");
    if (recorder) recorder->validate(T);
    if (ledger && ledger->empty()) ledger->reset(cfg.lattice);
    return spec.kind == ModelKind::MipsExclusion
               ? run_mips(cfg, spec, T, rng, recorder, ledger, observer)
               : run_aep(cfg, spec, T, rng, recorder, ledger, observer);
}

EngineStats simulate(ZeroRangeConfig& cfg, const ModelSpec& spec, double T, RngStream& rng,
                     const Recorder<ZeroRangeConfig>* recorder, CurrentLedger* ledger,
                     EventObserver* observer) {
    spec.validate();
    if (spec.kind != ModelKind::ZrFlock)
        throw Error("simulate: exclusion spec passed with a zero-range configuration");
    if (spec.side != cfg.lattice.side() || spec.dimension != cfg.lattice.dimension())
        throw Error("simulate: spec lattice does not match configuration lattice");
    if (T < 0.0) throw Error("simulate: T must be >= 0");
    if (recorder) recorder->validate(T);
    if (ledger && ledger->empty()) ledger->reset(cfg.lattice);
    return run_zr(cfg, spec, T, rng, recorder, ledger, observer);
}

} // namespace latgas
