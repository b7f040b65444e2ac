#include "latgas/nongradient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latgas/coarse.hpp"
#include "latgas/engine.hpp"
#include "latgas/ledger.hpp"
#include "latgas/parallel.hpp"

namespace latgas::nongrad {

std::pair<int, int> aep_current_terms(const ExclusionConfig& cfg, int site, int axis) {
    const Lattice& lat = cfg.lattice;
    const int to = lat.neighbor(site, axis, +1);
    const auto sp = static_cast<int>(detail::site_plus(cfg, site));
    const auto sp_to = static_cast<int>(detail::site_plus(cfg, to));
    const auto s = cfg.state[static_cast<std::size_t>(site)] != 0 ? 1 : 0;
    const auto s_to = cfg.state[static_cast<std::size_t>(to)] != 0 ? 1 : 0;
    return {sp * (1 - s_to) - sp_to * (1 - s), s - s_to};
}

namespace {

/// Minimal symmetric-dynamics walker with unwrapped displacement tracking.
/// Runs either the hop-onto-empty rule (AEP rule i) or the stirring exchange
/// at a per-channel rate, with no typed drift and no flips.
struct Walker {
    enum class Mode { HopIfEmpty, Stir };

    Lattice lat;
    Mode mode;
    double channel_rate;
    std::vector<std::int8_t> state;
    std::vector<std::int32_t> site_particle;
    std::vector<std::int32_t> particle_site;
    std::vector<std::int8_t> particle_type;
    std::vector<std::array<std::int32_t, 2>> displacement;
    std::vector<Lattice::Edge> edges;
    std::array<std::vector<std::int32_t>, 4> nb;

    Walker(const ExclusionConfig& cfg, Mode mode_in, double rate)
        : lat(cfg.lattice), mode(mode_in), channel_rate(rate), state(cfg.state) {
        site_particle.assign(state.size(), -1);
        for (std::size_t s = 0; s < state.size(); ++s) {
            if (state[s] != 0) {
                site_particle[s] = static_cast<std::int32_t>(particle_site.size());
                particle_site.push_back(static_cast<std::int32_t>(s));
                particle_type.push_back(state[s]);
            }
        }
        displacement.assign(particle_site.size(), {0, 0});
        edges = lat.edges();
        for (int a = 0; a < lat.dimension(); ++a)
            for (int sgn = 0; sgn < 2; ++sgn) {
                auto& v = nb[static_cast<std::size_t>(a * 2 + sgn)];
                v.resize(state.size());
                for (int s = 0; s < lat.sites(); ++s)
                    v[static_cast<std::size_t>(s)] = lat.neighbor(s, a, sgn ? +1 : -1);
            }
    }

    [[nodiscard]] std::size_t particles() const { return particle_site.size(); }

    [[nodiscard]] double total_rate() const {
        if (mode == Mode::Stir) return channel_rate * static_cast<double>(edges.size());
        const int dirs = (lat.side() == 2 ? 1 : 2) * lat.dimension();
        return channel_rate * dirs * static_cast<double>(particles());
    }

    void move_particle(std::int32_t p, int from, int to, int axis, int step) {
        state[static_cast<std::size_t>(to)] = state[static_cast<std::size_t>(from)];
        state[static_cast<std::size_t>(from)] = 0;
        site_particle[static_cast<std::size_t>(to)] = p;
        site_particle[static_cast<std::size_t>(from)] = -1;
        particle_site[static_cast<std::size_t>(p)] = to;
        displacement[static_cast<std::size_t>(p)][static_cast<std::size_t>(axis)] +=
            static_cast<std::int32_t>(step);
    }

    void attempt(RngStream& rng) {
        if (mode == Mode::HopIfEmpty) {
            const auto p = static_cast<std::int32_t>(rng.below(particles()));
            const int dirs = (lat.side() == 2 ? 1 : 2) * lat.dimension();
            const auto d = static_cast<int>(rng.below(static_cast<std::uint64_t>(dirs)));
            const int axis = lat.side() == 2 ? d : d >> 1;
            const int step = lat.side() == 2 ? +1 : ((d & 1) ? +1 : -1);
            const int from = particle_site[static_cast<std::size_t>(p)];
            const int to = nb[static_cast<std::size_t>(axis * 2 + (step > 0))]
                             [static_cast<std::size_t>(from)];
            if (state[static_cast<std::size_t>(to)] == 0)
                move_particle(p, from, to, axis, step);
            return;
        }
        const auto& e = edges[rng.below(edges.size())];
        const auto a = state[static_cast<std::size_t>(e.site)];
        const auto b = state[static_cast<std::size_t>(e.to)];
        if (a == b) return;
        const auto pa = site_particle[static_cast<std::size_t>(e.site)];
        const auto pb = site_particle[static_cast<std::size_t>(e.to)];
        state[static_cast<std::size_t>(e.site)] = b;
        state[static_cast<std::size_t>(e.to)] = a;
        site_particle[static_cast<std::size_t>(e.site)] = pb;
        site_particle[static_cast<std::size_t>(e.to)] = pa;
        if (pa >= 0) {
            particle_site[static_cast<std::size_t>(pa)] = e.to;
            displacement[static_cast<std::size_t>(pa)][static_cast<std::size_t>(e.axis)] += 1;
        }
        if (pb >= 0) {
            particle_site[static_cast<std::size_t>(pb)] = e.site;
            displacement[static_cast<std::size_t>(pb)][static_cast<std::size_t>(e.axis)] -= 1;
        }
    }

    template <class Sink>
    void run(double T, std::span<const double> snapshot_times, RngStream& rng, Sink&& sink) {
        double t = 0.0;
        std::size_t si = 0;
        while (si < snapshot_times.size() && snapshot_times[si] <= 0.0) sink(0.0, *this), ++si;
        const double rate = total_rate();
        if (!(rate > 0.0)) {
            for (; si < snapshot_times.size(); ++si) sink(snapshot_times[si], *this);
            return;
        }
        while (t < T) {
            const double boundary = si < snapshot_times.size() ? snapshot_times[si] : T;
            const double dt = rng.exponential(rate);
            if (t + dt >= boundary) {
                t = boundary;
                while (si < snapshot_times.size() && snapshot_times[si] <= t)
                    sink(t, *this), ++si;
                continue;
            }
            t += dt;
            attempt(rng);
        }
    }

    [[nodiscard]] double mean_squared_displacement() const {
        if (displacement.empty()) return 0.0;
        double acc = 0.0;
        for (const auto& d : displacement)
            acc += static_cast<double>(d[0]) * d[0] + static_cast<double>(d[1]) * d[1];
        return acc / static_cast<double>(displacement.size());
    }

    [[nodiscard]] ExclusionConfig snapshot_config() const {
        ExclusionConfig cfg(lat);
        cfg.state = state;
        return cfg;
    }
};

} // namespace

SelfDiffusionEstimate estimate_self_diffusion(double rho, int dimension, int side,
                                              double time_budget, int runs, std::uint64_t seed,
                                              int jobs) {
    if (rho < 0.0 || rho >= 1.0)
        throw Error("estimate_self_diffusion: rho must lie in [0,1)");
    if (runs < 2) throw Error("estimate_self_diffusion: need at least 2 runs");
    const Lattice lat(dimension, side);
    constexpr int n_times = 16;
    std::vector<double> times(n_times);
    for (int i = 0; i < n_times; ++i)
        times[static_cast<std::size_t>(i)] = time_budget * (i + 1) / n_times;

    std::vector<std::vector<double>> msd(static_cast<std::size_t>(runs));
    parallel_for(jobs, runs, [&](int r) {
        RngStream rng(seed, static_cast<std::uint64_t>(r));
        ExclusionConfig cfg(lat);
        for (auto& v : cfg.state) v = rng.uniform() < rho ? 1 : 0;
        if (cfg.count_particles() == 0) cfg.state[0] = 1; // lone tracer at rho ~ 0
        Walker w(cfg, Walker::Mode::HopIfEmpty, 1.0);
        std::vector<double> series;
        series.reserve(n_times);
        w.run(time_budget, times, rng, [&](double, const Walker& wk) {
            series.push_back(wk.mean_squared_displacement());
        });
        msd[static_cast<std::size_t>(r)] = std::move(series);
    });

    // ensemble means per time and per-run slopes over the fit window
    const double t_lo = time_budget / 2.0;
    std::vector<double> mean(n_times, 0.0);
    for (const auto& s : msd)
        for (int i = 0; i < n_times; ++i) mean[static_cast<std::size_t>(i)] += s[static_cast<std::size_t>(i)];
    for (auto& v : mean) v /= runs;

    const int d2 = 2 * dimension;
    std::vector<double> slopes(static_cast<std::size_t>(runs));
    for (int r = 0; r < runs; ++r) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (int i = 0; i < n_times; ++i) {
            const double t = times[static_cast<std::size_t>(i)];
            if (t < t_lo - 1e-12) continue;
            const double y = msd[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
            sx += t;
            sy += y;
            sxx += t * t;
            sxy += t * y;
            ++n;
        }
        slopes[static_cast<std::size_t>(r)] =
            (n * sxy - sx * sy) / (n * sxx - sx * sx) / d2;
    }
    double slope_mean = 0.0;
    for (double s : slopes) slope_mean += s;
    slope_mean /= runs;
    double var = 0.0;
    for (double s : slopes) var += (s - slope_mean) * (s - slope_mean);
    var /= std::max(1, runs - 1);

    SelfDiffusionEstimate est;
    est.rho = rho;
    est.dimension = dimension;
    est.lattice_side = side;
    est.ds = slope_mean;
    est.stderr_ = std::sqrt(var / runs);
    est.fit_t_lo = t_lo;
    est.fit_t_hi = time_budget;

    // nonlinearity: variation of MSD/t across the window
    const double v_hi = mean[static_cast<std::size_t>(n_times - 1)] / times[static_cast<std::size_t>(n_times - 1)];
    const double v_mid = mean[static_cast<std::size_t>(n_times / 2 - 1)] / times[static_cast<std::size_t>(n_times / 2 - 1)];
    est.fit_window_ok = std::abs(v_hi - v_mid) <= 0.10 * std::abs(v_hi);

    // power-law exponent over the window (log-log least squares)
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (int i = 0; i < n_times; ++i) {
            const double t = times[static_cast<std::size_t>(i)];
            if (t < t_lo - 1e-12 || mean[static_cast<std::size_t>(i)] <= 0.0) continue;
            const double lx = std::log(t);
            const double ly = std::log(mean[static_cast<std::size_t>(i)]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++n;
        }
        est.msd_exponent = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    }
    return est;
}

RelaxationReport segregation_relaxation_experiment(double c, int dimension, int side,
                                                   std::span<const double> times, bool with_swap,
                                                   double D, std::uint64_t seed,
                                                   int block_radius) {
    if (c <= 0.0 || c >= 1.0)
        throw Error("segregation_relaxation_experiment: c must lie in (0,1)");
    const Lattice lat(dimension, side);
    RngStream rng(seed);
    ExclusionConfig cfg(lat);
    for (int s = 0; s < lat.sites(); ++s) {
        const double u1 = lat.unit_coord(s, 0);
        const double r = rng.uniform();
        if (u1 <= 0.5) {
            if (r < c) cfg.state[static_cast<std::size_t>(s)] = 1;
        } else {
            if (r < c) cfg.state[static_cast<std::size_t>(s)] = -1;
        }
    }
    RelaxationReport rep;
    rep.c = c;
    rep.dimension = dimension;
    rep.side = side;
    rep.with_swap = with_swap;
    rep.block_radius = block_radius > 0 ? block_radius
                                        : std::min(default_block_radius(side), side / 4);

    auto distance = [&](const Walker& w) {
        const auto coarse = coarse_grain(w.snapshot_config(), rep.block_radius);
        double acc = 0.0;
        for (double v : coarse.plus) acc += std::abs(v - c / 2.0);
        return acc / static_cast<double>(coarse.plus.size());
    };

    const double rate = D * side * side;
    Walker w(cfg, with_swap ? Walker::Mode::Stir : Walker::Mode::HopIfEmpty, rate);
    rep.initial_distance = distance(w);
    const double T = times.empty() ? 0.0 : times.back();
    w.run(T, times, rng, [&](double t, const Walker& wk) {
        rep.distances.emplace_back(t, distance(wk));
    });
    return rep;
}

double DsTable::at(double r) const {
    if (rho.empty()) throw Error("DsTable: empty");
    if (r <= rho.front()) return ds.front();
    if (r >= rho.back()) return ds.back();
    for (std::size_t i = 1; i < rho.size(); ++i) {
        if (r <= rho[i]) {
            const double f = (r - rho[i - 1]) / (rho[i] - rho[i - 1]);
            return ds[i - 1] * (1.0 - f) + ds[i] * f;
        }
    }
    return ds.back();
}

FdFormReport fd_form_check(std::span<const FdWindowSample> samples, const DsTable& table,
                           double mean_density, double signal_threshold) {
    FdFormReport rep;
    rep.samples = static_cast<int>(samples.size());
    rep.ds_reference = table.at(mean_density);
    if (samples.size() < 4) return rep;
    double rms1 = 0.0, rms2 = 0.0;
    for (const auto& s : samples) {
        rms1 += s.grad_rho_plus * s.grad_rho_plus;
        rms2 += s.grad_rho * s.grad_rho;
    }
    rms1 = std::sqrt(rms1 / static_cast<double>(samples.size()));
    rms2 = std::sqrt(rms2 / static_cast<double>(samples.size()));
    if (rms1 < signal_threshold && rms2 < signal_threshold) {
        rep.status = FdStatus::InsufficientSignal;
        return rep;
    }
    // y = c1 x1 + c2 x2, normal equations
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (const auto& s : samples) {
        a11 += s.grad_rho_plus * s.grad_rho_plus;
        a12 += s.grad_rho_plus * s.grad_rho;
        a22 += s.grad_rho * s.grad_rho;
        b1 += s.grad_rho_plus * s.current;
        b2 += s.grad_rho * s.current;
    }
    const double det = a11 * a22 - a12 * a12;
    if (std::abs(det) < 1e-12 * std::max(a11, a22) * std::max(a11, a22)) {
        // degenerate second predictor (e.g. uniform total density):
        // fall back to the single-predictor fit
        rep.ds_coeff = b1 / a11;
        rep.dens_coeff = 0.0;
        double ss = 0.0;
        for (const auto& s : samples) {
            const double r = s.current - rep.ds_coeff * s.grad_rho_plus;
            ss += r * r;
        }
        const double sigma2 = ss / std::max<std::size_t>(1, samples.size() - 1);
        rep.ds_se = std::sqrt(sigma2 / a11);
        rep.dens_se = 0.0;
        rep.residual_rms = std::sqrt(ss / static_cast<double>(samples.size()));
        rep.status = FdStatus::Ok;
        return rep;
    }
    rep.ds_coeff = (b1 * a22 - b2 * a12) / det;
    rep.dens_coeff = (b2 * a11 - b1 * a12) / det;
    double ss = 0.0;
    for (const auto& s : samples) {
        const double r =
            s.current - rep.ds_coeff * s.grad_rho_plus - rep.dens_coeff * s.grad_rho;
        ss += r * r;
    }
    const double sigma2 = ss / std::max<std::size_t>(2, samples.size() - 2);
    rep.ds_se = std::sqrt(sigma2 * a22 / det);
    rep.dens_se = std::sqrt(sigma2 * a11 / det);
    rep.residual_rms = std::sqrt(ss / static_cast<double>(samples.size()));
    rep.status = FdStatus::Ok;
    return rep;
}

std::vector<FdWindowSample> collect_fd_windows(const FdExperimentOptions& opts) {
    const int side = opts.side;
    const Lattice lat(2, side);
    const int block = std::min(default_block_radius(side), side / 4 - 1);
    std::vector<std::vector<FdWindowSample>> per_seed(static_cast<std::size_t>(opts.seeds));

    parallel_for(opts.jobs, opts.seeds, [&](int sidx) {
        RngStream rng(opts.seed, static_cast<std::uint64_t>(sidx));
        ExclusionConfig cfg(lat);
        for (int s = 0; s < lat.sites(); ++s) {
            const double u1 = lat.unit_coord(s, 0);
            const double r = rng.uniform();
            if (opts.balanced_gradient) {
                const double local =
                    opts.c * (1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * u1));
                if (r < local) cfg.state[static_cast<std::size_t>(s)] =
                    rng.uniform() < 0.5 ? 1 : -1;
            } else if (r < opts.c) {
                cfg.state[static_cast<std::size_t>(s)] = u1 <= 0.5 ? 1 : -1;
            }
        }
        ModelSpec spec;
        spec.kind = ModelKind::Aep;
        spec.dimension = 2;
        spec.side = side;
        spec.D = opts.D;
        spec.lambda = 0.0;
        spec.gamma = 0.0;

        auto& samples = per_seed[static_cast<std::size_t>(sidx)];
        // one window of burn-in so the slab step becomes mesoscopically
        // smooth; the sinusoidal profile already is
        if (!opts.balanced_gradient) simulate(cfg, spec, opts.tau, rng);
        for (int wdx = 0; wdx < opts.windows; ++wdx) {
            const auto coarse_before = coarse_grain(cfg, block);
            CurrentLedger ledger(lat);
            simulate(cfg, spec, opts.tau, rng, nullptr, &ledger);
            const auto coarse_after = coarse_grain(cfg, block);

            // block-averaged axis-0 crossings per bond per unit time
            std::vector<double> flux_p(static_cast<std::size_t>(lat.sites()));
            std::vector<double> flux_m(static_cast<std::size_t>(lat.sites()));
            for (int s = 0; s < lat.sites(); ++s) {
                const auto e = static_cast<std::size_t>(lat.edge_slot(s, 0));
                flux_p[static_cast<std::size_t>(s)] = static_cast<double>(ledger.sym_plus[e]);
                flux_m[static_cast<std::size_t>(s)] = static_cast<double>(ledger.sym_minus[e]);
            }
            const auto block_p = detail::box_filter(flux_p, 2, side, block);
            const auto block_m = detail::box_filter(flux_m, 2, side, block);

            // gradients from nearby coarse centers: wide differencing would
            // attenuate the smoothed profile's slope and bias the fit high
            const int gspan = std::max(1, block / 4);
            const int stride = std::max(1, block);
            for (int y = 0; y < side; y += stride) {
                for (int x = 0; x < side; x += stride) {
                    const auto c0 = static_cast<std::size_t>(y * side + x);
                    const auto xl = static_cast<std::size_t>(y * side + (x + side - gspan) % side);
                    const auto xr = static_cast<std::size_t>(y * side + (x + gspan) % side);
                    const double dl = 2.0 * gspan / static_cast<double>(side);
                    auto grad = [&](const std::vector<double>& before,
                                    const std::vector<double>& after) {
                        return 0.5 * ((before[xr] - before[xl]) + (after[xr] - after[xl])) / dl;
                    };
                    FdWindowSample smp;
                    smp.grad_rho_plus = grad(coarse_before.plus, coarse_after.plus);
                    smp.grad_rho_minus = grad(coarse_before.minus, coarse_after.minus);
                    smp.grad_rho = smp.grad_rho_plus + smp.grad_rho_minus;
                    smp.current = -block_p[c0] / (opts.tau * opts.D * side);
                    smp.current_minus = -block_m[c0] / (opts.tau * opts.D * side);
                    samples.push_back(smp);
                }
            }
        }
    });

    std::vector<FdWindowSample> all;
    for (auto& v : per_seed)
        all.insert(all.end(), v.begin(), v.end());
    return all;
}

} // namespace latgas::nongrad
