#include "latgas/hydro.hpp"

#include <algorithm>
#include <cmath>

namespace latgas::hydro {
namespace {

constexpr double invariant_tol = 1e-9;

void check_invariants(const HydroState& s, System system) {
    for (std::size_t i = 0; i < s.cells(); ++i) {
        const double rho = s.rho[i];
        const double m = s.m[i];
        if (system != System::Flock && rho > 1.0 + invariant_tol)
            throw StepRejected("hydro: rho exceeded 1");
        if (rho < -invariant_tol) throw StepRejected("hydro: rho went negative");
        if (std::abs(m) > rho + invariant_tol)
            throw StepRejected("hydro: |m| exceeded rho");
    }
}

/// Rusanov (local Lax-Friedrichs) dissipation speed for the MIPS advective
/// Jacobian lambda [[-m, 1-rho], [1-2rho, 0]].
double mips_wave_speed(double lambda, double rho, double m) {
    const double disc = 0.25 * m * m + (1.0 - rho) * (1.0 - 2.0 * rho);
    return lambda * (0.5 * std::abs(m) + std::sqrt(std::abs(disc)));
}

struct Arena {
    std::vector<double> flux_rho, flux_m, new_rho, new_m;
};

void step_mips_like_1d(HydroState& s, const PdeConfig& cfg, double dt, double D, double adv,
                       double damping, bool flock) {
    const int n = s.grid;
    const double du = s.du();
    thread_local Arena a;
    a.flux_rho.resize(static_cast<std::size_t>(n));
    a.flux_m.resize(static_cast<std::size_t>(n));

    // face fluxes between j and j+1
    for (int j = 0; j < n; ++j) {
        const int r = j + 1 == n ? 0 : j + 1;
        const double rl = s.rho[static_cast<std::size_t>(j)];
        const double rr = s.rho[static_cast<std::size_t>(r)];
        const double ml = s.m[static_cast<std::size_t>(j)];
        const double mr = s.m[static_cast<std::size_t>(r)];
        double grho, gm;
        if (flock) {
            grho = adv * 0.5 * (ml + mr);
            gm = adv * 0.5 * (rl + rr);
        } else {
            grho = adv * 0.5 * (ml * (1.0 - rl) + mr * (1.0 - rr));
            gm = adv * 0.5 * (rl * (1.0 - rl) + rr * (1.0 - rr));
        }
        if (cfg.scheme == Scheme::UpwindAdvection) {
            const double alpha = flock ? adv
                                       : mips_wave_speed(adv, 0.5 * (rl + rr), 0.5 * (ml + mr));
            grho -= 0.5 * alpha * (rr - rl);
            gm -= 0.5 * alpha * (mr - ml);
        }
        a.flux_rho[static_cast<std::size_t>(j)] = -D * (rr - rl) / du + grho;
        a.flux_m[static_cast<std::size_t>(j)] = -D * (mr - ml) / du + gm;
    }
    const double c = dt / du;
    for (int j = 0; j < n; ++j) {
        const int l = j == 0 ? n - 1 : j - 1;
        s.rho[static_cast<std::size_t>(j)] -= c * (a.flux_rho[static_cast<std::size_t>(j)] -
                                                   a.flux_rho[static_cast<std::size_t>(l)]);
        s.m[static_cast<std::size_t>(j)] -= c * (a.flux_m[static_cast<std::size_t>(j)] -
                                                 a.flux_m[static_cast<std::size_t>(l)]);
    }
    if (flock) {
        // hoisted form of evaluate_F: the beta-dependent factors are loop
        // constants, leaving three transcendentals per cell
        const double sh = std::sinh(cfg.beta);
        const double expb = std::exp(-cfg.beta);
        const double cm1 = std::cosh(cfg.beta) - 1.0;
        for (int j = 0; j < n; ++j) {
            auto& m = s.m[static_cast<std::size_t>(j)];
            const double rho = s.rho[static_cast<std::size_t>(j)];
            const double x = m * sh;
            double f;
            if (std::abs(x) < 30.0)
                f = (m * std::cosh(x) - rho * std::sinh(x)) * expb * std::exp(rho * cm1);
            else
                f = evaluate_F(rho, m, cfg.beta);
            m -= dt * 2.0 * f;
        }
    } else if (damping != 0.0) {
        const double factor = 1.0 - 2.0 * damping * dt;
        for (int j = 0; j < n; ++j) s.m[static_cast<std::size_t>(j)] *= factor;
    }
    s.time += dt;
}

void step_peclet_2d_impl(HydroState& s, const PdeConfig& cfg, double dt) {
    const int n = s.grid;
    const double du = s.du();
    thread_local Arena a;
    const auto cells = s.cells();
    a.new_rho.assign(cells, 0.0);
    a.new_m.assign(cells, 0.0);
    a.flux_rho.resize(cells);
    a.flux_m.resize(cells);

    auto idx = [n](int x, int y) {
        return static_cast<std::size_t>(((y + n) % n) * n + ((x + n) % n));
    };

    // advective + diffusive fluxes along x (faces between (x,y) and (x+1,y))
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const auto jl = idx(x, y);
            const auto jr = idx(x + 1, y);
            const double rl = s.rho[jl], rr = s.rho[jr];
            const double ml = s.m[jl], mr = s.m[jr];
            double grho = cfg.peclet * 0.5 * (ml * (1.0 - rl) + mr * (1.0 - rr));
            double gm = cfg.peclet * 0.5 * (rl * (1.0 - rl) + rr * (1.0 - rr));
            if (cfg.scheme == Scheme::UpwindAdvection) {
                const double alpha =
                    mips_wave_speed(cfg.peclet, 0.5 * (rl + rr), 0.5 * (ml + mr));
                grho -= 0.5 * alpha * (rr - rl);
                gm -= 0.5 * alpha * (mr - ml);
            }
            a.flux_rho[jl] = -(rr - rl) / du + grho;
            a.flux_m[jl] = -(mr - ml) / du + gm;
        }
    }
    const double c = dt / du;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const auto j = idx(x, y);
            a.new_rho[j] = s.rho[j] - c * (a.flux_rho[j] - a.flux_rho[idx(x - 1, y)]);
            a.new_m[j] = s.m[j] - c * (a.flux_m[j] - a.flux_m[idx(x - 1, y)]);
        }
    }
    // diffusive fluxes along y
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const auto jl = idx(x, y);
            const auto jr = idx(x, y + 1);
            a.flux_rho[jl] = -(s.rho[jr] - s.rho[jl]) / du;
            a.flux_m[jl] = -(s.m[jr] - s.m[jl]) / du;
        }
    }
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const auto j = idx(x, y);
            a.new_rho[j] -= c * (a.flux_rho[j] - a.flux_rho[idx(x, y - 1)]);
            a.new_m[j] -= c * (a.flux_m[j] - a.flux_m[idx(x, y - 1)]);
            a.new_m[j] -= dt * 2.0 * s.m[j];
        }
    }
    s.rho.swap(a.new_rho);
    s.m.swap(a.new_m);
    s.time += dt;
}

} // namespace

HydroState uniform_state(System system, int grid, double rho0, double m0,
                         double domain_length) {
    HydroState s;
    s.dimension = system == System::Peclet2d ? 2 : 1;
    s.grid = grid;
    s.domain_length = domain_length;
    const auto cells =
        static_cast<std::size_t>(s.dimension == 2 ? grid * grid : grid);
    s.rho.assign(cells, rho0);
    s.m.assign(cells, m0);
    return s;
}

HydroState state_from_profiles(System system, const SpeciesProfiles& profiles, int grid,
                               double domain_length) {
    HydroState s = uniform_state(system, grid, 0.0, 0.0, domain_length);
    const int n = grid;
    if (s.dimension == 1) {
        for (int j = 0; j < n; ++j) {
            const double u = static_cast<double>(j) / n;
            const double rp = profiles.plus(u, 0.0);
            const double rm = profiles.minus(u, 0.0);
            s.rho[static_cast<std::size_t>(j)] = rp + rm;
            s.m[static_cast<std::size_t>(j)] = rp - rm;
        }
    } else {
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                const double u1 = static_cast<double>(x) / n;
                const double u2 = static_cast<double>(y) / n;
                const double rp = profiles.plus(u1, u2);
                const double rm = profiles.minus(u1, u2);
                s.rho[static_cast<std::size_t>(y * n + x)] = rp + rm;
                s.m[static_cast<std::size_t>(y * n + x)] = rp - rm;
            }
        }
    }
    return s;
}

void step_mips(HydroState& state, const PdeConfig& config, double dt) {
    if (state.dimension != 1) throw StepRejected("step_mips: 1d states only");
    config.validate(state.du());
    if (dt <= 0.0) dt = config.dt > 0.0 ? config.dt : config.stable_dt(state.du());
    step_mips_like_1d(state, config, dt, config.D, config.lambda, config.gamma, false);
    check_invariants(state, System::Mips);
}

void step_mips_raw(HydroState& state, const PdeConfig& config, double dt) {
    if (state.dimension != 1) throw StepRejected("step_mips_raw: 1d states only");
    step_mips_like_1d(state, config, dt, config.D, config.lambda, config.gamma, false);
}

void step_peclet_2d(HydroState& state, const PdeConfig& config, double dt) {
    if (state.dimension != 2) throw StepRejected("step_peclet_2d: 2d states only");
    config.validate(state.du());
    if (dt <= 0.0) dt = config.dt > 0.0 ? config.dt : config.stable_dt(state.du());
    step_peclet_2d_impl(state, config, dt);
    check_invariants(state, System::Peclet2d);
}

void step_flock(HydroState& state, const PdeConfig& config, double dt) {
    if (state.dimension != 1) throw StepRejected("step_flock: 1d states only");
    config.validate(state.du());
    if (dt <= 0.0) dt = config.dt > 0.0 ? config.dt : config.stable_dt(state.du());
    step_mips_like_1d(state, config, dt, config.D, config.lambda, 0.0, true);
    check_invariants(state, System::Flock);
}

void advance(HydroState& state, const PdeConfig& config, double target_time) {
    const double dt0 = config.dt > 0.0 ? config.dt : config.stable_dt(state.du());
    while (state.time < target_time - 1e-15) {
        const double dt = std::min(dt0, target_time - state.time);
        switch (config.system) {
            case System::Mips: step_mips(state, config, dt); break;
            case System::Peclet2d: step_peclet_2d(state, config, dt); break;
            case System::Flock: step_flock(state, config, dt); break;
        }
    }
    state.time = target_time;
}

std::vector<HydroState> solve(HydroState state, const PdeConfig& config, double T,
                              std::span<const double> snapshot_times) {
    std::vector<HydroState> out;
    out.reserve(snapshot_times.size());
    for (double t : snapshot_times) {
        if (t < state.time - 1e-15) throw Error("solve: snapshot times must be nondecreasing");
        if (t > T + 1e-15) throw Error("solve: snapshot time beyond horizon");
        advance(state, config, t);
        out.push_back(state);
    }
    advance(state, config, T);
    return out;
}

double total_mass(const HydroState& s) {
    double acc = 0.0;
    for (double v : s.rho) acc += v;
    const double cell = s.dimension == 2 ? s.du() * s.du() : s.du();
    return acc * cell;
}

double total_magnetization(const HydroState& s) {
    double acc = 0.0;
    for (double v : s.m) acc += v;
    const double cell = s.dimension == 2 ? s.du() * s.du() : s.du();
    return acc * cell;
}

namespace {
double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc / static_cast<double>(a.size());
}
} // namespace

double l1_distance_rho(const HydroState& a, const HydroState& b) {
    if (a.cells() != b.cells()) throw GridMismatch("l1_distance_rho: grids differ");
    return l1_distance(a.rho, b.rho) * std::pow(a.domain_length, a.dimension);
}

double l1_distance_m(const HydroState& a, const HydroState& b) {
    if (a.cells() != b.cells()) throw GridMismatch("l1_distance_m: grids differ");
    return l1_distance(a.m, b.m) * std::pow(a.domain_length, a.dimension);
}

namespace {
double interp_1d(const std::vector<double>& f, int n, double pos) {
    const double x = pos - std::floor(pos);
    const double g = x * n;
    const auto i = static_cast<std::size_t>(g) % static_cast<std::size_t>(n);
    const double frac = g - std::floor(g);
    const std::size_t j = (i + 1) % static_cast<std::size_t>(n);
    return f[i] * (1.0 - frac) + f[j] * frac;
}
} // namespace

double rho_at(const HydroState& s, double u1, double u2) {
    if (s.dimension == 1) return interp_1d(s.rho, s.grid, u1 / s.domain_length);
    // bilinear on the periodic grid
    const int n = s.grid;
    const double gx = (u1 / s.domain_length - std::floor(u1 / s.domain_length)) * n;
    const double gy = (u2 / s.domain_length - std::floor(u2 / s.domain_length)) * n;
    const int x0 = static_cast<int>(gx) % n, y0 = static_cast<int>(gy) % n;
    const double fx = gx - std::floor(gx), fy = gy - std::floor(gy);
    const int x1 = (x0 + 1) % n, y1 = (y0 + 1) % n;
    auto v = [&](int x, int y) { return s.rho[static_cast<std::size_t>(y) * n + x]; };
    return v(x0, y0) * (1 - fx) * (1 - fy) + v(x1, y0) * fx * (1 - fy) +
           v(x0, y1) * (1 - fx) * fy + v(x1, y1) * fx * fy;
}

double m_at(const HydroState& s, double u1, double u2) {
    if (s.dimension == 1) return interp_1d(s.m, s.grid, u1 / s.domain_length);
    const int n = s.grid;
    const double gx = (u1 / s.domain_length - std::floor(u1 / s.domain_length)) * n;
    const double gy = (u2 / s.domain_length - std::floor(u2 / s.domain_length)) * n;
    const int x0 = static_cast<int>(gx) % n, y0 = static_cast<int>(gy) % n;
    const double fx = gx - std::floor(gx), fy = gy - std::floor(gy);
    const int x1 = (x0 + 1) % n, y1 = (y0 + 1) % n;
    auto v = [&](int x, int y) { return s.m[static_cast<std::size_t>(y) * n + x]; };
    return v(x0, y0) * (1 - fx) * (1 - fy) + v(x1, y0) * fx * (1 - fy) +
           v(x0, y1) * (1 - fx) * fy + v(x1, y1) * fx * fy;
}

} // namespace latgas::hydro
