#include "latgas/spde.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "latgas/errors.hpp"

namespace latgas::spde {
namespace {

double amplitude(double d_coeff, double rho) {
    if (rho < -1e-9 || rho > 1.0 + 1e-9)
        throw AmplitudeDomain("noise amplitude parameter outside [0,1]");
    const double phi = std::min(std::max(rho, 0.0), 1.0);
    return std::sqrt(2.0 * d_coeff * phi * (1.0 - phi));
}

} // namespace

NoiseField sample_noise(int grid, double dt, RngStream& rng, std::span<const double> rho_plus,
                        std::span<const double> rho_minus, double D, double gamma,
                        NoiseMode mode) {
    const double du = 1.0 / grid;
    const double white = std::sqrt(1.0 / (du * dt));
    NoiseField nf;
    nf.mode = mode;
    nf.w_r.resize(static_cast<std::size_t>(grid));
    nf.w_m.resize(static_cast<std::size_t>(grid));
    nf.flip.resize(static_cast<std::size_t>(grid));
    const double flip_amp = std::sqrt(2.0 * gamma);
    for (int j = 0; j < grid; ++j) {
        double rp = rho_plus[static_cast<std::size_t>(j)];
        double rm = rho_minus[static_cast<std::size_t>(j)];
        if (mode == NoiseMode::Conservative) {
            // slot j is the face (j, j+1): average the adjacent cells
            const int r = j + 1 == grid ? 0 : j + 1;
            rp = 0.5 * (rp + rho_plus[static_cast<std::size_t>(r)]);
            rm = 0.5 * (rm + rho_minus[static_cast<std::size_t>(r)]);
        }
        const double ap = amplitude(D, rp);
        const double am = amplitude(D, rm);
        const double wp = rng.normal() * white;
        const double wm = rng.normal() * white;
        nf.w_r[static_cast<std::size_t>(j)] = ap * wp + am * wm;
        nf.w_m[static_cast<std::size_t>(j)] = ap * wp - am * wm;
        nf.flip[static_cast<std::size_t>(j)] = flip_amp * rng.normal() * white;
    }
    return nf;
}

FluctState flat_fluct_state(int grid, double rho0, double m0) {
    FluctState s;
    s.grid = grid;
    s.r.assign(static_cast<std::size_t>(grid), 0.0);
    s.m.assign(static_cast<std::size_t>(grid), 0.0);
    s.bg_rho.assign(static_cast<std::size_t>(grid), rho0);
    s.bg_m.assign(static_cast<std::size_t>(grid), m0);
    return s;
}

void step_fluct(FluctState& state, const SpdeConfig& config, const NoiseField& noise) {
    const int n = state.grid;
    const double du = state.du();
    const double dt = config.effective_dt(du);
    std::vector<double> flux_r(static_cast<std::size_t>(n));
    std::vector<double> flux_m(static_cast<std::size_t>(n));
    // transport fluxes at face (j, j+1), central averages of the brackets
    for (int j = 0; j < n; ++j) {
        const int r = j + 1 == n ? 0 : j + 1;
        auto face = [&](const std::vector<double>& f) {
            return 0.5 * (f[static_cast<std::size_t>(j)] + f[static_cast<std::size_t>(r)]);
        };
        const double rho_f = face(state.bg_rho);
        const double m_f = face(state.bg_m);
        const double rr = face(state.r);
        const double mm = face(state.m);
        const double dr = (state.r[static_cast<std::size_t>(r)] -
                           state.r[static_cast<std::size_t>(j)]) / du;
        const double dm = (state.m[static_cast<std::size_t>(r)] -
                           state.m[static_cast<std::size_t>(j)]) / du;
        flux_r[static_cast<std::size_t>(j)] =
            -config.D * dr + 2.0 * config.lambda * ((1.0 - rho_f) * mm - m_f * rr);
        flux_m[static_cast<std::size_t>(j)] =
            -config.D * dm + 2.0 * config.lambda * (1.0 - 2.0 * rho_f) * rr;
        if (noise.mode == NoiseMode::Conservative) {
            flux_r[static_cast<std::size_t>(j)] -= noise.w_r[static_cast<std::size_t>(j)];
            flux_m[static_cast<std::size_t>(j)] -= noise.w_m[static_cast<std::size_t>(j)];
        }
    }
    const double c = dt / du;
    for (int j = 0; j < n; ++j) {
        const int l = j == 0 ? n - 1 : j - 1;
        state.r[static_cast<std::size_t>(j)] -=
            c * (flux_r[static_cast<std::size_t>(j)] - flux_r[static_cast<std::size_t>(l)]);
        state.m[static_cast<std::size_t>(j)] -=
            c * (flux_m[static_cast<std::size_t>(j)] - flux_m[static_cast<std::size_t>(l)]);
        state.m[static_cast<std::size_t>(j)] +=
            dt * (-2.0 * config.gamma * state.m[static_cast<std::size_t>(j)] +
                  noise.flip[static_cast<std::size_t>(j)]);
        if (noise.mode == NoiseMode::Additive) {
            state.r[static_cast<std::size_t>(j)] += dt * noise.w_r[static_cast<std::size_t>(j)];
            state.m[static_cast<std::size_t>(j)] += dt * noise.w_m[static_cast<std::size_t>(j)];
        }
    }
    state.time += dt;
}

NoiseField step_fluct(FluctState& state, const SpdeConfig& config, RngStream& rng) {
    const double dt = config.effective_dt(state.du());
    SpdeConfig cfg = config;
    cfg.dt = dt;
    // noise amplitudes take the species densities of the background
    std::vector<double> rp(static_cast<std::size_t>(state.grid));
    std::vector<double> rm(static_cast<std::size_t>(state.grid));
    for (std::size_t j = 0; j < rp.size(); ++j) {
        rp[j] = 0.5 * (state.bg_rho[j] + state.bg_m[j]);
        rm[j] = 0.5 * (state.bg_rho[j] - state.bg_m[j]);
    }
    auto noise = sample_noise(state.grid, dt, rng, rp, rm, config.D, config.gamma,
                              config.transport_noise);
    step_fluct(state, cfg, noise);
    return noise;
}

std::uint64_t step_fluctuating_hydro(hydro::HydroState& state, double n_sites,
                                     const SpdeConfig& config, RngStream& rng) {
    if (state.dimension != 1)
        throw Error("step_fluctuating_hydro: 1d states only");
    const int n = state.grid;
    const double du = state.du();
    const double dt = config.effective_dt(du);

    hydro::PdeConfig pde;
    pde.system = hydro::System::Mips;
    pde.D = config.D;
    pde.lambda = config.lambda;
    pde.gamma = config.gamma;
    pde.cfl_safety = 0.9;
    hydro::step_mips_raw(state, pde, dt);

    std::vector<double> rp(static_cast<std::size_t>(n));
    std::vector<double> rm(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const auto js = static_cast<std::size_t>(j);
        rp[js] = std::min(std::max(0.5 * (state.rho[js] + state.m[js]), 0.0), 1.0);
        rm[js] = std::min(std::max(0.5 * (state.rho[js] - state.m[js]), 0.0), 1.0);
    }
    const auto noise = sample_noise(n, dt, rng, rp, rm, config.D, config.gamma,
                                    config.transport_noise);
    const double scale = 1.0 / std::sqrt(n_sites);
    if (noise.mode == NoiseMode::Conservative) {
        const double c = dt / du * scale;
        for (int j = 0; j < n; ++j) {
            const int l = j == 0 ? n - 1 : j - 1;
            state.rho[static_cast<std::size_t>(j)] +=
                c * (noise.w_r[static_cast<std::size_t>(j)] -
                     noise.w_r[static_cast<std::size_t>(l)]);
            state.m[static_cast<std::size_t>(j)] +=
                c * (noise.w_m[static_cast<std::size_t>(j)] -
                     noise.w_m[static_cast<std::size_t>(l)]) +
                dt * scale * noise.flip[static_cast<std::size_t>(j)];
        }
    } else {
        for (int j = 0; j < n; ++j) {
            state.rho[static_cast<std::size_t>(j)] +=
                dt * scale * noise.w_r[static_cast<std::size_t>(j)];
            state.m[static_cast<std::size_t>(j)] +=
                dt * scale * (noise.w_m[static_cast<std::size_t>(j)] +
                              noise.flip[static_cast<std::size_t>(j)]);
        }
    }
    // the formal equation has no built-in positivity: clamp and count
    std::uint64_t violations = 0;
    for (int j = 0; j < n; ++j) {
        auto& rho = state.rho[static_cast<std::size_t>(j)];
        auto& m = state.m[static_cast<std::size_t>(j)];
        bool bad = false;
        if (rho < 0.0) { rho = 0.0; bad = true; }
        if (rho > 1.0) { rho = 1.0; bad = true; }
        if (m > rho) { m = rho; bad = true; }
        if (m < -rho) { m = -rho; bad = true; }
        if (bad) ++violations;
    }
    return violations;
}

StationarySpectrum fluct_stationary_spectrum(int grid, const SpdeConfig& config, double rho0,
                                             double m0, double dt) {
    using cd = std::complex<double>;
    const int n = grid;
    const double du = 1.0 / n;
    const double rp = 0.5 * (rho0 + m0);
    const double rm = 0.5 * (rho0 - m0);
    const double sp = 2.0 * config.D * rp * (1.0 - rp);
    const double sm = 2.0 * config.D * rm * (1.0 - rm);
    StationarySpectrum out;
    out.var_r.assign(static_cast<std::size_t>(n), 0.0);
    out.var_m.assign(static_cast<std::size_t>(n), 0.0);

    for (int k = 1; k < n; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / n;
        const double qhat2 = (2.0 - 2.0 * std::cos(theta)) / (du * du);
        const double qtil = std::sin(theta) / du;
        const cd i(0.0, 1.0);
        cd a11 = -config.D * qhat2 + 2.0 * config.lambda * m0 * i * qtil;
        cd a12 = -2.0 * config.lambda * (1.0 - rho0) * i * qtil;
        cd a21 = -2.0 * config.lambda * (1.0 - 2.0 * rho0) * i * qtil;
        cd a22 = cd(-config.D * qhat2 - 2.0 * config.gamma, 0.0);

        const double transport =
            config.transport_noise == NoiseMode::Conservative ? qhat2 : 1.0;
        const double q11 = transport * (sp + sm);
        const double q12 = transport * (sp - sm);
        const double q22 = transport * (sp + sm) + 2.0 * config.gamma;

        // Solve for the Hermitian stationary covariance P via the linear map
        // on (p11, p22, Re p12, Im p12).
        auto apply = [&](const std::array<double, 4>& x, bool discrete) {
            const cd p11(x[0], 0.0), p22(x[1], 0.0), p12(x[2], x[3]);
            const cd p21 = std::conj(p12);
            cd r11, r12, r22;
            if (!discrete) {
                // A P + P A^H
                r11 = a11 * p11 + a12 * p21 + p11 * std::conj(a11) + p12 * std::conj(a12);
                r12 = a11 * p12 + a12 * p22 + p11 * std::conj(a21) + p12 * std::conj(a22);
                r22 = a21 * p12 + a22 * p22 + p21 * std::conj(a21) + p22 * std::conj(a22);
            } else {
                // G P G^H with G = I + dt A
                const cd g11 = 1.0 + dt * a11, g12 = dt * a12;
                const cd g21 = dt * a21, g22 = 1.0 + dt * a22;
                const cd t11 = g11 * p11 + g12 * p21;
                const cd t12 = g11 * p12 + g12 * p22;
                const cd t21 = g21 * p11 + g22 * p21;
                const cd t22 = g21 * p12 + g22 * p22;
                r11 = t11 * std::conj(g11) + t12 * std::conj(g12);
                r12 = t11 * std::conj(g21) + t12 * std::conj(g22);
                r22 = t21 * std::conj(g21) + t22 * std::conj(g22);
            }
            return std::array<double, 4>{r11.real(), r22.real(), r12.real(), r12.imag()};
        };

        const bool discrete = dt > 0.0;
        // continuous: A P + P A^H = -Q    -> L x = b with b = -q
        // discrete:   P - G P G^H = dt Q  -> L x = b with b = dt q
        std::array<std::array<double, 4>, 4> mat{};
        for (int c = 0; c < 4; ++c) {
            std::array<double, 4> e{};
            e[static_cast<std::size_t>(c)] = 1.0;
            auto col = apply(e, discrete);
            for (int r = 0; r < 4; ++r) {
                mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                    discrete ? (r == c ? 1.0 : 0.0) - col[static_cast<std::size_t>(r)]
                             : col[static_cast<std::size_t>(r)];
            }
        }
        std::array<double, 4> b = discrete
            ? std::array<double, 4>{dt * q11, dt * q22, dt * q12, 0.0}
            : std::array<double, 4>{-q11, -q22, -q12, 0.0};

        // Gaussian elimination with partial pivoting on the 4x4 system
        for (int col = 0; col < 4; ++col) {
            int piv = col;
            for (int r = col + 1; r < 4; ++r)
                if (std::abs(mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                    std::abs(mat[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
                    piv = r;
            std::swap(mat[static_cast<std::size_t>(col)], mat[static_cast<std::size_t>(piv)]);
            std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
            const double d = mat[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            for (int r = col + 1; r < 4; ++r) {
                const double f =
                    mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / d;
                for (int c2 = col; c2 < 4; ++c2)
                    mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)] -=
                        f * mat[static_cast<std::size_t>(col)][static_cast<std::size_t>(c2)];
                b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
            }
        }
        std::array<double, 4> x{};
        for (int r = 3; r >= 0; --r) {
            double acc = b[static_cast<std::size_t>(r)];
            for (int c2 = r + 1; c2 < 4; ++c2)
                acc -= mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)] *
                       x[static_cast<std::size_t>(c2)];
            x[static_cast<std::size_t>(r)] =
                acc / mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
        }
        out.var_r[static_cast<std::size_t>(k)] = x[0];
        out.var_m[static_cast<std::size_t>(k)] = x[1];
    }
    return out;
}

double spatial_variance(std::span<const double> field) {
    double mean = 0.0;
    for (double v : field) mean += v;
    mean /= static_cast<double>(field.size());
    double acc = 0.0;
    for (double v : field) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(field.size());
}

double mode_power(std::span<const double> field, int k) {
    const auto n = static_cast<int>(field.size());
    double re = 0.0, im = 0.0;
    for (int j = 0; j < n; ++j) {
        const double phase = -2.0 * std::numbers::pi * k * j / n;
        re += field[static_cast<std::size_t>(j)] * std::cos(phase);
        im += field[static_cast<std::size_t>(j)] * std::sin(phase);
    }
    re /= n;
    im /= n;
    return re * re + im * im;
}

} // namespace latgas::spde
