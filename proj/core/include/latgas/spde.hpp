#pragma once

#include <span>
#include <vector>

#include "latgas/hydro.hpp"
#include "latgas/rng.hpp"

namespace latgas::spde {

/// Injection mode for the transport noises. Conservative differences face
/// noises, so int R du is conserved exactly per step; Additive injects the
/// white noises per cell as written.
enum class NoiseMode { Conservative, Additive };

struct SpdeConfig {
    double D = 1.0;
    double lambda = 0.0;
    double gamma = 0.0;
    double dt = 0.0; ///< <= 0 selects the CFL-bounded default with this safety
    double cfl_safety = 0.1;
    NoiseMode transport_noise = NoiseMode::Conservative;

    [[nodiscard]] double stable_dt(double du) const {
        double dt_ = cfl_safety * du * du / (2.0 * D);
        if (gamma > 0.0 && dt_ > 0.125 / gamma) dt_ = 0.125 / gamma;
        return dt_;
    }
    [[nodiscard]] double effective_dt(double du) const {
        return dt > 0.0 ? dt : stable_dt(du);
    }
};

/// One step's realized noises on the unit-torus grid:
///   w_r = sqrt(2 D rho+(1-rho+)) W+ + sqrt(2 D rho-(1-rho-)) W-
///   w_m = sqrt(2 D rho+(1-rho+)) W+ - sqrt(2 D rho-(1-rho-)) W-
/// sharing the same W+- realizations, and flip = sqrt(2 gamma) B. Slots are
/// faces (conservative) or cells (additive); per-slot variance of the raw
/// whites is 1/(du dt).
struct NoiseField {
    NoiseMode mode = NoiseMode::Conservative;
    std::vector<double> w_r;
    std::vector<double> w_m;
    std::vector<double> flip;
};

/// Samples the three noises for one step. rho+- are cellwise amplitude
/// parameters and must lie in [0,1] (AmplitudeDomain otherwise); for the
/// conservative mode face amplitudes average the adjacent cells.
NoiseField sample_noise(int grid, double dt, RngStream& rng, std::span<const double> rho_plus,
                        std::span<const double> rho_minus, double D, double gamma,
                        NoiseMode mode);

/// Linear fluctuation fields (R, M) around a fixed hydrodynamic background
/// on the unit torus.
struct FluctState {
    int grid = 0;
    double time = 0.0;
    std::vector<double> r;
    std::vector<double> m;
    std::vector<double> bg_rho;
    std::vector<double> bg_m;

    [[nodiscard]] double du() const { return 1.0 / grid; }
};

FluctState flat_fluct_state(int grid, double rho0, double m0);

/// One Euler-Maruyama step of the linear SPDE system
///   dt R = D lap R - 2 lambda d1[(1-rho) M - m R] + w_r
///   dt M = D lap M - 2 lambda d1[(1-2rho) R] - 2 gamma M + w_m + flip
/// with the supplied noise realization (linear in (R, M) for fixed noise).
void step_fluct(FluctState& state, const SpdeConfig& config, const NoiseField& noise);

/// Convenience overload: samples the noise, applies the step, returns it.
NoiseField step_fluct(FluctState& state, const SpdeConfig& config, RngStream& rng);

/// One step of the nonlinear MIPS hydrodynamics with 1/sqrt(N)-scaled noise
/// evaluated at the current (rho+, rho-). rho is clamped to [0,1] and |m| to
/// rho afterwards; returns the number of clamped cells (reliability counter).
std::uint64_t step_fluctuating_hydro(hydro::HydroState& state, double n_sites,
                                     const SpdeConfig& config, RngStream& rng);

/// Per-mode stationary covariance of the linear system around a flat
/// background, from the 2x2 Lyapunov balance with the discrete stencil
/// symbols. dt <= 0 gives the continuous-time closed form; dt > 0 the exact
/// Euler-Maruyama fixed point.
struct StationarySpectrum {
    std::vector<double> var_r; ///< E|R_hat_k|^2, k = 0..M-1 (k = 0 entry is 0)
    std::vector<double> var_m;

    [[nodiscard]] double spatial_var_r() const {
        double s = 0.0;
        for (double v : var_r) s += v;
        return s;
    }
    [[nodiscard]] double spatial_var_m() const {
        double s = 0.0;
        for (double v : var_m) s += v;
        return s;
    }
    /// Var of the pairing R(H) with H(u) = sin(2 pi k u).
    [[nodiscard]] double var_r_sine(int k) const { return 0.5 * var_r[static_cast<std::size_t>(k)]; }
};

StationarySpectrum fluct_stationary_spectrum(int grid, const SpdeConfig& config, double rho0,
                                             double m0, double dt = 0.0);

/// Sample spatial variance (1/M) sum (x_j - mean)^2 of a grid field.
double spatial_variance(std::span<const double> field);

/// |DFT_k|^2 of a field with the 1/M-normalized forward transform.
double mode_power(std::span<const double> field, int k);

} // namespace latgas::spde
