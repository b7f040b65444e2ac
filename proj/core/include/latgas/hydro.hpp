#pragma once

#include <span>
#include <vector>

#include "latgas/errors.hpp"
#include "latgas/ffunction.hpp"
#include "latgas/profile.hpp"

namespace latgas::hydro {

/// Which hydrodynamic system to integrate:
///  - Mips (1d):    dt rho = D rho_uu - lambda d_u[m(1-rho)]
///                  dt m   = D m_uu   - lambda d_u[rho(1-rho)] - 2 gamma m
///  - Peclet2d:     dt rho = lap rho - Pe d_u1[m(1-rho)]
///                  dt m   = lap m   - Pe d_u1[rho(1-rho)] - 2 m
///  - Flock (1d):   dt rho = D rho_uu - lambda m_u
///                  dt m   = D m_uu   - lambda rho_u - 2 F(rho, m)
enum class System { Mips, Peclet2d, Flock };

enum class Scheme { Central, UpwindAdvection };

/// Discretized macroscopic fields (rho, m) on a periodic grid.
struct HydroState {
    int dimension = 1;
    int grid = 0; ///< points per axis
    double domain_length = 1.0;
    double time = 0.0;
    std::vector<double> rho;
    std::vector<double> m;

    [[nodiscard]] double du() const { return domain_length / grid; }
    [[nodiscard]] std::size_t cells() const { return rho.size(); }
    [[nodiscard]] double rho_plus_at(std::size_t i) const { return 0.5 * (rho[i] + m[i]); }
    [[nodiscard]] double rho_minus_at(std::size_t i) const { return 0.5 * (rho[i] - m[i]); }
};

struct PdeConfig {
    System system = System::Mips;
    Scheme scheme = Scheme::Central;
    double D = 1.0;
    double lambda = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    double peclet = 0.0;
    double dt = 0.0; ///< <= 0 selects the CFL-bounded default
    double cfl_safety = 0.4;

    [[nodiscard]] double diffusion() const { return system == System::Peclet2d ? 1.0 : D; }
    [[nodiscard]] int dimension() const { return system == System::Peclet2d ? 2 : 1; }

    [[nodiscard]] double stable_dt(double du) const {
        double dt = cfl_safety * du * du / (2.0 * dimension() * diffusion());
        const double damping = system == System::Peclet2d ? 1.0 : gamma;
        if (damping > 0.0) dt = dt < 0.125 / damping ? dt : 0.125 / damping;
        return dt;
    }

    void validate(double du) const {
        if (cfl_safety <= 0.0 || cfl_safety > 0.9)
            throw StepRejected("PdeConfig: cfl_safety must lie in (0, 0.9]");
        if (dt > 0.0 && dt > 0.9 * du * du / (2.0 * dimension() * diffusion()))
            throw StepRejected("PdeConfig: dt violates the CFL bound");
    }
};

/// Uniform state (rho0, m0).
HydroState uniform_state(System system, int grid, double rho0, double m0,
                         double domain_length = 1.0);

/// State sampled from macroscopic profiles; profiles are read on the unit
/// torus and stretched to the domain length.
HydroState state_from_profiles(System system, const SpeciesProfiles& profiles, int grid,
                               double domain_length = 1.0);

/// One explicit flux-form Euler step of each system. dt <= 0 uses the
/// CFL-bounded default; StepRejected on invariant violation.
void step_mips(HydroState& state, const PdeConfig& config, double dt = 0.0);
void step_peclet_2d(HydroState& state, const PdeConfig& config, double dt = 0.0);
void step_flock(HydroState& state, const PdeConfig& config, double dt = 0.0);

/// MIPS step without the invariant monitor, for noisy integrators that clamp
/// and count violations themselves.
void step_mips_raw(HydroState& state, const PdeConfig& config, double dt);

/// Steps the state in place up to the target time.
void advance(HydroState& state, const PdeConfig& config, double target_time);

/// Drives the state from its current time to each snapshot time in order,
/// returning copies at the requested times. Mass int(rho) is conserved to
/// accumulation round-off by the flux form.
std::vector<HydroState> solve(HydroState state, const PdeConfig& config, double T,
                              std::span<const double> snapshot_times);

double total_mass(const HydroState& state);
double total_magnetization(const HydroState& state);

/// L1 distance between two states on the same grid, normalized by volume.
double l1_distance_rho(const HydroState& a, const HydroState& b);
double l1_distance_m(const HydroState& a, const HydroState& b);

/// Periodic linear interpolation of the fields at macroscopic coordinates.
double rho_at(const HydroState& state, double u1, double u2 = 0.0);
double m_at(const HydroState& state, double u1, double u2 = 0.0);

} // namespace latgas::hydro
