#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latgas/errors.hpp"
#include "latgas/ffunction.hpp"

namespace latgas::stability {

/// Re s above this counts as unstable.
inline constexpr double growth_tol = 1e-8;

/// Eigenvalues of the 2x2 linearization at one wavenumber q (radians per
/// unit length; perturbations ~ exp(i q u1 + s t)).
struct DispersionResult {
    double q = 0.0;
    std::complex<double> s1;
    std::complex<double> s2;

    [[nodiscard]] double max_growth() const { return std::max(s1.real(), s2.real()); }
    [[nodiscard]] double trace() const { return (s1 + s2).real(); }
    [[nodiscard]] std::complex<double> determinant() const { return s1 * s2; }
};

/// Linearization of the Peclet-rescaled MIPS system around (rho0, 0):
///   [[-q^2, -i q Pe (1-rho0)], [-i q Pe (1-2 rho0), -q^2 - 2]].
DispersionResult dispersion_mips(double rho0, double peclet, double q);

/// Linearization of the flocking system around a uniform state (rho0, m0)
/// with F(rho0, m0) = 0, using the analytic derivatives of F:
///   [[-D q^2, -i lambda q], [-i lambda q - 2 dF/drho, -D q^2 - 2 dF/dm]].
DispersionResult dispersion_flock(double rho0, double m0, double beta, double q, double D,
                                  double lambda);

/// Max growth over the q window (log grid + golden-section refinement).
struct QScan {
    double q_star = 0.0;
    double max_growth = 0.0;
    bool decreasing_at_edge = true;

    [[nodiscard]] bool unstable() const { return max_growth > growth_tol; }
};

QScan max_growth_scan(const std::function<double(double)>& growth, double q_min = 1e-4,
                      double q_max = 20.0, int points = 400);

/// Closed-form MIPS spinodal threshold Pe_c(rho0) from Pe^2 (1-rho)(2rho-1) = 2,
/// or nullopt when no threshold exists (rho0 outside (1/2, 1)).
std::optional<double> spinodal_mips_closed_form(double rho0);

/// Bisection threshold: smallest Pe with sup_q Re s > 0. Throws
/// SearchWindowExceeded when already unstable at the window's lower end;
/// returns nullopt when stable up to pe_hi.
std::optional<double> spinodal_mips(double rho0, double pe_lo = 1e-2, double pe_hi = 100.0,
                                    double tol = 1e-6);

/// Largest root m0 in [0, rho] of F(rho, m0) = 0, i.e. m = rho tanh(m sinh beta).
double self_consistent_m(double rho, double beta);

/// Spinodal data of the flocking model at one temperature T = 1/beta:
/// gaseous onset density (rho sinh(1/T) = 1, located numerically) and the
/// stability boundary of the magnetized branch where found.
struct FlockSpinodalPoint {
    double T = 0.0;
    double rho_gas_spinodal = 0.0;
    std::optional<double> rho_liquid_spinodal;
};

std::vector<FlockSpinodalPoint> spinodal_flock(std::span<const double> temperatures, double D,
                                               double lambda, double rho_max = 30.0);

/// Steady-state plateau extraction from the PDE.
enum class BinodalModel { MipsPeclet, Flock };
enum class BinodalStatus { Ok, NoPhaseSeparation, NotConverged };

struct BinodalOptions {
    int grid = 512;
    double domain_length = 10.0;
    double noise_amp = 0.01;
    double t_max = 400.0;
    double t_min = 10.0;          ///< don't conclude NoPhaseSeparation earlier
    double check_interval = 4.0;
    double plateau_tol = 0.005;   ///< max plateau drift over the final window
    double cfl_safety = 0.4;
    std::uint64_t seed = 20240801;
    // physical parameters
    double peclet = 8.0; ///< MipsPeclet
    double D = 1.0;      ///< Flock
    double lambda = 1.0; ///< Flock
    double beta = 1.0;   ///< Flock
};

struct BinodalResult {
    BinodalStatus status = BinodalStatus::NotConverged;
    double rho_bar = 0.0;
    double rho_gas = 0.0;
    double rho_liq = 0.0;
    double band_speed = 0.0;   ///< from cross-correlation displacement (Flock)
    double m_gas = 0.0;        ///< mean |m| over gas plateau cells
    double m_liq = 0.0;        ///< mean |m| over liquid plateau cells
    double time_used = 0.0;
};

BinodalResult binodal_from_pde(BinodalModel model, double rho_bar, const BinodalOptions& opts);

/// Plateau densities by interface masking plus 2-means clustering; nullopt
/// when the field has no usable two-phase structure.
struct Plateaus {
    double low = 0.0;
    double high = 0.0;
    double m_low = 0.0;  ///< mean |m| over cells assigned to the low plateau
    double m_high = 0.0;
};
std::optional<Plateaus> extract_plateaus(std::span<const double> rho, std::span<const double> m);

/// One verdict of a phase-diagram sweep.
struct PhasePoint {
    double rho0 = 0.0;
    double control = 0.0; ///< Pe (MIPS) or T (Flock)
    bool unstable = false;
    double max_growth = 0.0;
    double q_star = 0.0;
    std::string note;
};

std::vector<PhasePoint> phase_diagram_sweep_mips(std::span<const double> rho_values,
                                                 std::span<const double> pe_values, int jobs = 0);
std::vector<PhasePoint> phase_diagram_sweep_flock(std::span<const double> rho_values,
                                                  std::span<const double> temperatures, double D,
                                                  double lambda, int jobs = 0);

} // namespace latgas::stability
