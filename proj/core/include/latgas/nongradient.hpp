#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "latgas/configuration.hpp"

namespace latgas::nongrad {

/// Symmetric currents across the bond (site, site + e_axis) of the AEP:
///   j+ = sigma+_x (1 - sigma_y) - sigma+_y (1 - sigma_x)   (not a gradient)
///   j  = sigma_x - sigma_y                                 (type-blind, gradient)
std::pair<int, int> aep_current_terms(const ExclusionConfig& cfg, int site, int axis);

/// Tagged-particle self-diffusion estimate from the mean-squared displacement
/// of the rate-1-per-direction exclusion walk (the symmetric AEP rule). The
/// estimate is the MSD slope over [budget/2, budget] divided by 2d, in units
/// of the free-particle coefficient. fit_window_ok = false flags a window
/// where MSD/t varies by more than 10% (subdiffusion).
struct SelfDiffusionEstimate {
    double rho = 0.0;
    int dimension = 0;
    int lattice_side = 0;
    double ds = 0.0;
    double stderr_ = 0.0;
    double msd_exponent = 1.0;
    double fit_t_lo = 0.0;
    double fit_t_hi = 0.0;
    bool fit_window_ok = true;
};

SelfDiffusionEstimate estimate_self_diffusion(double rho, int dimension, int side,
                                              double time_budget, int runs, std::uint64_t seed,
                                              int jobs = 0);

/// Segregated-types relaxation: start from rho+ = c on the left half,
/// rho- = c on the right half (slab along axis 1 in 2d) and run the
/// symmetric dynamics only. with_swap = true uses the stirring exchange
/// (gradient), false the hop-onto-empty rule (non-gradient AEP rule).
/// Distances are L1 norms of the coarse-grained rho+ field from c/2.
struct RelaxationReport {
    double c = 0.0;
    int dimension = 0;
    int side = 0;
    bool with_swap = false;
    int block_radius = 0;
    double initial_distance = 0.0;
    std::vector<std::pair<double, double>> distances; ///< (time, L1 distance)
};

RelaxationReport segregation_relaxation_experiment(double c, int dimension, int side,
                                                   std::span<const double> times, bool with_swap,
                                                   double D, std::uint64_t seed,
                                                   int block_radius = 0);

/// Tabulated self-diffusion coefficient with linear interpolation in rho.
struct DsTable {
    std::vector<double> rho;
    std::vector<double> ds;

    [[nodiscard]] double at(double r) const;
};

/// One mesoscopic window observation for the fluctuation-dissipation form:
/// the block current (crossings per bond per unit time, normalized by -D N)
/// against the two gradient predictors. Both species are recorded so the
/// +- symmetry of the decomposition can be checked directly.
struct FdWindowSample {
    double grad_rho_plus = 0.0;  ///< d_u1 of the coarse rho+ field
    double grad_rho_minus = 0.0; ///< d_u1 of the coarse rho- field
    double grad_rho = 0.0;       ///< d_u1 of the coarse total density
    double current = 0.0;        ///< -J+_window / (tau D N), sign-matched to the gradients
    double current_minus = 0.0;  ///< -J-_window / (tau D N)
};

enum class FdStatus { Ok, InsufficientSignal };

struct FdFormReport {
    FdStatus status = FdStatus::InsufficientSignal;
    double ds_coeff = 0.0; ///< fitted coefficient of grad rho+
    double ds_se = 0.0;
    double dens_coeff = 0.0; ///< fitted coefficient of grad rho (free parameter)
    double dens_se = 0.0;
    double residual_rms = 0.0;
    double ds_reference = 0.0; ///< d_s table value at the run's mean density
    int samples = 0;
};

/// Least-squares regression of the windowed current on the two predictors.
FdFormReport fd_form_check(std::span<const FdWindowSample> samples, const DsTable& table,
                           double mean_density, double signal_threshold = 0.02);

/// Collects window samples from a 2d AEP run (lambda = gamma = 0). The
/// default initial state is the segregated slab (rho+ left, rho- right at
/// equal total density); balanced_gradient = true instead uses equal species
/// on a sinusoidal total-density profile.
struct FdExperimentOptions {
    double c = 0.5;
    int side = 64;
    double D = 1.0;
    double tau = 0.05;
    int windows = 6;
    int seeds = 4;
    std::uint64_t seed = 7;
    int jobs = 0;
    bool balanced_gradient = false;
};
std::vector<FdWindowSample> collect_fd_windows(const FdExperimentOptions& opts);

} // namespace latgas::nongrad
