#pragma once

#include <cstdint>
#include <functional>

#include "latgas/engine.hpp"
#include "latgas/profile.hpp"

namespace latgas {

/// Dynkin decomposition of X(t) = N^{-d} sum_x H(x/N) sigma+_x along one
/// trajectory: X(T) - X(0) - int_0^T (LX)(eta_s) ds is a martingale whose
/// second moment vanishes like 1/N. The drift integral is accumulated
/// exactly (LX is piecewise constant between events), and the pathwise
/// quadratic variation int sum_channels c(eta -> eta') (dX)^2 ds is kept as
/// an independent estimator of the same second moment.
struct MartingaleSample {
    double initial = 0.0;
    double final_value = 0.0;
    double drift_integral = 0.0;
    double martingale = 0.0;
    double quadratic_variation = 0.0;
};

/// Simulates cfg under spec up to time T while accumulating the Dynkin
/// terms for the test function H(u1[,u2]).
MartingaleSample dynkin_trajectory(ExclusionConfig& cfg, const ModelSpec& spec, double T,
                                   const std::function<double(double, double)>& H,
                                   RngStream& rng);
MartingaleSample dynkin_trajectory(ZeroRangeConfig& cfg, const ModelSpec& spec, double T,
                                   const std::function<double(double, double)>& H,
                                   RngStream& rng);

struct MartingaleStats {
    double second_moment = 0.0; ///< empirical E[(M_T^H)^2]
    double stderr_ = 0.0;
    double mean_quadratic_variation = 0.0;
    int ensemble = 0;
};

/// Ensemble estimate of E[(M_T^H)^2] from independent product initial states.
MartingaleStats martingale_variance_check(const ModelSpec& spec, const SpeciesProfiles& profiles,
                                          const std::function<double(double, double)>& H,
                                          double T, int ensemble, std::uint64_t seed,
                                          int jobs = 0);

} // namespace latgas
