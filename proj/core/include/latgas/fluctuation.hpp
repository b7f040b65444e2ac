#pragma once

#include <functional>

#include "latgas/configuration.hpp"
#include "latgas/hydro.hpp"

namespace latgas {

/// Fluctuation fields of an exclusion configuration against hydrodynamic
/// background fields (rho, m):
///   R(H) = N^{-d/2} sum_x H(x/N) (sigma_x - rho(t, x/N))
///   M(H) = N^{-d/2} sum_x H(x/N) (eta_x   - m(t, x/N))
struct FluctuationSample {
    double density = 0.0;       ///< R(H)
    double magnetization = 0.0; ///< M(H)
    double time = 0.0;
};

inline FluctuationSample fluctuation_sample(const ExclusionConfig& cfg,
                                            const std::function<double(double, double)>& H,
                                            const hydro::HydroState& background) {
    const Lattice& lat = cfg.lattice;
    if (background.dimension != lat.dimension())
        throw GridMismatch("fluctuation_sample: background dimension mismatch");
    if (std::abs(background.domain_length - 1.0) > 1e-12)
        throw GridMismatch("fluctuation_sample: background must live on the unit torus");
    double scale = 1.0;
    for (int d = 0; d < lat.dimension(); ++d) scale /= std::sqrt(static_cast<double>(lat.side()));
    FluctuationSample out;
    out.time = background.time;
    double r = 0.0;
    double m = 0.0;
    for (int s = 0; s < lat.sites(); ++s) {
        const double u1 = lat.unit_coord(s, 0);
        const double u2 = lat.dimension() == 2 ? lat.unit_coord(s, 1) : 0.0;
        const double h = H(u1, u2);
        const auto v = cfg.state[static_cast<std::size_t>(s)];
        const double sigma = v != 0 ? 1.0 : 0.0;
        const double eta = static_cast<double>(v);
        r += h * (sigma - hydro::rho_at(background, u1, u2));
        m += h * (eta - hydro::m_at(background, u1, u2));
    }
    out.density = r * scale;
    out.magnetization = m * scale;
    return out;
}

} // namespace latgas
