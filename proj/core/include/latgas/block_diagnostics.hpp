#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "latgas/coarse.hpp"
#include "latgas/equilibrium.hpp"

namespace latgas {

namespace detail {

/// tau_x g evaluated at every site of a 1d configuration.
template <class ConfigT>
std::vector<double> local_function_field(const ConfigT& cfg, const LocalFunction& g) {
    const Lattice& lat = cfg.lattice;
    if (lat.dimension() != 1)
        throw Error("local_function_field: 1d configurations only");
    std::vector<SiteState> window(g.offsets.size());
    std::vector<double> out(static_cast<std::size_t>(lat.sites()));
    for (int x = 0; x < lat.sites(); ++x) {
        for (std::size_t k = 0; k < g.offsets.size(); ++k) {
            const int s = lat.wrap(x + g.offsets[k]);
            window[k] = {site_plus(cfg, s), site_minus(cfg, s)};
        }
        out[static_cast<std::size_t>(x)] = g.eval(window);
    }
    return out;
}

/// Sliding min/max over circular windows [i-m, i+m], monotonic deques.
inline void circular_window_minmax(const std::vector<double>& v, int m,
                                   std::vector<double>& mins, std::vector<double>& maxs) {
    const int n = static_cast<int>(v.size());
    mins.assign(v.size(), 0.0);
    maxs.assign(v.size(), 0.0);
    std::deque<int> qmin, qmax;
    // windows on the doubled array: center i covers [i - m, i + m]
    auto value = [&](int j) { return v[static_cast<std::size_t>((j % n + n) % n)]; };
    int right = -m - 1;
    for (int i = 0; i < n; ++i) {
        const int lo = i - m;
        const int hi = i + m;
        while (right < hi) {
            ++right;
            while (!qmin.empty() && value(qmin.back()) >= value(right)) qmin.pop_back();
            qmin.push_back(right);
            while (!qmax.empty() && value(qmax.back()) <= value(right)) qmax.pop_back();
            qmax.push_back(right);
        }
        while (qmin.front() < lo) qmin.pop_front();
        while (qmax.front() < lo) qmax.pop_front();
        mins[static_cast<std::size_t>(i)] = value(qmin.front());
        maxs[static_cast<std::size_t>(i)] = value(qmax.front());
    }
}

} // namespace detail

/// One-block diagnostic: spatial average over centers y of
///   | avg_{x in B_l(y)} tau_x g  -  E_{rho_hat(y)}(g) |,
/// with the expectation taken in the model's equilibrium family at the
/// empirical block densities. Requires a registered closed form for g.
template <class ConfigT>
double one_block_residual(const ConfigT& cfg, const LocalFunction& g, int block_radius,
                          MeasureFamily family, double beta = 0.0) {
    const Lattice& lat = cfg.lattice;
    const auto gfield = detail::local_function_field(cfg, g);
    std::vector<double> gavg(gfield.size());
    detail::circular_box_mean_rows(gfield, gavg, 1, lat.side(), block_radius);
    const auto coarse = coarse_grain(cfg, block_radius);
    double acc = 0.0;
    for (std::size_t y = 0; y < gavg.size(); ++y) {
        EquilibriumMeasureSpec spec{family, coarse.plus[y], coarse.minus[y], beta};
        acc += std::abs(gavg[y] - equilibrium_expectation_closed(g, spec));
    }
    return acc / static_cast<double>(gavg.size());
}

/// Two-blocks diagnostic per species: average over x of
///   sup_{|y-x| <= eps N} | rho_hat^l_x - rho_hat^l_y |.
struct TwoBlocksResidual {
    double plus = 0.0;
    double minus = 0.0;
};

template <class ConfigT>
TwoBlocksResidual two_blocks_residual(const ConfigT& cfg, int block_radius, double epsilon) {
    const Lattice& lat = cfg.lattice;
    if (lat.dimension() != 1) throw Error("two_blocks_residual: 1d configurations only");
    const int m = static_cast<int>(epsilon * lat.side());
    if (block_radius >= m || m >= lat.side() / 4)
        throw Error("two_blocks_residual: need l < eps N < N/4");
    const auto coarse = coarse_grain(cfg, block_radius);
    TwoBlocksResidual out;
    std::vector<double> mins, maxs;
    for (int species = 0; species < 2; ++species) {
        const auto& field = species == 0 ? coarse.plus : coarse.minus;
        detail::circular_window_minmax(field, m, mins, maxs);
        double acc = 0.0;
        for (std::size_t i = 0; i < field.size(); ++i)
            acc += std::max(maxs[i] - field[i], field[i] - mins[i]);
        (species == 0 ? out.plus : out.minus) = acc / static_cast<double>(field.size());
    }
    return out;
}

} // namespace latgas
