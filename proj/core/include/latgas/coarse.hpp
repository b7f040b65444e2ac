#pragma once

#include <cmath>
#include <vector>

#include "latgas/configuration.hpp"
#include "latgas/errors.hpp"

namespace latgas {

/// Block averages of (sigma+, sigma-) over boxes B_l(x) of (2l+1)^d sites
/// with periodic wrap, evaluated at every stride-th site per axis.
struct CoarseField {
    int dimension = 1;
    int source_side = 0; ///< N of the source lattice
    int block_radius = 0;
    int stride = 1;
    double time = 0.0;
    std::vector<double> plus;
    std::vector<double> minus;

    [[nodiscard]] int centers_per_axis() const { return source_side / stride; }
    [[nodiscard]] std::size_t centers() const { return plus.size(); }
    /// Macroscopic coordinate of center index c along an axis.
    [[nodiscard]] double center_coord(std::size_t c, int axis) const {
        const int per = centers_per_axis();
        const auto idx = axis == 0 ? static_cast<int>(c) % per : static_cast<int>(c) / per;
        return static_cast<double>(idx * stride) / source_side;
    }
};

/// Default coarse-graining radius, ceil(N^0.6).
inline int default_block_radius(int side) {
    return static_cast<int>(std::ceil(std::pow(static_cast<double>(side), 0.6)));
}

namespace detail {

/// Circular box mean of width 2l+1 along contiguous rows of length n.
inline void circular_box_mean_rows(const std::vector<double>& in, std::vector<double>& out,
                                   int rows, int n, int l) {
    const double inv = 1.0 / (2 * l + 1);
    for (int r = 0; r < rows; ++r) {
        const double* v = in.data() + static_cast<std::size_t>(r) * n;
        double* o = out.data() + static_cast<std::size_t>(r) * n;
        double sum = 0.0;
        for (int j = -l; j <= l; ++j) sum += v[(j + n) % n];
        for (int i = 0; i < n; ++i) {
            o[i] = sum * inv;
            sum -= v[(i - l + n) % n];
            sum += v[(i + l + 1) % n];
        }
    }
}

/// Transpose an rows x n matrix stored row-major.
inline std::vector<double> transpose(const std::vector<double>& in, int rows, int n) {
    std::vector<double> out(in.size());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < n; ++c)
            out[static_cast<std::size_t>(c) * rows + r] = in[static_cast<std::size_t>(r) * n + c];
    return out;
}

inline std::vector<double> box_filter(const std::vector<double>& field, int dimension, int side,
                                      int l) {
    std::vector<double> tmp(field.size());
    if (dimension == 1) {
        circular_box_mean_rows(field, tmp, 1, side, l);
        return tmp;
    }
    circular_box_mean_rows(field, tmp, side, side, l); // along x, per row
    auto t = transpose(tmp, side, side);
    std::vector<double> tmp2(field.size());
    circular_box_mean_rows(t, tmp2, side, side, l); // along y
    return transpose(tmp2, side, side);
}

inline std::vector<double> subsample(const std::vector<double>& full, int dimension, int side,
                                     int stride) {
    if (stride == 1) return full;
    std::vector<double> out;
    if (dimension == 1) {
        for (int i = 0; i < side; i += stride) out.push_back(full[static_cast<std::size_t>(i)]);
        return out;
    }
    for (int y = 0; y < side; y += stride)
        for (int x = 0; x < side; x += stride)
            out.push_back(full[static_cast<std::size_t>(y) * side + x]);
    return out;
}

template <class ConfigT>
CoarseField coarse_grain_impl(const ConfigT& cfg, int block_radius, double time, int stride) {
    const Lattice& lat = cfg.lattice;
    if (block_radius < 1 || block_radius > lat.side() / 4)
        throw BlockTooLarge("coarse_grain: block radius must lie in [1, N/4]");
    if (stride < 1 || lat.side() % stride != 0)
        throw Error("coarse_grain: stride must divide N");
    const auto f = sigma_fields(cfg);
    CoarseField out;
    out.dimension = lat.dimension();
    out.source_side = lat.side();
    out.block_radius = block_radius;
    out.stride = stride;
    out.time = time;
    out.plus = subsample(box_filter(f.plus, lat.dimension(), lat.side(), block_radius),
                         lat.dimension(), lat.side(), stride);
    out.minus = subsample(box_filter(f.minus, lat.dimension(), lat.side(), block_radius),
                          lat.dimension(), lat.side(), stride);
    return out;
}

} // namespace detail

inline CoarseField coarse_grain(const ExclusionConfig& cfg, int block_radius, double time = 0.0,
                                int stride = 1) {
    return detail::coarse_grain_impl(cfg, block_radius, time, stride);
}

inline CoarseField coarse_grain(const ZeroRangeConfig& cfg, int block_radius, double time = 0.0,
                                int stride = 1) {
    return detail::coarse_grain_impl(cfg, block_radius, time, stride);
}

} // namespace latgas
