#pragma once

#include <array>
#include <cassert>
#include <vector>

#include "latgas/errors.hpp"

namespace latgas {

/// Periodic lattice torus in 1 or 2 dimensions with N sites per axis.
/// Site indices are 0-based and row-major; the macroscopic coordinate of
/// site coordinate x is u = x/N on the unit torus.
class Lattice {
public:
    Lattice(int dimension, int side) : dim_(dimension), side_(side) {
        if (dimension != 1 && dimension != 2)
            throw Error("Lattice: dimension must be 1 or 2");
        if (side < 2) throw Error("Lattice: side length must be >= 2");
        sites_ = side;
        for (int d = 1; d < dimension; ++d) sites_ *= side;
    }

    [[nodiscard]] int dimension() const { return dim_; }
    [[nodiscard]] int side() const { return side_; }
    [[nodiscard]] int sites() const { return sites_; }

    [[nodiscard]] int wrap(int c) const {
        const int m = c % side_;
        return m < 0 ? m + side_ : m;
    }

    [[nodiscard]] int index(int x, int y = 0) const {
        return dim_ == 1 ? wrap(x) : wrap(y) * side_ + wrap(x);
    }

    [[nodiscard]] std::array<int, 2> coords(int site) const {
        return dim_ == 1 ? std::array<int, 2>{site, 0}
                         : std::array<int, 2>{site % side_, site / side_};
    }

    /// Neighbor of a site along an axis (axis 0 = x, axis 1 = y), step +-1.
    [[nodiscard]] int neighbor(int site, int axis, int step) const {
        assert(axis >= 0 && axis < dim_);
        if (axis == 0) {
            const int x = site % side_;
            const int nx = x + step;
            if (nx >= side_) return site - x;             // wrap to 0
            if (nx < 0) return site - x + (side_ - 1);    // wrap to N-1
            return site + step;
        }
        const int y = site / side_;
        const int ny = y + step;
        if (ny >= side_) return site - y * side_;
        if (ny < 0) return site + (side_ - 1 - y) * side_;
        return site + step * side_;
    }

    /// Macroscopic coordinate of a site along an axis, u = x/N in [0,1).
    [[nodiscard]] double unit_coord(int site, int axis) const {
        const auto c = coords(site);
        return static_cast<double>(c[axis]) / side_;
    }

    struct Edge {
        int site; ///< base site
        int axis;
        int to; ///< site + e_axis (wrapped)
    };

    /// Canonical undirected nearest-neighbor edges, one per unordered pair.
    /// For side == 2 the pair {x, x+1} would be enumerated twice; duplicates
    /// are dropped so the edge set matches the physical bond set.
    [[nodiscard]] std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(static_cast<std::size_t>(sites_) * dim_);
        for (int s = 0; s < sites_; ++s) {
            const auto c = coords(s);
            for (int a = 0; a < dim_; ++a) {
                if (side_ == 2 && c[a] == 1) continue;
                out.push_back({s, a, neighbor(s, a, +1)});
            }
        }
        return out;
    }

    /// Slot index for per-(site,axis) accumulators: site*dim + axis.
    [[nodiscard]] int edge_slot(int site, int axis) const { return site * dim_ + axis; }
    [[nodiscard]] int edge_slots() const { return sites_ * dim_; }

private:
    int dim_;
    int side_;
    int sites_;
};

} // namespace latgas
