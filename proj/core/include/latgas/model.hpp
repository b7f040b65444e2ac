#pragma once

#include <cmath>
#include <string>

#include "latgas/errors.hpp"

namespace latgas {

/// The three microscopic dynamics.
///  - MipsExclusion: exclusion spins, stirring exchange at D N^2 per bond,
///    typed hops (+ right, - left) at lambda N onto empty sites, type flips
///    at constant rate gamma.
///  - ZrFlock: zero-range pairs, free hops at D N^2 per particle per
///    direction, typed extra hops at lambda N, flips at exp(-+ beta (n+ - n-)).
///  - Aep: exclusion also on the symmetric hops (non-gradient), 2d.
enum class ModelKind { MipsExclusion, ZrFlock, Aep };

inline const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::MipsExclusion: return "mips";
        case ModelKind::ZrFlock: return "zr-flock";
        case ModelKind::Aep: return "aep";
    }
    return "?";
}

struct ModelSpec {
    ModelKind kind = ModelKind::MipsExclusion;
    int dimension = 1;
    int side = 0;        ///< N, sites per axis
    double D = 1.0;      ///< symmetric-jump coefficient; jumps run at D N^2
    double lambda = 0.0; ///< weak-asymmetry strength; active hops run at lambda N
    double gamma = 0.0;  ///< flip rate (MipsExclusion, Aep)
    double beta = 0.0;   ///< inverse alignment temperature (ZrFlock)

    void validate() const {
        if (side < 2) throw Error("ModelSpec: side must be >= 2");
        if (!(D > 0.0)) throw Error("ModelSpec: D must be > 0");
        if (lambda < 0.0) throw Error("ModelSpec: lambda must be >= 0");
        if (gamma < 0.0) throw Error("ModelSpec: gamma must be >= 0");
        if (beta < 0.0) throw Error("ModelSpec: beta must be >= 0");
        switch (kind) {
            case ModelKind::MipsExclusion:
                if (dimension != 1 && dimension != 2)
                    throw Error("ModelSpec: MIPS dimension must be 1 or 2");
                break;
            case ModelKind::ZrFlock:
                if (dimension != 1) throw Error("ModelSpec: zero-range model is 1-dimensional");
                break;
            case ModelKind::Aep:
                // self-diffusion vanishes in 1d, the model is only meaningful in 2d
                if (dimension != 2) throw Error("ModelSpec: AEP requires dimension 2");
                break;
        }
    }

    [[nodiscard]] double peclet() const { return lambda / std::sqrt(D * gamma); }
};

} // namespace latgas
