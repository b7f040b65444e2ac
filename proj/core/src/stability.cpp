#include "latgas/stability.hpp"

#include <algorithm>
#include <cmath>

#include "latgas/errors.hpp"
#include "latgas/hydro.hpp"
#include "latgas/parallel.hpp"
#include "latgas/rng.hpp"

namespace latgas::stability {
namespace {

DispersionResult eigen_2x2(double q, std::complex<double> a11, std::complex<double> a12,
                           std::complex<double> a21, std::complex<double> a22) {
    const std::complex<double> tr = a11 + a22;
    const std::complex<double> det = a11 * a22 - a12 * a21;
    const std::complex<double> disc = std::sqrt(tr * tr - 4.0 * det);
    DispersionResult r;
    r.q = q;
    r.s1 = 0.5 * (tr + disc);
    r.s2 = 0.5 * (tr - disc);
    return r;
}

} // namespace

DispersionResult dispersion_mips(double rho0, double peclet, double q) {
    const std::complex<double> i(0.0, 1.0);
    return eigen_2x2(q, {-q * q, 0.0}, -i * q * peclet * (1.0 - rho0),
                     -i * q * peclet * (1.0 - 2.0 * rho0), {-q * q - 2.0, 0.0});
}

DispersionResult dispersion_flock(double rho0, double m0, double beta, double q, double D,
                                  double lambda) {
    const std::complex<double> i(0.0, 1.0);
    const double fr = dF_drho(rho0, m0, beta);
    const double fm = dF_dm(rho0, m0, beta);
    return eigen_2x2(q, {-D * q * q, 0.0}, -i * lambda * q,
                     -i * lambda * q - 2.0 * fr, {-D * q * q - 2.0 * fm, 0.0});
}

QScan max_growth_scan(const std::function<double(double)>& growth, double q_min, double q_max,
                      int points) {
    QScan out;
    const double lr = std::log(q_max / q_min);
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    std::vector<double> qs(static_cast<std::size_t>(points));
    std::vector<double> gs(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double q = q_min * std::exp(lr * i / (points - 1));
        const double g = growth(q);
        qs[static_cast<std::size_t>(i)] = q;
        gs[static_cast<std::size_t>(i)] = g;
        if (g > best) {
            best = g;
            best_i = i;
        }
    }
    out.decreasing_at_edge = gs[static_cast<std::size_t>(points - 1)] <
                             gs[static_cast<std::size_t>(points - 2)];
    // golden-section refinement around the best grid point
    double a = qs[static_cast<std::size_t>(std::max(0, best_i - 1))];
    double b = qs[static_cast<std::size_t>(std::min(points - 1, best_i + 1))];
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = growth(x1);
    double f2 = growth(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = growth(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = growth(x1);
        }
    }
    const double qr = 0.5 * (a + b);
    const double gref = growth(qr);
    if (gref >= best) {
        out.q_star = qr;
        out.max_growth = gref;
    } else {
        out.q_star = qs[static_cast<std::size_t>(best_i)];
        out.max_growth = best;
    }
    return out;
}

std::optional<double> spinodal_mips_closed_form(double rho0) {
    const double g = (1.0 - rho0) * (2.0 * rho0 - 1.0);
    if (g <= 0.0) return std::nullopt;
    return std::sqrt(2.0 / g);
}

namespace {
bool mips_unstable(double rho0, double pe) {
    const auto scan = max_growth_scan(
        [&](double q) { return dispersion_mips(rho0, pe, q).max_growth(); });
    return scan.max_growth > growth_tol;
}
} // namespace

std::optional<double> spinodal_mips(double rho0, double pe_lo, double pe_hi, double tol) {
    if (rho0 <= 0.0 || rho0 >= 1.0) throw Error("spinodal_mips: rho0 must lie in (0,1)");
    if (mips_unstable(rho0, pe_lo))
        throw SearchWindowExceeded("spinodal_mips: unstable at the lower window edge");
    if (!mips_unstable(rho0, pe_hi)) return std::nullopt;
    double lo = pe_lo;
    double hi = pe_hi;
    while (hi - lo > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (mips_unstable(rho0, mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double self_consistent_m(double rho, double beta) {
    if (rho <= 0.0) throw Error("self_consistent_m: rho must be > 0");
    const double s = std::sinh(beta);
    if (!(rho * s > 1.0)) return 0.0;
    auto g = [&](double m) { return m - rho * std::tanh(m * s); };
    double lo = 0.0;     // g < 0 just above 0
    double hi = rho;     // g(rho) = rho (1 - tanh(rho s)) > 0
    // g is negative immediately above zero because g'(0) = 1 - rho s < 0
    double probe = rho * 0.5;
    while (g(probe) > 0.0 && probe > 1e-300) probe *= 0.5;
    lo = probe;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * rho; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {
bool flock_gaseous_unstable(double rho0, double beta, double D, double lambda) {
    const auto scan = max_growth_scan([&](double q) {
        return dispersion_flock(rho0, 0.0, beta, q, D, lambda).max_growth();
    });
    return scan.max_growth > growth_tol;
}

bool flock_liquid_unstable(double rho0, double beta, double D, double lambda) {
    const double m0 = self_consistent_m(rho0, beta);
    const auto scan = max_growth_scan([&](double q) {
        return dispersion_flock(rho0, m0, beta, q, D, lambda).max_growth();
    });
    return scan.max_growth > growth_tol;
}
} // namespace

std::vector<FlockSpinodalPoint> spinodal_flock(std::span<const double> temperatures, double D,
                                               double lambda, double rho_max) {
    std::vector<FlockSpinodalPoint> out;
    out.reserve(temperatures.size());
    for (double T : temperatures) {
        FlockSpinodalPoint pt;
        pt.T = T;
        const double beta = 1.0 / T;
        if (!flock_gaseous_unstable(rho_max, beta, D, lambda)) {
            // no instability up to rho_max at this temperature (e.g. beta = 0)
            pt.rho_gas_spinodal = std::numeric_limits<double>::quiet_NaN();
            out.push_back(pt);
            continue;
        }
        double lo = 1e-6;
        double hi = rho_max;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (flock_gaseous_unstable(mid, beta, D, lambda) ? hi : lo) = mid;
        }
        pt.rho_gas_spinodal = 0.5 * (lo + hi);

        // stability boundary of the magnetized branch, above the gaseous onset
        const double start = pt.rho_gas_spinodal * (1.0 + 1e-7);
        if (flock_liquid_unstable(start, beta, D, lambda) &&
            !flock_liquid_unstable(rho_max, beta, D, lambda)) {
            double llo = start;
            double lhi = rho_max;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (llo + lhi);
                (flock_liquid_unstable(mid, beta, D, lambda) ? llo : lhi) = mid;
            }
            pt.rho_liquid_spinodal = 0.5 * (llo + lhi);
        }
        out.push_back(pt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Binodal extraction from steady PDE states
// ---------------------------------------------------------------------------
namespace {

struct InterfaceInfo {
    std::vector<int> marked; ///< cells above the 10% gradient threshold
    int width = 1;           ///< mean contiguous run length
};

InterfaceInfo interface_cells(std::span<const double> rho) {
    const int n = static_cast<int>(rho.size());
    std::vector<double> grad(static_cast<std::size_t>(n));
    double gmax = 0.0;
    for (int j = 0; j < n; ++j) {
        const int r = (j + 1) % n;
        const int l = (j + n - 1) % n;
        grad[static_cast<std::size_t>(j)] =
            std::abs(rho[static_cast<std::size_t>(r)] - rho[static_cast<std::size_t>(l)]);
        gmax = std::max(gmax, grad[static_cast<std::size_t>(j)]);
    }
    InterfaceInfo info;
    info.marked.assign(static_cast<std::size_t>(n), 0);
    if (gmax <= 0.0) return info;
    int marked = 0;
    for (int j = 0; j < n; ++j) {
        if (grad[static_cast<std::size_t>(j)] > 0.1 * gmax) {
            info.marked[static_cast<std::size_t>(j)] = 1;
            ++marked;
        }
    }
    int runs = 0;
    int current = 0;
    for (int j = 0; j < n; ++j) {
        if (info.marked[static_cast<std::size_t>(j)]) {
            if (current == 0) ++runs;
            ++current;
        } else {
            current = 0;
        }
    }
    info.width = std::max(1, marked / std::max(1, runs));
    return info;
}

std::optional<Plateaus> cluster_plateaus(std::span<const double> rho, std::span<const double> m,
                                         const std::vector<int>& mask, double span) {
    std::vector<double> vals;
    std::vector<double> mvals;
    for (std::size_t j = 0; j < rho.size(); ++j) {
        if (!mask[j]) {
            vals.push_back(rho[j]);
            mvals.push_back(m.empty() ? 0.0 : m[j]);
        }
    }
    if (vals.size() < 8) return std::nullopt;
    double klo = vals[0], khi = vals[0];
    for (double v : vals) {
        klo = std::min(klo, v);
        khi = std::max(khi, v);
    }
    // both plateaus must survive the masking
    if (khi - klo < 0.6 * span) return std::nullopt;
    double c0 = klo, c1 = khi;
    for (int it = 0; it < 64; ++it) {
        double s0 = 0.0, s1 = 0.0;
        int n0 = 0, n1 = 0;
        for (double v : vals) {
            if (std::abs(v - c0) <= std::abs(v - c1)) {
                s0 += v;
                ++n0;
            } else {
                s1 += v;
                ++n1;
            }
        }
        if (n0 == 0 || n1 == 0) return std::nullopt;
        const double nc0 = s0 / n0, nc1 = s1 / n1;
        const bool done = std::abs(nc0 - c0) + std::abs(nc1 - c1) < 1e-12;
        c0 = nc0;
        c1 = nc1;
        if (done) break;
    }
    Plateaus p;
    p.low = std::min(c0, c1);
    p.high = std::max(c0, c1);
    if (p.high - p.low < 0.02) return std::nullopt;
    double mlo = 0.0, mhi = 0.0;
    int nlo = 0, nhi = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (std::abs(vals[i] - p.low) <= std::abs(vals[i] - p.high)) {
            mlo += std::abs(mvals[i]);
            ++nlo;
        } else {
            mhi += std::abs(mvals[i]);
            ++nhi;
        }
    }
    p.m_low = nlo ? mlo / nlo : 0.0;
    p.m_high = nhi ? mhi / nhi : 0.0;
    return p;
}

} // namespace

std::optional<Plateaus> extract_plateaus(std::span<const double> rho, std::span<const double> m) {
    const int n = static_cast<int>(rho.size());
    double lo = rho[0], hi = rho[0];
    for (double v : rho) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    if (span < 0.02) return std::nullopt; // effectively uniform
    const auto info = interface_cells(rho);
    auto dilate = [&](int rad) {
        std::vector<int> out(info.marked);
        for (int j = 0; j < n; ++j) {
            if (!info.marked[static_cast<std::size_t>(j)]) continue;
            for (int d = -rad; d <= rad; ++d)
                out[static_cast<std::size_t>(((j + d) % n + n) % n)] = 1;
        }
        return out;
    };
    // start from the 5-interface-width margin; when a thin phase would be
    // swallowed entirely, shrink the margin until both plateaus survive
    for (int radius = 5 * info.width; radius >= 0; radius = radius > 0 ? radius / 2 : -1) {
        if (auto p = cluster_plateaus(rho, m, dilate(radius), span)) return p;
    }
    return std::nullopt;
}

namespace {

/// Circular cross-correlation displacement of b relative to a, in cells,
/// refined by a parabolic fit around the integer peak.
double displacement_cells(std::span<const double> a, std::span<const double> b) {
    const int n = static_cast<int>(a.size());
    double best = -std::numeric_limits<double>::infinity();
    int best_s = 0;
    std::vector<double> corr(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            acc += a[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>((j + s) % n)];
        corr[static_cast<std::size_t>(s)] = acc;
        if (acc > best) {
            best = acc;
            best_s = s;
        }
    }
    const double cm = corr[static_cast<std::size_t>((best_s + n - 1) % n)];
    const double cp = corr[static_cast<std::size_t>((best_s + 1) % n)];
    const double denom = cm - 2.0 * best + cp;
    double frac = 0.0;
    if (std::abs(denom) > 1e-30) frac = 0.5 * (cm - cp) / denom;
    double s = best_s + frac;
    if (s > n / 2.0) s -= n;
    // b(j + s) ~ a(j): the pattern moved by -s cells from a to b
    return -s;
}

hydro::PdeConfig binodal_pde_config(BinodalModel model, const BinodalOptions& opts) {
    hydro::PdeConfig pde;
    if (model == BinodalModel::MipsPeclet) {
        pde.system = hydro::System::Mips;
        pde.D = 1.0;
        pde.lambda = opts.peclet;
        pde.gamma = 1.0;
    } else {
        pde.system = hydro::System::Flock;
        pde.D = opts.D;
        pde.lambda = opts.lambda;
        pde.beta = opts.beta;
    }
    pde.scheme = hydro::Scheme::Central;
    pde.cfl_safety = opts.cfl_safety;
    return pde;
}

} // namespace

BinodalResult binodal_from_pde(BinodalModel model, double rho_bar, const BinodalOptions& opts) {
    BinodalResult out;
    out.rho_bar = rho_bar;
    hydro::HydroState state =
        hydro::uniform_state(model == BinodalModel::MipsPeclet ? hydro::System::Mips
                                                               : hydro::System::Flock,
                             opts.grid, rho_bar, 0.0, opts.domain_length);
    RngStream rng(opts.seed);
    const int n = opts.grid;
    // seeded noise with the spatial mean removed so int(rho) = rho_bar exactly
    std::vector<double> noise(static_cast<std::size_t>(n));
    double mean = 0.0;
    for (auto& v : noise) {
        v = 2.0 * rng.uniform() - 1.0;
        mean += v;
    }
    mean /= n;
    for (int j = 0; j < n; ++j) {
        const double eps = opts.noise_amp * (noise[static_cast<std::size_t>(j)] - mean);
        state.rho[static_cast<std::size_t>(j)] = rho_bar * (1.0 + eps);
        state.m[static_cast<std::size_t>(j)] =
            rho_bar * opts.noise_amp * (2.0 * rng.uniform() - 1.0);
        if (model == BinodalModel::MipsPeclet) {
            auto& rho = state.rho[static_cast<std::size_t>(j)];
            rho = std::min(rho, 1.0 - 1e-6);
            auto& m = state.m[static_cast<std::size_t>(j)];
            m = std::clamp(m, -rho, rho);
        }
    }

    const auto pde = binodal_pde_config(model, opts);

    auto field_range = [](const std::vector<double>& f) {
        double lo = f[0], hi = f[0];
        for (double v : f) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi - lo;
    };
    auto field_absmax = [](const std::vector<double>& f) {
        double a = 0.0;
        for (double v : f) a = std::max(a, std::abs(v));
        return a;
    };
    const double seed_range = field_range(state.rho);
    const double seed_mmax = field_absmax(state.m);

    // Integrate to the time budget; a run counts as uniform only when both
    // seeded perturbations have decayed (growth can be slow near onset, so
    // a small instantaneous range is not evidence of stability).
    std::optional<Plateaus> penultimate;
    BinodalStatus status = BinodalStatus::NotConverged;
    while (state.time < opts.t_max - 1e-9) {
        const double target = std::min(state.time + opts.check_interval, opts.t_max);
        const bool final_window = target >= opts.t_max - opts.check_interval - 1e-9;
        if (final_window) penultimate = extract_plateaus(state.rho, state.m);
        hydro::advance(state, pde, target);
        if (state.time >= opts.t_min && field_range(state.rho) < 0.5 * seed_range &&
            field_absmax(state.m) < 0.6 * seed_mmax) {
            status = BinodalStatus::NoPhaseSeparation;
            break;
        }
    }
    out.time_used = state.time;
    if (status == BinodalStatus::NoPhaseSeparation) {
        out.status = status;
        return out;
    }
    const auto plat = extract_plateaus(state.rho, state.m);
    if (!plat) {
        out.status = BinodalStatus::NoPhaseSeparation;
        return out;
    }
    out.rho_gas = plat->low;
    out.rho_liq = plat->high;
    out.m_gas = plat->m_low;
    out.m_liq = plat->m_high;
    const bool settled = penultimate &&
                         std::abs(plat->low - penultimate->low) < opts.plateau_tol &&
                         std::abs(plat->high - penultimate->high) < opts.plateau_tol;
    out.status = settled ? BinodalStatus::Ok : BinodalStatus::NotConverged;
    if (out.status == BinodalStatus::Ok) {
        // band speed from the displacement over a short window
        const std::vector<double> before = state.rho;
        const double window = 0.25;
        hydro::advance(state, pde, state.time + window);
        const double cells = displacement_cells(before, state.rho);
        out.band_speed = cells * (opts.domain_length / opts.grid) / window;
    }
    return out;
}

std::vector<PhasePoint> phase_diagram_sweep_mips(std::span<const double> rho_values,
                                                 std::span<const double> pe_values, int jobs) {
    const int np = static_cast<int>(rho_values.size() * pe_values.size());
    std::vector<PhasePoint> out(static_cast<std::size_t>(np));
    parallel_for(jobs, np, [&](int idx) {
        const auto i = static_cast<std::size_t>(idx) / pe_values.size();
        const auto j = static_cast<std::size_t>(idx) % pe_values.size();
        PhasePoint& pt = out[static_cast<std::size_t>(idx)];
        pt.rho0 = rho_values[i];
        pt.control = pe_values[j];
        try {
            const auto scan = max_growth_scan([&](double q) {
                return dispersion_mips(pt.rho0, pt.control, q).max_growth();
            });
            pt.max_growth = scan.max_growth;
            pt.q_star = scan.q_star;
            pt.unstable = scan.max_growth > growth_tol;
        } catch (const std::exception& e) {
            pt.note = e.what();
        }
    });
    return out;
}

std::vector<PhasePoint> phase_diagram_sweep_flock(std::span<const double> rho_values,
                                                  std::span<const double> temperatures, double D,
                                                  double lambda, int jobs) {
    const int np = static_cast<int>(rho_values.size() * temperatures.size());
    std::vector<PhasePoint> out(static_cast<std::size_t>(np));
    parallel_for(jobs, np, [&](int idx) {
        const auto i = static_cast<std::size_t>(idx) / temperatures.size();
        const auto j = static_cast<std::size_t>(idx) % temperatures.size();
        PhasePoint& pt = out[static_cast<std::size_t>(idx)];
        pt.rho0 = rho_values[i];
        pt.control = temperatures[j];
        try {
            const double beta = 1.0 / pt.control;
            const auto scan = max_growth_scan([&](double q) {
                return dispersion_flock(pt.rho0, 0.0, beta, q, D, lambda).max_growth();
            });
            pt.max_growth = scan.max_growth;
            pt.q_star = scan.q_star;
            pt.unstable = scan.max_growth > growth_tol;
        } catch (const std::exception& e) {
            pt.note = e.what();
        }
    });
    return out;
}

} // namespace latgas::stability
