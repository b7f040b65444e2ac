#include "latgas/dynkin.hpp"

#include <cmath>
#include <vector>

#include "latgas/parallel.hpp"

namespace latgas {
namespace {

constexpr std::uint64_t full_recompute_interval = 1u << 16;

/// Incremental accumulator for LX and the quadratic-variation rate. Per-site
/// contributions are recomputed locally around every applied event; both
/// running sums are refreshed by a full scan periodically to stop float
/// drift from accumulating over ~1e8 events.
class DynkinObserver final : public EventObserver {
public:
    template <class ConfigT>
    DynkinObserver(const ConfigT& cfg, const ModelSpec& spec,
                   const std::function<double(double, double)>& H)
        : kind_(spec.kind), lat_(cfg.lattice), spec_(spec) {
        const int sites = lat_.sites();
        scale_ = 1.0;
        for (int d = 0; d < lat_.dimension(); ++d) scale_ /= lat_.side();
        h_.resize(static_cast<std::size_t>(sites));
        for (int s = 0; s < sites; ++s)
            h_[static_cast<std::size_t>(s)] =
                H(lat_.unit_coord(s, 0), lat_.dimension() == 2 ? lat_.unit_coord(s, 1) : 0.0);
        bind(cfg);
        walk_ = spec.D * static_cast<double>(spec.side) * spec.side;
        hop_ = spec.lambda * spec.side;
        full_recompute();
        initial_ = observable();
    }

    void advance(double dt) override {
        drift_integral_ += lx_ * dt;
        qv_integral_ += qv_rate_ * dt;
    }

    void before_event(const AppliedEvent& ev) override {
        gather_affected(ev);
        for (int i = 0; i < n_affected_; ++i) {
            lx_ -= site_drift(affected_[static_cast<std::size_t>(i)]);
            qv_rate_ -= site_qv(affected_[static_cast<std::size_t>(i)]);
        }
    }

    void after_event(const AppliedEvent& ev) override {
        for (int i = 0; i < n_affected_; ++i) {
            lx_ += site_drift(affected_[static_cast<std::size_t>(i)]);
            qv_rate_ += site_qv(affected_[static_cast<std::size_t>(i)]);
        }
        (void)ev;
        if (++events_since_refresh_ >= full_recompute_interval) {
            events_since_refresh_ = 0;
            full_recompute();
        }
    }

    [[nodiscard]] MartingaleSample finish() const {
        MartingaleSample s;
        s.initial = initial_;
        s.final_value = observable();
        s.drift_integral = drift_integral_;
        s.martingale = s.final_value - s.initial - s.drift_integral;
        s.quadratic_variation = qv_integral_;
        return s;
    }

private:
    void bind(const ExclusionConfig& cfg) { ex_state_ = cfg.state.data(); }
    void bind(const ZeroRangeConfig& cfg) {
        zr_plus_ = cfg.n_plus.data();
        zr_minus_ = cfg.n_minus.data();
    }

    [[nodiscard]] double sigma_plus(int s) const {
        if (kind_ == ModelKind::ZrFlock)
            return static_cast<double>(zr_plus_[static_cast<std::size_t>(s)]);
        return ex_state_[static_cast<std::size_t>(s)] == 1 ? 1.0 : 0.0;
    }
    [[nodiscard]] double sigma_minus(int s) const {
        if (kind_ == ModelKind::ZrFlock)
            return static_cast<double>(zr_minus_[static_cast<std::size_t>(s)]);
        return ex_state_[static_cast<std::size_t>(s)] == -1 ? 1.0 : 0.0;
    }
    [[nodiscard]] double sigma_total(int s) const {
        if (kind_ == ModelKind::ZrFlock)
            return static_cast<double>(zr_plus_[static_cast<std::size_t>(s)]) +
                   static_cast<double>(zr_minus_[static_cast<std::size_t>(s)]);
        return ex_state_[static_cast<std::size_t>(s)] != 0 ? 1.0 : 0.0;
    }

    [[nodiscard]] double observable() const {
        double x = 0.0;
        for (int s = 0; s < lat_.sites(); ++s) x += h_[static_cast<std::size_t>(s)] * sigma_plus(s);
        return x * scale_;
    }

    [[nodiscard]] bool bond_owned(int site, int axis) const {
        // matches the canonical (deduplicated) bond enumeration of Lattice::edges()
        if (lat_.side() != 2) return true;
        return lat_.coords(site)[static_cast<std::size_t>(axis)] == 0;
    }

    [[nodiscard]] double site_drift(int a) const {
        const double ha = h_[static_cast<std::size_t>(a)];
        double t = 0.0;
        switch (kind_) {
            case ModelKind::MipsExclusion: {
                for (int axis = 0; axis < lat_.dimension(); ++axis) {
                    if (!bond_owned(a, axis)) continue;
                    const int b = lat_.neighbor(a, axis, +1);
                    const double dh = h_[static_cast<std::size_t>(b)] - ha;
                    t += walk_ * dh * (sigma_plus(a) - sigma_plus(b));
                }
                const int r = lat_.neighbor(a, 0, +1);
                t += hop_ * sigma_plus(a) * (1.0 - sigma_total(r)) *
                     (h_[static_cast<std::size_t>(r)] - ha);
                t += spec_.gamma * (sigma_minus(a) - sigma_plus(a)) * ha;
                break;
            }
            case ModelKind::Aep: {
                for (int axis = 0; axis < lat_.dimension(); ++axis) {
                    if (!bond_owned(a, axis)) continue;
                    const int b = lat_.neighbor(a, axis, +1);
                    const double dh = h_[static_cast<std::size_t>(b)] - ha;
                    t += walk_ * dh *
                         (sigma_plus(a) * (1.0 - sigma_total(b)) -
                          sigma_plus(b) * (1.0 - sigma_total(a)));
                }
                const int r = lat_.neighbor(a, 0, +1);
                t += hop_ * sigma_plus(a) * (1.0 - sigma_total(r)) *
                     (h_[static_cast<std::size_t>(r)] - ha);
                t += spec_.gamma * (sigma_minus(a) - sigma_plus(a)) * ha;
                break;
            }
            case ModelKind::ZrFlock: {
                const int r = lat_.neighbor(a, 0, +1);
                const int l = lat_.neighbor(a, 0, -1);
                const double np = sigma_plus(a);
                const double nm = sigma_minus(a);
                t += walk_ * np *
                     (h_[static_cast<std::size_t>(r)] + h_[static_cast<std::size_t>(l)] -
                      2.0 * ha);
                t += hop_ * np * (h_[static_cast<std::size_t>(r)] - ha);
                const auto imb = static_cast<std::int64_t>(
                    static_cast<std::int64_t>(zr_plus_[static_cast<std::size_t>(a)]) -
                    static_cast<std::int64_t>(zr_minus_[static_cast<std::size_t>(a)]));
                t += ha * (nm * zr_flip_factor(-1, spec_.beta, imb) -
                           np * zr_flip_factor(+1, spec_.beta, imb));
                break;
            }
        }
        return t * scale_;
    }

    [[nodiscard]] double site_qv(int a) const {
        const double ha = h_[static_cast<std::size_t>(a)];
        const double s2 = scale_ * scale_;
        double q = 0.0;
        switch (kind_) {
            case ModelKind::MipsExclusion: {
                for (int axis = 0; axis < lat_.dimension(); ++axis) {
                    if (!bond_owned(a, axis)) continue;
                    const int b = lat_.neighbor(a, axis, +1);
                    const double dh = h_[static_cast<std::size_t>(b)] - ha;
                    const double dsp = sigma_plus(a) - sigma_plus(b);
                    q += walk_ * dh * dh * dsp * dsp;
                }
                const int r = lat_.neighbor(a, 0, +1);
                const double dhr = h_[static_cast<std::size_t>(r)] - ha;
                q += hop_ * sigma_plus(a) * (1.0 - sigma_total(r)) * dhr * dhr;
                q += spec_.gamma * (sigma_plus(a) + sigma_minus(a)) * ha * ha;
                break;
            }
            case ModelKind::Aep: {
                for (int axis = 0; axis < lat_.dimension(); ++axis) {
                    if (!bond_owned(a, axis)) continue;
                    const int b = lat_.neighbor(a, axis, +1);
                    const double dh = h_[static_cast<std::size_t>(b)] - ha;
                    q += walk_ * dh * dh *
                         (sigma_plus(a) * (1.0 - sigma_total(b)) +
                          sigma_plus(b) * (1.0 - sigma_total(a)));
                }
                const int r = lat_.neighbor(a, 0, +1);
                const double dhr = h_[static_cast<std::size_t>(r)] - ha;
                q += hop_ * sigma_plus(a) * (1.0 - sigma_total(r)) * dhr * dhr;
                q += spec_.gamma * (sigma_plus(a) + sigma_minus(a)) * ha * ha;
                break;
            }
            case ModelKind::ZrFlock: {
                const int r = lat_.neighbor(a, 0, +1);
                const int l = lat_.neighbor(a, 0, -1);
                const double np = sigma_plus(a);
                const double nm = sigma_minus(a);
                const double dhr = h_[static_cast<std::size_t>(r)] - ha;
                const double dhl = h_[static_cast<std::size_t>(l)] - ha;
                q += walk_ * np * (dhr * dhr + dhl * dhl);
                q += hop_ * np * dhr * dhr;
                const auto imb = static_cast<std::int64_t>(
                    static_cast<std::int64_t>(zr_plus_[static_cast<std::size_t>(a)]) -
                    static_cast<std::int64_t>(zr_minus_[static_cast<std::size_t>(a)]));
                q += ha * ha * (nm * zr_flip_factor(-1, spec_.beta, imb) +
                                np * zr_flip_factor(+1, spec_.beta, imb));
                break;
            }
        }
        return q * s2;
    }

    void gather_affected(const AppliedEvent& ev) {
        n_affected_ = 0;
        auto push = [&](int s) {
            for (int i = 0; i < n_affected_; ++i)
                if (affected_[static_cast<std::size_t>(i)] == s) return;
            affected_[static_cast<std::size_t>(n_affected_++)] = s;
        };
        push(ev.site);
        if (ev.to != ev.site) push(ev.to);
        for (int axis = 0; axis < lat_.dimension(); ++axis) {
            push(lat_.neighbor(ev.site, axis, -1));
            if (ev.to != ev.site) push(lat_.neighbor(ev.to, axis, -1));
        }
    }

    void full_recompute() {
        double lx = 0.0;
        double qv = 0.0;
        for (int s = 0; s < lat_.sites(); ++s) {
            lx += site_drift(s);
            qv += site_qv(s);
        }
        lx_ = lx;
        qv_rate_ = qv;
    }

    ModelKind kind_;
    Lattice lat_;
    ModelSpec spec_;
    const std::int8_t* ex_state_ = nullptr;
    const std::uint32_t* zr_plus_ = nullptr;
    const std::uint32_t* zr_minus_ = nullptr;
    std::vector<double> h_;
    double scale_ = 1.0;
    double walk_ = 0.0;
    double hop_ = 0.0;
    double lx_ = 0.0;
    double qv_rate_ = 0.0;
    double drift_integral_ = 0.0;
    double qv_integral_ = 0.0;
    double initial_ = 0.0;
    std::uint64_t events_since_refresh_ = 0;
    std::array<int, 8> affected_{};
    int n_affected_ = 0;
};

} // namespace

MartingaleSample dynkin_trajectory(ExclusionConfig& cfg, const ModelSpec& spec, double T,
                                   const std::function<double(double, double)>& H,
                                   RngStream& rng) {
    DynkinObserver obs(cfg, spec, H);
    simulate(cfg, spec, T, rng, nullptr, nullptr, &obs);
    return obs.finish();
}

MartingaleSample dynkin_trajectory(ZeroRangeConfig& cfg, const ModelSpec& spec, double T,
                                   const std::function<double(double, double)>& H,
                                   RngStream& rng) {
    DynkinObserver obs(cfg, spec, H);
    simulate(cfg, spec, T, rng, nullptr, nullptr, &obs);
    return obs.finish();
}

MartingaleStats martingale_variance_check(const ModelSpec& spec, const SpeciesProfiles& profiles,
                                          const std::function<double(double, double)>& H,
                                          double T, int ensemble, std::uint64_t seed, int jobs) {
    if (ensemble < 50)
        throw Error("martingale_variance_check: ensemble must have at least 50 trajectories");
    const Lattice lat(spec.dimension, spec.side);
    std::vector<MartingaleSample> samples(static_cast<std::size_t>(ensemble));
    parallel_for(jobs, ensemble, [&](int i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        if (spec.kind == ModelKind::ZrFlock) {
            auto cfg = init_zero_range_poisson(profiles, lat, rng);
            samples[static_cast<std::size_t>(i)] = dynkin_trajectory(cfg, spec, T, H, rng);
        } else {
            auto cfg = init_exclusion(profiles, lat, rng);
            samples[static_cast<std::size_t>(i)] = dynkin_trajectory(cfg, spec, T, H, rng);
        }
    });
    double sum2 = 0.0;
    double sum4 = 0.0;
    double qv = 0.0;
    for (const auto& s : samples) {
        const double m2 = s.martingale * s.martingale;
        sum2 += m2;
        sum4 += m2 * m2;
        qv += s.quadratic_variation;
    }
    MartingaleStats st;
    st.ensemble = ensemble;
    st.second_moment = sum2 / ensemble;
    const double var_of_m2 = sum4 / ensemble - st.second_moment * st.second_moment;
    st.stderr_ = std::sqrt(std::max(0.0, var_of_m2) / ensemble);
    st.mean_quadratic_variation = qv / ensemble;
    return st;
}

} // namespace latgas
