#include "latgas/equilibrium.hpp"

#include <cmath>

#include "latgas/ffunction.hpp"

namespace latgas {

LocalFunction lf_sigma_plus() {
    return {"sigma_plus", {0},
            [](std::span<const SiteState> s) { return static_cast<double>(s[0].plus); },
            "sigma_plus", 0.0};
}

LocalFunction lf_sigma_minus() {
    return {"sigma_minus", {0},
            [](std::span<const SiteState> s) { return static_cast<double>(s[0].minus); },
            "sigma_minus", 0.0};
}

LocalFunction lf_sigma_total() {
    return {"sigma_total", {0},
            [](std::span<const SiteState> s) {
                return static_cast<double>(s[0].plus + s[0].minus);
            },
            "sigma_total", 0.0};
}

LocalFunction lf_mips_active_current_plus() {
    return {"mips_active_current_plus", {0, 1},
            [](std::span<const SiteState> s) {
                return static_cast<double>(s[0].plus) *
                       (1.0 - static_cast<double>(s[1].plus + s[1].minus));
            },
            "mips_active_current_plus", 0.0};
}

LocalFunction lf_mips_flip_gain_plus(double gamma) {
    return {"mips_flip_gain_plus", {0},
            [gamma](std::span<const SiteState> s) {
                return gamma * static_cast<double>(s[0].minus - s[0].plus);
            },
            "mips_flip_gain_plus", gamma};
}

LocalFunction lf_zr_flip_gain_plus(double beta) {
    return {"zr_flip_gain_plus", {0},
            [beta](std::span<const SiteState> s) {
                const auto imb = s[0].plus - s[0].minus;
                return static_cast<double>(s[0].minus) * std::exp(beta * static_cast<double>(imb)) -
                       static_cast<double>(s[0].plus) * std::exp(-beta * static_cast<double>(imb));
            },
            "zr_flip_gain_plus", beta};
}

double equilibrium_expectation_closed(const LocalFunction& g,
                                      const EquilibriumMeasureSpec& spec) {
    spec.validate();
    const double rp = spec.rho_plus;
    const double rm = spec.rho_minus;
    const bool exclusion = spec.family == MeasureFamily::ExclusionProduct;
    const auto& key = g.closed_form_key;
    if (key == "sigma_plus") return rp;
    if (key == "sigma_minus") return rm;
    if (key == "sigma_total") return rp + rm;
    if (key == "mips_active_current_plus") {
        if (!exclusion)
            throw UnknownClosedForm("mips_active_current_plus needs the exclusion family");
        return rp * (1.0 - rp - rm); // disjoint-site product factorization
    }
    if (key == "mips_flip_gain_plus") return g.param * (rm - rp);
    if (key == "zr_flip_gain_plus") {
        if (exclusion) throw UnknownClosedForm("zr_flip_gain_plus needs the Poisson family");
        // E_nu(h+_0) = -F(rho, m): direct Poisson moment computation; the
        // magnetization drift of the flocking hydrodynamics is 2 E_nu(h+_0).
        return -evaluate_F(rp + rm, rp - rm, g.param);
    }
    throw UnknownClosedForm("no closed form registered for '" + g.name + "'");
}

SiteState sample_site(const EquilibriumMeasureSpec& spec, RngStream& rng) {
    if (spec.family == MeasureFamily::ExclusionProduct) {
        const double u = rng.uniform();
        if (u < spec.rho_plus) return {1, 0};
        if (u < spec.rho_plus + spec.rho_minus) return {0, 1};
        return {0, 0};
    }
    return {static_cast<std::int64_t>(rng.poisson(spec.rho_plus)),
            static_cast<std::int64_t>(rng.poisson(spec.rho_minus))};
}

Estimate equilibrium_expectation_mc(const LocalFunction& g, const EquilibriumMeasureSpec& spec,
                                    std::size_t samples, RngStream& rng) {
    spec.validate();
    if (samples == 0) throw Error("equilibrium_expectation_mc: need samples > 0");
    std::vector<SiteState> window(g.offsets.size());
    double sum = 0.0;
    double sum2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        for (auto& w : window) w = sample_site(spec, rng);
        const double v = g.eval(window);
        sum += v;
        sum2 += v * v;
    }
    Estimate e;
    e.samples = samples;
    e.value = sum / static_cast<double>(samples);
    const double var = sum2 / static_cast<double>(samples) - e.value * e.value;
    e.stderr_ = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
    return e;
}

double equilibrium_expectation(const LocalFunction& g, const EquilibriumMeasureSpec& spec,
                               ExpectationMode mode, std::size_t mc_samples, RngStream* rng) {
    if (mode == ExpectationMode::ClosedForm) return equilibrium_expectation_closed(g, spec);
    if (!rng) throw Error("equilibrium_expectation: Monte Carlo mode needs an RngStream");
    return equilibrium_expectation_mc(g, spec, mc_samples, *rng).value;
}

} // namespace latgas
