#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "latgas/errors.hpp"
#include "latgas/rng.hpp"

namespace latgas {

/// Product equilibrium family of the stirring / free-walk dynamics:
/// exclusion marginals (rho+, rho-, 1 - rho+ - rho-) or independent
/// Poisson pairs with means (rho+, rho-).
enum class MeasureFamily { ExclusionProduct, PoissonProduct };

struct EquilibriumMeasureSpec {
    MeasureFamily family = MeasureFamily::ExclusionProduct;
    double rho_plus = 0.0;
    double rho_minus = 0.0;
    double beta = 0.0; ///< used by flip-rate local functions

    void validate() const {
        if (rho_plus < 0.0 || rho_minus < 0.0)
            throw Error("EquilibriumMeasureSpec: densities must be >= 0");
        if (family == MeasureFamily::ExclusionProduct && rho_plus + rho_minus > 1.0 + 1e-12)
            throw Error("EquilibriumMeasureSpec: exclusion family needs rho+ + rho- <= 1");
    }
};

/// Site state as seen by local functions: occupation numbers per species
/// (0/1 for exclusion configurations).
struct SiteState {
    std::int64_t plus = 0;
    std::int64_t minus = 0;
};

/// Local function with declared finite support (1D offsets). The evaluator
/// receives the site states aligned with `offsets`. `closed_form_key` names
/// a registered expectation, empty when only Monte Carlo is available.
struct LocalFunction {
    std::string name;
    std::vector<int> offsets;
    std::function<double(std::span<const SiteState>)> eval;
    std::string closed_form_key;
    double param = 0.0;
};

LocalFunction lf_sigma_plus();
LocalFunction lf_sigma_minus();
LocalFunction lf_sigma_total();
/// Active + current of the MIPS model across bond (0,1): sigma+_0 (1 - sigma_1).
LocalFunction lf_mips_active_current_plus();
/// Flip gain of + particles in the MIPS model: gamma (sigma-_0 - sigma+_0).
LocalFunction lf_mips_flip_gain_plus(double gamma);
/// Flip gain of + particles in the zero-range model:
///   h+_0 = n- exp(beta (n+ - n-)) - n+ exp(-beta (n+ - n-)).
LocalFunction lf_zr_flip_gain_plus(double beta);

enum class ExpectationMode { ClosedForm, MonteCarlo };

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
};

/// Registered closed-form expectation; throws UnknownClosedForm when the
/// function/measure pair is not in the registry.
double equilibrium_expectation_closed(const LocalFunction& g, const EquilibriumMeasureSpec& spec);

/// Plain Monte Carlo over product samples of the declared support.
Estimate equilibrium_expectation_mc(const LocalFunction& g, const EquilibriumMeasureSpec& spec,
                                    std::size_t samples, RngStream& rng);

/// Dispatching wrapper; Monte Carlo results come back without the error bar.
double equilibrium_expectation(const LocalFunction& g, const EquilibriumMeasureSpec& spec,
                               ExpectationMode mode, std::size_t mc_samples = 100000,
                               RngStream* rng = nullptr);

/// One product-measure site sample.
SiteState sample_site(const EquilibriumMeasureSpec& spec, RngStream& rng);

} // namespace latgas
