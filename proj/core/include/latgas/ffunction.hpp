#pragma once

#include <cmath>

namespace latgas {

/// Alignment reaction function of the zero-range flocking hydrodynamics:
///   F(rho, m) = (m cosh[m sinh b] - rho sinh[m sinh b]) exp(-b + rho cosh b - rho).
/// Evaluated in log scale for large |m sinh b| so the value degrades to
/// +-inf only when the true value overflows the double range.
inline double evaluate_F(double rho, double m, double beta) {
    const double s = std::sinh(beta);
    const double x = m * s;
    const double expo = -beta + rho * std::cosh(beta) - rho;
    if (std::abs(x) < 30.0)
        return (m * std::cosh(x) - rho * std::sinh(x)) * std::exp(expo);
    // F = cosh(x) e^expo (m - rho tanh x); log cosh(x) = |x| - log 2 + log1p(e^{-2|x|})
    const double root = m - rho * std::tanh(x);
    const double logcosh = std::abs(x) - std::log(2.0) + std::log1p(std::exp(-2.0 * std::abs(x)));
    const double mag = std::exp(expo + logcosh);
    return mag * root;
}

/// dF/dm at fixed rho.
inline double dF_dm(double rho, double m, double beta) {
    const double s = std::sinh(beta);
    const double x = m * s;
    const double expo = -beta + rho * std::cosh(beta) - rho;
    if (std::abs(x) < 30.0)
        return (std::cosh(x) + m * s * std::sinh(x) - rho * s * std::cosh(x)) * std::exp(expo);
    const double logcosh = std::abs(x) - std::log(2.0) + std::log1p(std::exp(-2.0 * std::abs(x)));
    const double mag = std::exp(expo + logcosh);
    return mag * (1.0 + m * s * std::tanh(x) - rho * s);
}

/// dF/drho at fixed m.
inline double dF_drho(double rho, double m, double beta) {
    const double s = std::sinh(beta);
    const double x = m * s;
    const double expo = -beta + rho * std::cosh(beta) - rho;
    const double a = std::cosh(beta) - 1.0;
    if (std::abs(x) < 30.0)
        return (-std::sinh(x) + a * (m * std::cosh(x) - rho * std::sinh(x))) * std::exp(expo);
    const double logcosh = std::abs(x) - std::log(2.0) + std::log1p(std::exp(-2.0 * std::abs(x)));
    const double mag = std::exp(expo + logcosh);
    return mag * (-std::tanh(x) + a * (m - rho * std::tanh(x)));
}

} // namespace latgas
