#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace teststat {

inline double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance(std::span<const double> v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

inline double stderr_of_mean(std::span<const double> v) {
    return std::sqrt(variance(v) / static_cast<double>(v.size()));
}

/// 99th percentile of chi-square, df 1..10.
inline double chi2_crit99(int df) {
    constexpr double table[] = {6.635, 9.210, 11.345, 13.277, 15.086,
                                16.812, 18.475, 20.090, 21.666, 23.209};
    return table[df - 1];
}

/// Least-squares slope of y against x.
inline double slope(std::span<const double> x, std::span<const double> y) {
    const double mx = mean(x);
    const double my = mean(y);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

/// Sarle's bimodality coefficient: (skew^2 + 1) / (kurtosis + small-sample term).
/// Values above 5/9 indicate bimodality.
inline double bimodality_coefficient(std::span<const double> v) {
    const auto n = static_cast<double>(v.size());
    const double m = mean(v);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2);
    const double corr = 3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
    return (skew * skew + 1.0) / (kurt - 3.0 + corr);
}

} // namespace teststat
