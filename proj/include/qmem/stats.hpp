#pragma once

// Small statistics helpers: regularized incomplete gamma for chi-square
// p-values, sample moments, binomial error bars.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qmem {

namespace detail {

// Regularized lower incomplete gamma P(a, x) by series; upper Q by continued
// fraction (Lentz). Standard double-precision recipes.
inline double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

inline double gamma_p(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_p domain");
    if (x == 0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_contfrac(a, x);
}

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

// Survival function of the chi-square distribution with k degrees of freedom.
inline double chi_squared_sf(double x, double k) {
    if (x <= 0) return 1.0;
    return gamma_q(k / 2.0, x / 2.0);
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    size_t n = 0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
    MeanStderr r;
    r.n = xs.size();
    if (xs.empty()) return r;
    double s = 0;
    for (double x : xs) s += x;
    r.mean = s / double(xs.size());
    if (xs.size() > 1) {
        double v = 0;
        for (double x : xs) v += (x - r.mean) * (x - r.mean);
        r.stderr_ = std::sqrt(v / double(xs.size() - 1) / double(xs.size()));
    }
    return r;
}

inline double binomial_stderr(double p_hat, size_t n) {
    if (n == 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(std::max(p_hat * (1.0 - p_hat), 1.0 / double(n)) / double(n));
}

}  // namespace qmem
