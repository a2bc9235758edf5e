#pragma once

// Deterministic least-squares fits on linearizing transforms, with bootstrap
// confidence intervals from a fixed sub-seed.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmem/rng.hpp"

namespace qmem {

// Solve the normal equations X^T X b = X^T y for a small design matrix.
inline std::vector<double> linear_least_squares(const std::vector<std::vector<double>>& X,
                                                const std::vector<double>& y) {
    size_t n = X.size();
    if (n == 0 || n < X[0].size()) throw std::invalid_argument("least squares: too few points");
    size_t p = X[0].size();
    std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
    for (size_t i = 0; i < n; ++i)
        for (size_t r = 0; r < p; ++r) {
            for (size_t c = 0; c < p; ++c) a[r][c] += X[i][r] * X[i][c];
            a[r][p] += X[i][r] * y[i];
        }
    // Gaussian elimination with partial pivoting (deterministic).
    for (size_t col = 0; col < p; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < p; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12) throw std::runtime_error("least squares: rank-deficient system");
        std::swap(a[col], a[piv]);
        for (size_t r = 0; r < p; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (size_t c = col; c <= p; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> b(p);
    for (size_t r = 0; r < p; ++r) b[r] = a[r][p] / a[r][r];
    return b;
}

struct FitResult {
    std::string model;
    std::vector<double> params;
    double residual_norm = 0.0;
    std::vector<std::pair<double, double>> ci;  // bootstrap percentile intervals

    double param(size_t i) const { return params.at(i); }
};

namespace detail {

inline std::vector<double> fit_params(const std::string& model, const std::vector<double>& xs,
                                      const std::vector<double>& ys) {
    size_t n = xs.size();
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    if (model == "linear") {
        // y = b x + a -> params {b, a}
        for (size_t i = 0; i < n; ++i) X.push_back({xs[i], 1.0});
        y = ys;
        return linear_least_squares(X, y);
    }
    if (model == "arrhenius") {
        // y = C e^{eps x} -> params {eps, C}
        for (size_t i = 0; i < n; ++i) {
            if (ys[i] <= 0) throw std::invalid_argument("arrhenius fit needs positive values");
            X.push_back({xs[i], 1.0});
            y.push_back(std::log(ys[i]));
        }
        auto b = linear_least_squares(X, y);
        return {b[0], std::exp(b[1])};
    }
    if (model == "power-law-in-L") {
        // y = C x^e -> params {e, C}
        for (size_t i = 0; i < n; ++i) {
            if (ys[i] <= 0 || xs[i] <= 0) throw std::invalid_argument("power-law fit needs positive values");
            X.push_back({std::log(xs[i]), 1.0});
            y.push_back(std::log(ys[i]));
        }
        auto b = linear_least_squares(X, y);
        return {b[0], std::exp(b[1])};
    }
    if (model == "psc-quadratic") {
        // ln y = a x^2 + b x + c -> params {a, b, c}
        for (size_t i = 0; i < n; ++i) {
            if (ys[i] <= 0) throw std::invalid_argument("psc fit needs positive values");
            X.push_back({xs[i] * xs[i], xs[i], 1.0});
            y.push_back(std::log(ys[i]));
        }
        return linear_least_squares(X, y);
    }
    throw std::invalid_argument("unknown fit model: " + model);
}

inline double fit_eval(const std::string& model, const std::vector<double>& p, double x) {
    if (model == "linear") return p[0] * x + p[1];
    if (model == "arrhenius") return p[1] * std::exp(p[0] * x);
    if (model == "power-law-in-L") return p[1] * std::pow(x, p[0]);
    if (model == "psc-quadratic") return std::exp(p[0] * x * x + p[1] * x + p[2]);
    throw std::invalid_argument("unknown fit model: " + model);
}

}  // namespace detail

inline FitResult fit(const std::string& model, const std::vector<double>& xs, const std::vector<double>& ys,
                     uint64_t bootstrap_seed = 17, int bootstrap_rounds = 200) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit: size mismatch");
    FitResult r;
    r.model = model;
    r.params = detail::fit_params(model, xs, ys);
    for (size_t i = 0; i < xs.size(); ++i) {
        double d = ys[i] - detail::fit_eval(model, r.params, xs[i]);
        r.residual_norm += d * d;
    }
    r.residual_norm = std::sqrt(r.residual_norm);

    if (bootstrap_rounds > 0 && xs.size() >= r.params.size() + 1) {
        std::vector<std::vector<double>> samples(r.params.size());
        Rng rng(bootstrap_seed);
        for (int b = 0; b < bootstrap_rounds; ++b) {
            std::vector<double> bx(xs.size()), by(xs.size());
            for (size_t i = 0; i < xs.size(); ++i) {
                size_t j = size_t(rng.below(xs.size()));
                bx[i] = xs[j];
                by[i] = ys[j];
            }
            try {
                auto p = detail::fit_params(model, bx, by);
                for (size_t k = 0; k < p.size(); ++k) samples[k].push_back(p[k]);
            } catch (const std::exception&) {
                // degenerate resample; skip
            }
        }
        for (auto& v : samples) {
            if (v.size() < 20) {
                r.ci.emplace_back(std::nan(""), std::nan(""));
                continue;
            }
            std::sort(v.begin(), v.end());
            size_t lo = size_t(0.025 * double(v.size()));
            size_t hi = size_t(0.975 * double(v.size()));
            if (hi >= v.size()) hi = v.size() - 1;
            r.ci.emplace_back(v[lo], v[hi]);
        }
    }
    return r;
}

}  // namespace qmem
