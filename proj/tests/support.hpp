// Shared helpers for the unit tests.
#pragma once

#include "neariso/neariso.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace testing {

inline const std::string kData = NEARISO_DATA_DIR;

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = a.size() == b.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline std::vector<double> uniform_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

// 0.5 * sum w (x - mu)^2 + lambda * sum (mu_i - mu_{i+1})_+
inline double neariso_objective(const std::vector<double>& x, const std::vector<double>& w, double lambda,
                                const std::vector<double>& mu) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) v += 0.5 * w[i] * (x[i] - mu[i]) * (x[i] - mu[i]);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) v += lambda * std::max(mu[i] - mu[i + 1], 0.0);
    return v;
}

// Independent reference for the Gaussian problem: projected gradient ascent on
// the box-constrained dual, mu_i = x_i - lambda (xi_i - xi_{i-1}) / w_i.
inline std::vector<double> dual_gradient_fit(const std::vector<double>& x, const std::vector<double>& w, double lambda,
                                             std::size_t iters = 200000) {
    const std::size_t n = x.size();
    std::vector<double> xi(n + 1, 0.0), mu(x);
    if (n < 2 || lambda == 0.0) return mu;
    double wmin = *std::min_element(w.begin(), w.end());
    double step = wmin / (4.0 * lambda * lambda);
    auto primal = [&] {
        for (std::size_t i = 0; i < n; ++i) mu[i] = x[i] - lambda * (xi[i + 1] - xi[i]) / w[i];
    };
    for (std::size_t it = 0; it < iters; ++it) {
        primal();
        for (std::size_t i = 1; i < n; ++i) {
            // d/d xi_i of the dual = lambda (mu_{i-1} - mu_i) in 0-based mu
            double g = lambda * (mu[i - 1] - mu[i]);
            xi[i] = std::clamp(xi[i] + step * g, 0.0, 1.0);
        }
    }
    primal();
    return mu;
}

// Isotonic regression by the max-min formula over weighted block means.
inline std::vector<double> minmax_isotonic(const std::vector<double>& x, const std::vector<double>& w) {
    const std::size_t n = x.size();
    std::vector<double> mu(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = -INFINITY;
        for (std::size_t s = 0; s <= i; ++s) {
            double lo = INFINITY;
            for (std::size_t t = i; t < n; ++t) {
                double sw = 0.0, sx = 0.0;
                for (std::size_t k = s; k <= t; ++k) sw += w[k], sx += w[k] * x[k];
                lo = std::min(lo, sx / sw);
            }
            best = std::max(best, lo);
        }
        mu[i] = best;
    }
    return mu;
}

} // namespace testing
