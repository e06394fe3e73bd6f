// SPDX-License-Identifier: MIT
#include "neariso/oracle.hpp"
#include "neariso/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace neariso {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Oriented {
    std::vector<double> xt; // mean-scale data
    std::vector<double> w;
    double lo = -kInf, hi = kInf;
};

Oriented orient(const ObjectiveSpec& s) {
    WeightedSeries ws = mean_scale_series(s.x, s.w, s.family, s.direction).oriented();
    Oriented o{ws.values, ws.weights};
    if (s.bounds) {
        if (s.bounds->alpha > s.bounds->beta) throw InvalidBounds("bounds need alpha <= beta");
        o.lo = s.bounds->alpha;
        o.hi = s.bounds->beta;
    }
    return o;
}

std::vector<double> flip(std::vector<double> v, Direction d) {
    if (d == Direction::Decreasing) std::reverse(v.begin(), v.end());
    return v;
}

// argmin over [lo, hi] of w(-theta*eta + psi(theta)), for any real eta
double inner_argmin(const Family& f, double eta, double lo, double hi) {
    double t;
    if (in_mean_closure(f, eta)) {
        t = mean_map_inv(f, eta);
    } else {
        bool below = f.kind == Kind::GammaScale ? eta <= 0.0 : eta < 0.0;
        t = below ? -kInf : kInf;
    }
    t = std::min(std::max(t, lo), hi);
    if (f.kind == Kind::GammaScale && t >= 0.0) t = kInf; // open end: unattained
    return t;
}

double separable(const Family& f, const Oriented& o, const std::vector<double>& th) {
    double v = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) v += o.w[i] * (-th[i] * o.xt[i] + psi(f, th[i]));
    return v;
}

double hinge(const std::vector<double>& th) {
    double v = 0.0;
    for (std::size_t i = 0; i + 1 < th.size(); ++i) v += std::max(th[i] - th[i + 1], 0.0);
    return v;
}

} // namespace

double objective_value(const ObjectiveSpec& spec, const std::vector<double>& theta) {
    Oriented o = orient(spec);
    if (theta.size() != o.xt.size()) throw SchemaError("theta length differs from data");
    std::vector<double> th = flip(theta, spec.direction);
    for (double t : th)
        if (!in_natural_domain(spec.family, t)) throw DomainError("theta outside the natural domain");
    return separable(spec.family, o, th) + spec.lambda * hinge(th);
}

OracleResult subgradient_minimize(const ObjectiveSpec& spec, std::size_t iters, double tol) {
    Oriented o = orient(spec);
    const Family& f = spec.family;
    const std::size_t n = o.xt.size();
    double cap = o.hi;
    std::vector<double> th(n);
    for (std::size_t i = 0; i < n; ++i) {
        th[i] = inner_argmin(f, o.xt[i], o.lo, o.hi);
        if (!std::isfinite(th[i])) throw DomainError("oracle needs data away from the support boundary");
    }
    if (f.kind == Kind::GammaScale) {
        // keep iterates strictly inside (-inf, 0): never closer to 0 than the data allow
        double tmax = *std::max_element(th.begin(), th.end());
        cap = std::min(cap, 0.5 * tmax);
    }
    auto value = [&](const std::vector<double>& t) { return separable(f, o, t) + spec.lambda * hinge(t); };
    double tmin = *std::min_element(th.begin(), th.end()), tmax = *std::max_element(th.begin(), th.end());
    const double c = 0.5 * (tmax - tmin) + 1e-3 * (1.0 + std::abs(tmax));

    OracleResult r;
    r.theta = th;
    r.objective = value(th);
    double mark = r.objective;
    const std::size_t window = std::max<std::size_t>(1, iters / 10);
    std::vector<double> g(n);
    for (std::size_t k = 1; k <= iters; ++k) {
        for (std::size_t i = 0; i < n; ++i) g[i] = o.w[i] * (mean_map(f, th[i]) - o.xt[i]);
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (th[i] > th[i + 1]) { // subgradient 0 at ties
                g[i] += spec.lambda;
                g[i + 1] -= spec.lambda;
            }
        double norm = 0.0;
        for (double v : g) norm += v * v;
        norm = std::sqrt(norm);
        r.iterations = k;
        if (norm == 0.0) break;
        double step = c / std::sqrt(static_cast<double>(k)) / norm;
        for (std::size_t i = 0; i < n; ++i) th[i] = std::min(std::max(th[i] - step * g[i], o.lo), cap);
        double v = value(th);
        if (v < r.objective) {
            r.objective = v;
            r.theta = th;
        }
        if (k % window == 0) {
            r.converged = mark - r.objective <= tol * (1.0 + std::abs(r.objective));
            mark = r.objective;
        }
    }
    if (r.iterations < iters) r.converged = true;
    r.theta = flip(std::move(r.theta), spec.direction);
    return r;
}

OracleResult dual_ascent_minimize(const ObjectiveSpec& spec, std::size_t max_sweeps, double tol) {
    Oriented o = orient(spec);
    const Family& f = spec.family;
    const std::size_t n = o.xt.size();
    const double lam = spec.lambda;
    std::vector<double> xi(n + 1, 0.0); // xi[0] = xi[n] = 0 fixed
    std::vector<double> th(n);
    auto eta_of = [&](std::size_t i) { return o.xt[i] - lam * (xi[i + 1] - xi[i]) / o.w[i]; };
    auto recover = [&]() {
        for (std::size_t i = 0; i < n; ++i) th[i] = inner_argmin(f, eta_of(i), o.lo, o.hi);
    };

    OracleResult r;
    for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
        if (lam > 0.0)
            for (std::size_t i = 1; i < n; ++i) {
                double a = o.xt[i - 1] + lam * xi[i - 1] / o.w[i - 1];
                double b = o.xt[i] - lam * xi[i + 1] / o.w[i];
                double v = (a - b) / (lam * (1.0 / o.w[i - 1] + 1.0 / o.w[i]));
                xi[i] = std::min(std::max(v, 0.0), 1.0);
            }
        r.iterations = sweep;
        if (sweep % 16 != 0 && sweep != max_sweeps && lam > 0.0) continue;
        recover();
        bool finite = std::all_of(th.begin(), th.end(), [](double t) { return std::isfinite(t); });
        if (!finite) continue;
        double sep = separable(f, o, th);
        double primal = sep + lam * hinge(th);
        double dual = sep;
        for (std::size_t i = 0; i + 1 < n; ++i) dual += lam * xi[i + 1] * (th[i] - th[i + 1]);
        r.objective = primal;
        r.gap = primal - dual;
        r.theta = th;
        if (r.gap <= tol * (1.0 + std::abs(primal))) {
            r.converged = true;
            break;
        }
    }
    if (r.theta.empty()) throw NonConvergence("dual iterates never produced a finite primal point");
    r.theta = flip(std::move(r.theta), spec.direction);
    return r;
}

} // namespace neariso
