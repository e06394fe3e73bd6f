// SPDX-License-Identifier: MIT
#include "neariso/path.hpp"
#include "neariso/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace neariso {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> reoriented(std::vector<double> v, Direction d) {
    if (d == Direction::Decreasing) std::reverse(v.begin(), v.end());
    return v;
}

// Lambda at which clusters j and j+1 meet, or +inf if they never do from
// the current state. A boundary with s = 0 (ordered) closes only if the left
// cluster gains on the right one; with s = 1 (violating) only if it loses.
// The gap is taken at the current lambda and clamped at zero, so pairs that
// touch (or cross by rounding) merge immediately.
double meet_time(const Knot& k, std::size_t j, double lambda) {
    double dm = k.slope(j) - k.slope(j + 1);
    if (dm == 0.0) return kInf;
    bool ordered = k.s[j + 1] == 0;
    if (ordered != (dm > 0.0)) return kInf;
    double gap = k.level(j + 1, lambda) - k.level(j, lambda);
    gap = ordered ? std::max(gap, 0.0) : std::min(gap, 0.0);
    return lambda + gap / dm;
}

} // namespace

std::vector<double> SolutionPath::knot_lambdas() const {
    std::vector<double> v;
    v.reserve(knots.size());
    for (const Knot& k : knots) v.push_back(k.lambda);
    return v;
}

ClusterPartition SolutionPath::final_partition() const {
    const Knot& k = knots.back();
    const std::size_t n = x.size();
    ClusterPartition p;
    for (std::size_t j = 0; j < k.clusters.size(); ++j) {
        const Cluster& c = k.clusters[j];
        p.blocks.push_back({c.begin, c.end, c.weight, k.level(j, k.lambda)});
    }
    if (series.direction == Direction::Decreasing) {
        std::reverse(p.blocks.begin(), p.blocks.end());
        for (Block& b : p.blocks) b = {n - b.end, n - b.begin, b.weight, b.level};
    }
    return p;
}

SolutionPath solve_path(const WeightedSeries& series) {
    series.validate();
    SolutionPath path;
    path.series = series;
    WeightedSeries o = series.oriented();
    path.x = o.values;
    path.w = o.weights;
    const std::size_t n = path.x.size();

    Knot cur;
    cur.lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) cur.clusters.push_back({i, i + 1, path.w[i], path.w[i] * path.x[i]});
    cur.s.assign(n + 1, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) cur.s[i + 1] = path.x[i] > path.x[i + 1] ? 1 : 0;

    double lambda = 0.0;
    bool have_knot = false; // cur already holds merges at `lambda`
    for (;;) {
        const std::size_t K = cur.clusters.size();
        double best = kInf;
        for (std::size_t j = 0; j + 1 < K; ++j) {
            best = std::min(best, meet_time(cur, j, lambda));
        }
        if (!std::isfinite(best)) break;
        // smallest index among (near) simultaneous events
        std::size_t jb = K;
        double tb = kInf;
        for (std::size_t j = 0; j + 1 < K; ++j) {
            double t = meet_time(cur, j, lambda);
            if (t <= best + 1e-12 * (1.0 + best)) {
                jb = j;
                tb = t;
                break;
            }
        }
        double t = std::max(tb, lambda);
        bool same = t <= lambda + 1e-12 * (1.0 + lambda);
        if (!same) {
            if (have_knot || path.knots.empty()) path.knots.push_back(cur);
            lambda = t;
            have_knot = false;
        }
        Cluster& a = cur.clusters[jb];
        const Cluster& b = cur.clusters[jb + 1];
        a.end = b.end;
        a.weight += b.weight;
        a.sum += b.sum;
        cur.clusters.erase(cur.clusters.begin() + static_cast<std::ptrdiff_t>(jb) + 1);
        cur.s.erase(cur.s.begin() + static_cast<std::ptrdiff_t>(jb) + 1);
        cur.lambda = lambda;
        ++cur.merges;
        if (!same) cur.merges = 1;
        have_knot = true;
    }
    if (path.knots.empty() || have_knot) path.knots.push_back(cur);

    const Knot& last = path.knots.back();
    for (std::size_t j = 0; j + 1 < last.clusters.size(); ++j)
        if (double a = last.level(j, last.lambda), b = last.level(j + 1, last.lambda);
            a - b > 1e-12 * (std::abs(a) + std::abs(b)) + 1e-300)
            throw NonConvergence("path terminated on a non-isotonic state");
    return path;
}

PathFit fit_at(const SolutionPath& path, double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
    const std::size_t n = path.x.size();
    PathFit f;
    f.lambda = lambda;
    auto it = std::upper_bound(path.knots.begin(), path.knots.end(), lambda,
                               [](double l, const Knot& k) { return l < k.lambda; });
    const Knot& k = *std::prev(it);
    f.clusters = k.clusters.size();
    if (lambda == 0.0) {
        f.eta = path.x; // exact data, no reassociation
    } else {
        double l = std::min(lambda, path.terminal_lambda());
        f.eta.assign(n, 0.0);
        for (std::size_t j = 0; j < k.clusters.size(); ++j) {
            double y = k.level(j, l);
            for (std::size_t i = k.clusters[j].begin; i < k.clusters[j].end; ++i) f.eta[i] = y;
        }
    }
    f.eta = reoriented(std::move(f.eta), path.series.direction);
    f.pieces = count_runs(f.eta);
    return f;
}

WeightedSeries mean_scale_series(const std::vector<double>& x, const std::vector<double>& w, const Family& f,
                                 Direction d) {
    if (x.empty()) throw EmptyInput("empty series");
    if (x.size() != w.size()) throw SchemaError("values and weights differ in length");
    WeightedSeries s;
    s.direction = d;
    s.weights = w;
    s.values.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        check_support(f, x[i], w[i]);
        s.values.push_back(to_mean_scale(f, x[i], w[i]));
    }
    return s;
}

SolutionPath solve_path(const std::vector<double>& x, const std::vector<double>& w, const Family& f, Direction d) {
    return solve_path(mean_scale_series(x, w, f, d));
}

Fit to_fit(const Family& fam, const PathFit& pf) {
    Fit f;
    f.family = fam;
    f.lambda = pf.lambda;
    f.eta = pf.eta;
    for (double& e : f.eta) e = snap_mean(fam, e);
    f.clusters = pf.clusters;
    f.pieces = pf.pieces;
    f.theta.reserve(pf.eta.size());
    for (double e : pf.eta) f.theta.push_back(mean_map_inv(fam, e));
    return f;
}

Fit fit_generalized(const SolutionPath& path, const Family& f, double lambda) {
    return to_fit(f, fit_at(path, lambda));
}

Fit fit_generalized(const std::vector<double>& x, const std::vector<double>& w, const Family& f, double lambda,
                    Direction d) {
    return fit_generalized(solve_path(x, w, f, d), f, lambda);
}

Fit clip_bounds(const Fit& fit, double alpha, double beta) {
    if (std::isnan(alpha) || std::isnan(beta) || alpha > beta) throw InvalidBounds("bounds need alpha <= beta");
    NaturalDomain dom = natural_domain(fit.family);
    if (alpha > dom.upper || beta < dom.lower) throw InvalidBounds("bounds outside the natural domain");
    Fit r = fit;
    r.bounds = Bounds{alpha, beta};
    for (std::size_t i = 0; i < r.theta.size(); ++i) {
        double t = std::min(std::max(fit.theta[i], alpha), beta);
        if (t == fit.theta[i]) continue;
        r.theta[i] = t;
        if (in_natural_domain(fit.family, t)) r.eta[i] = mean_map(fit.family, t);
        else if (fit.family.kind == Kind::GammaScale && t >= 0.0) r.eta[i] = kInf; // beta at the open end
    }
    r.pieces = count_runs(r.eta);
    return r;
}

KktCertificate kkt_check(const WeightedSeries& series, double lambda, const std::vector<double>& eta_hat) {
    series.validate();
    if (eta_hat.size() != series.size()) throw SchemaError("fitted vector length differs from series");
    WeightedSeries o = series.oriented();
    std::vector<double> eta = reoriented(eta_hat, series.direction);
    const std::size_t n = o.size();
    KktCertificate c;
    double scale = 0.0;
    for (double v : o.values) scale = std::max(scale, std::abs(v));
    c.tolerance = 1e-8 * (1.0 + scale);
    c.xi.assign(n + 1, 0.0);
    if (lambda == 0.0) {
        for (std::size_t i = 0; i < n; ++i)
            c.max_violation = std::max(c.max_violation, std::abs(eta[i] - o.values[i]));
        c.valid = c.max_violation <= c.tolerance;
        return c;
    }
    if (!(lambda > 0.0)) throw DomainError("lambda must be nonnegative");
    double viol = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        c.xi[i] = c.xi[i - 1] + o.weights[i - 1] * (o.values[i - 1] - eta[i - 1]) / lambda;
        if (!std::isfinite(c.xi[i])) viol = kInf;
    }
    viol = std::max(viol, std::abs(c.xi[n]));
    for (std::size_t i = 1; i < n; ++i) {
        double xi = c.xi[i];
        viol = std::max({viol, -xi, xi - 1.0});
        double a = eta[i - 1], b = eta[i];
        if (a > b + c.tolerance) viol = std::max(viol, std::abs(xi - 1.0));
        if (a < b - c.tolerance) viol = std::max(viol, std::abs(xi));
    }
    c.max_violation = viol;
    c.valid = viol <= c.tolerance;
    return c;
}

} // namespace neariso
