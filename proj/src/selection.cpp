// SPDX-License-Identifier: MIT
#include "neariso/selection.hpp"
#include "neariso/errors.hpp"

#include <cmath>
#include <limits>
#include <thread>

namespace neariso {

double log_likelihood(const std::vector<double>& x, const std::vector<double>& w, const Family& f, const Fit& fit) {
    if (x.size() != fit.eta.size() || w.size() != x.size()) throw SchemaError("data and fit differ in length");
    double ll = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) ll += log_density(f, x[i], fit.eta[i], w[i]);
    return ll;
}

double aic(const std::vector<double>& x, const std::vector<double>& w, const Family& f, const Fit& fit) {
    return -2.0 * log_likelihood(x, w, f, fit) + 2.0 * static_cast<double>(fit.pieces);
}

double cp_gaussian(const std::vector<double>& x, double sigma2, const Fit& fit) {
    if (x.size() != fit.eta.size()) throw SchemaError("data and fit differ in length");
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) rss += (fit.eta[i] - x[i]) * (fit.eta[i] - x[i]);
    double n = static_cast<double>(x.size());
    return rss - n * sigma2 + 2.0 * sigma2 * static_cast<double>(fit.pieces);
}

CriterionTrace select_lambda(const std::vector<double>& x, const std::vector<double>& w, const Family& f,
                             const SolutionPath& path, const Criterion& c, std::optional<Bounds> bounds) {
    if (c.kind != CriterionKind::Aic && c.kind != CriterionKind::Cp)
        throw DomainError("select_lambda needs an AIC or Cp criterion");
    if (c.kind == CriterionKind::Cp && !(c.value > 0.0)) throw DomainError("Cp needs a positive sigma^2");
    CriterionTrace tr;
    for (const Knot& k : path.knots) {
        Fit fit = fit_generalized(path, f, k.lambda);
        if (bounds) fit = clip_bounds(fit, bounds->alpha, bounds->beta);
        double v = c.kind == CriterionKind::Aic ? aic(x, w, f, fit) : cp_gaussian(x, c.value, fit);
        tr.entries.push_back({k.lambda, v, fit.pieces});
    }
    for (std::size_t i = 1; i < tr.entries.size(); ++i)
        if (tr.entries[i].value < tr.entries[tr.selected].value) tr.selected = i;
    return tr;
}

double resolve_lambda(const std::vector<double>& x, const std::vector<double>& w, const Family& f,
                      const SolutionPath& path, const Criterion& c, std::optional<Bounds> bounds) {
    switch (c.kind) {
    case CriterionKind::Lambda:
        if (!(c.value >= 0.0)) throw DomainError("lambda must be nonnegative");
        return c.value;
    case CriterionKind::NearestKnot: {
        double best = path.knots.front().lambda;
        for (const Knot& k : path.knots)
            if (std::abs(k.lambda - c.value) < std::abs(best - c.value)) best = k.lambda;
        return best;
    }
    default: return select_lambda(x, w, f, path, c, bounds).selected_lambda();
    }
}

std::mt19937_64 replication_rng(std::uint64_t seed, std::uint64_t r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
    return std::mt19937_64(seq);
}

namespace {

struct RepOut {
    std::vector<double> aic;
    std::vector<double> d2;
};

RepOut one_replication(const BiasStudyConfig& cfg, std::uint64_t r) {
    const Family& f = cfg.family;
    const std::size_t n = cfg.eta_true.size();
    std::mt19937_64 rng = replication_rng(cfg.seed, r);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = sample(f, cfg.eta_true[i], cfg.weights[i], rng);
    // log p(y | eta) = log_base(y) + log_kernel(y, eta) and the kernel is affine
    // in y, so averaging over fresh draws only needs two per-index means.
    std::vector<double> ybar(n, 0.0), hbar(n, 0.0);
    for (std::size_t m = 0; m < cfg.inner; ++m)
        for (std::size_t i = 0; i < n; ++i) {
            double y = sample(f, cfg.eta_true[i], cfg.weights[i], rng);
            ybar[i] += y;
            hbar[i] += log_base(f, y, cfg.weights[i]);
        }
    for (std::size_t i = 0; i < n; ++i) {
        ybar[i] /= static_cast<double>(cfg.inner);
        hbar[i] /= static_cast<double>(cfg.inner);
    }
    SolutionPath path = solve_path(x, cfg.weights, f, cfg.direction);
    RepOut out;
    for (double l : cfg.grid) {
        Fit fit = fit_generalized(path, f, l);
        out.aic.push_back(aic(x, cfg.weights, f, fit));
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) ll += hbar[i] + log_kernel(f, ybar[i], fit.eta[i], cfg.weights[i]);
        out.d2.push_back(-2.0 * ll);
    }
    return out;
}

} // namespace

BiasStudyResult bias_study(const BiasStudyConfig& cfg) {
    if (cfg.replications < 1) throw DomainError("need at least one replication");
    if (cfg.inner < 1) throw DomainError("need at least one inner draw");
    if (cfg.eta_true.size() != cfg.weights.size() || cfg.eta_true.empty())
        throw SchemaError("truth and weights must be nonempty and of equal length");
    if (cfg.grid.empty()) throw DomainError("empty lambda grid");

    std::vector<RepOut> reps(cfg.replications);
    unsigned nt = std::max(1u, cfg.threads);
    auto work = [&](unsigned t) {
        for (std::size_t r = t; r < cfg.replications; r += nt) reps[r] = one_replication(cfg, r);
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    const std::size_t g = cfg.grid.size();
    BiasStudyResult res;
    res.grid = cfg.grid;
    res.replications = cfg.replications;
    res.inner = cfg.inner;
    res.mean_aic.assign(g, 0.0);
    res.mean_2d.assign(g, 0.0);
    res.sd_aic.assign(g, 0.0);
    res.sd_2d.assign(g, 0.0);
    const double R = static_cast<double>(cfg.replications);
    for (const RepOut& o : reps)
        for (std::size_t k = 0; k < g; ++k) {
            res.mean_aic[k] += o.aic[k] / R;
            res.mean_2d[k] += o.d2[k] / R;
        }
    for (const RepOut& o : reps)
        for (std::size_t k = 0; k < g; ++k) {
            res.sd_aic[k] += (o.aic[k] - res.mean_aic[k]) * (o.aic[k] - res.mean_aic[k]);
            res.sd_2d[k] += (o.d2[k] - res.mean_2d[k]) * (o.d2[k] - res.mean_2d[k]);
        }
    for (std::size_t k = 0; k < g; ++k) {
        double dof = std::max(1.0, R - 1.0);
        res.sd_aic[k] = std::sqrt(res.sd_aic[k] / dof);
        res.sd_2d[k] = std::sqrt(res.sd_2d[k] / dof);
    }
    return res;
}

std::vector<double> doubling_grid(int kmax) {
    std::vector<double> g{0.0};
    for (int k = 0; k <= kmax; ++k) g.push_back(std::ldexp(1.0, k));
    return g;
}

std::vector<double> sawtooth(double lo, double hi, std::size_t period, std::size_t n) {
    if (period < 2) throw DomainError("sawtooth period must be at least 2");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i % period) / static_cast<double>(period - 1);
    return v;
}

} // namespace neariso
