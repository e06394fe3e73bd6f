// SPDX-License-Identifier: MIT
#include "neariso/apps.hpp"
#include "neariso/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace neariso {

Periodogram periodogram(const std::vector<double>& x) {
    if (x.size() < 2) throw EmptyInput("periodogram needs at least two samples");
    const std::size_t T = x.size();
    Periodogram pg;
    pg.T = T;
    for (std::size_t j = 1; j <= T / 2; ++j) {
        double re = 0.0, im = 0.0;
        for (std::size_t t = 1; t <= T; ++t) {
            // reduce j*t mod T first so the angle stays small
            double ang = 2.0 * M_PI * static_cast<double>((j * t) % T) / static_cast<double>(T);
            re += x[t - 1] * std::cos(ang);
            im -= x[t - 1] * std::sin(ang);
        }
        pg.freqs.push_back(static_cast<double>(j) / static_cast<double>(T));
        pg.power.push_back((re * re + im * im) / (2.0 * M_PI * static_cast<double>(T)));
    }
    return pg;
}

Periodogram periodogram_from_ordinates(std::vector<double> power, std::size_t T) {
    if (power.size() != T / 2 || power.empty()) throw SchemaError("need floor(T/2) ordinates");
    Periodogram pg;
    pg.T = T;
    pg.power = std::move(power);
    for (std::size_t j = 1; j <= pg.power.size(); ++j)
        pg.freqs.push_back(static_cast<double>(j) / static_cast<double>(T));
    return pg;
}

SpectrumFit spectrum_fit(const Periodogram& pg, const Criterion& c) {
    if (pg.power.empty()) throw EmptyInput("empty periodogram");
    const Family f = Family::gamma(1.0);
    std::vector<double> w(pg.power.size(), 1.0);
    SolutionPath path = solve_path(pg.power, w, f, Direction::Decreasing);
    SpectrumFit out;
    out.freqs = pg.freqs;
    out.lambda = resolve_lambda(pg.power, w, f, path, c);
    out.fit = fit_generalized(path, f, out.lambda);
    out.fitted = out.fit.eta;
    return out;
}

SpectrumFit spectrum_fit(const std::vector<double>& series, const Criterion& c) {
    if (series.size() < 4) throw EmptyInput("spectrum fit needs at least four samples");
    return spectrum_fit(periodogram(series), c);
}

std::vector<Jump> upward_jumps(const std::vector<double>& v) {
    std::vector<Jump> j;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        double a = v[i], b = v[i + 1];
        if (b > a + 1e-12 * std::max(std::abs(a), std::abs(b))) j.push_back({i, b - a});
    }
    return j;
}

RddResult rdd_fit(const std::vector<double>& counts, const std::vector<double>& exposure, const Criterion& c) {
    const Family f = Family::poisson();
    SolutionPath path = solve_path(counts, exposure, f, Direction::Decreasing);
    RddResult r;
    r.lambda = resolve_lambda(counts, exposure, f, path, c);
    r.fit = fit_generalized(path, f, r.lambda);
    r.jumps = upward_jumps(r.fit.eta);
    return r;
}

BlockResiduals block_residuals(const std::vector<double>& r, std::size_t d, double gamma2) {
    if (d < 1) throw DomainError("block size must be positive");
    if (!(gamma2 >= 0.0)) throw InvalidBounds("gamma2 must be nonnegative");
    BlockResiduals b;
    b.d = d;
    b.gamma2 = gamma2;
    const std::size_t nb = r.size() / d;
    b.dropped = r.size() - nb * d;
    for (std::size_t j = 0; j < nb; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += r[j * d + k] * r[j * d + k];
        b.sums.push_back(s);
    }
    return b;
}

OdeErrorResult ode_error_quantify(const BlockResiduals& b, const Criterion& c) {
    if (!(b.gamma2 >= 0.0)) throw InvalidBounds("gamma2 must be nonnegative");
    if (b.sums.empty()) throw EmptyInput("no blocks");
    const double dd = static_cast<double>(b.d);
    const Family f = Family::chisq(dd);
    std::vector<double> w(b.sums.size(), dd / 2.0);
    SolutionPath path = solve_path(b.sums, w, f, Direction::Increasing);
    OdeErrorResult out;
    out.alpha = b.gamma2 > 0.0 ? -1.0 / (2.0 * b.gamma2) : -std::numeric_limits<double>::infinity();
    Bounds bounds{out.alpha, 0.0};
    out.lambda = resolve_lambda(b.sums, w, f, path, c, bounds);
    out.fit = clip_bounds(fit_generalized(path, f, out.lambda), bounds.alpha, bounds.beta);
    for (double eta : out.fit.eta) {
        // the clip guarantees c >= gamma2 up to the rounding of -1/alpha
        double ch = std::max(eta / 2.0, b.gamma2);
        out.c_hat.push_back(ch);
        out.sigma_tilde.push_back(std::sqrt(std::max(ch - b.gamma2, 0.0)));
    }
    return out;
}

namespace {

struct Deriv {
    double dV, dR;
};

Deriv fn_rhs(const FnParams& p, double V, double R) {
    return {p.c * (V - V * V * V / 3.0 + R), -(V - p.a + p.b * R) / p.c};
}

} // namespace

std::vector<FnPoint> fn_simulate(const FnParams& p, double V0, double R0, double dt, std::size_t steps) {
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    std::vector<FnPoint> tr{{0.0, V0, R0}};
    double V = V0, R = R0;
    for (std::size_t k = 1; k <= steps; ++k) {
        Deriv f = fn_rhs(p, V, R);
        V += dt * f.dV;
        R += dt * f.dR;
        tr.push_back({static_cast<double>(k) * dt, V, R});
    }
    return tr;
}

std::vector<FnPoint> fn_reference(const FnParams& p, double V0, double R0, double dt, std::size_t steps,
                                  std::size_t refine) {
    if (!(dt > 0.0) || refine < 1) throw DomainError("dt must be positive and refine >= 1");
    const double h = dt / static_cast<double>(refine);
    std::vector<FnPoint> tr{{0.0, V0, R0}};
    double V = V0, R = R0;
    for (std::size_t k = 1; k <= steps; ++k) {
        for (std::size_t m = 0; m < refine; ++m) {
            Deriv k1 = fn_rhs(p, V, R);
            Deriv k2 = fn_rhs(p, V + 0.5 * h * k1.dV, R + 0.5 * h * k1.dR);
            Deriv k3 = fn_rhs(p, V + 0.5 * h * k2.dV, R + 0.5 * h * k2.dR);
            Deriv k4 = fn_rhs(p, V + h * k3.dV, R + h * k3.dR);
            V += h / 6.0 * (k1.dV + 2.0 * k2.dV + 2.0 * k3.dV + k4.dV);
            R += h / 6.0 * (k1.dR + 2.0 * k2.dR + 2.0 * k3.dR + k4.dR);
        }
        tr.push_back({static_cast<double>(k) * dt, V, R});
    }
    return tr;
}

FnDemo fn_demo(const FnDemoConfig& cfg, const Criterion& c) {
    if (cfg.obs_every < 1 || !(cfg.dt > 0.0) || !(cfg.t_end > cfg.t_start))
        throw DomainError("invalid demo configuration");
    const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    auto euler = fn_simulate(cfg.params, cfg.V0, cfg.R0, cfg.dt, steps);
    auto exact = fn_reference(cfg.params, cfg.V0, cfg.R0, cfg.dt, steps);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(cfg.noise_var));
    const std::size_t first = static_cast<std::size_t>(std::llround(cfg.t_start / cfg.dt));
    FnDemo demo;
    for (std::size_t k = first; k < steps; k += cfg.obs_every) {
        double y = exact[k].V + noise(rng);
        demo.t.push_back(euler[k].t);
        demo.observed.push_back(y);
        demo.euler.push_back(euler[k].V);
        demo.exact.push_back(exact[k].V);
        demo.residuals.push_back(y - euler[k].V);
    }
    demo.blocks = block_residuals(demo.residuals, cfg.d, cfg.noise_var);
    demo.result = ode_error_quantify(demo.blocks, c);
    return demo;
}

} // namespace neariso
