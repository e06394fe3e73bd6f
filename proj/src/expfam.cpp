// SPDX-License-Identifier: MIT
#include "neariso/expfam.hpp"
#include "neariso/errors.hpp"

#include <cmath>
#include <limits>

namespace neariso {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool near_integer(double v) { return std::abs(v - std::round(v)) <= 1e-9 * (1.0 + std::abs(v)); }

// x*log(p) with the 0*log(0) = 0 convention
double xlogy(double x, double p) {
    if (x == 0.0) return 0.0;
    return x * std::log(p);
}

void require_domain(const Family& f, double theta) {
    if (!in_natural_domain(f, theta))
        throw DomainError("theta=" + std::to_string(theta) + " outside natural domain of " + to_string(f.kind));
}

} // namespace

Family Family::gamma(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("gamma shape must be positive");
    return {Kind::GammaScale, a};
}

Family Family::chisq(double d) {
    if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("chi-square degrees of freedom must be positive");
    return {Kind::GammaScale, d / 2.0};
}

std::string to_string(Kind k) {
    switch (k) {
    case Kind::Normal: return "normal";
    case Kind::Binomial: return "binomial";
    case Kind::Poisson: return "poisson";
    case Kind::GammaScale: return "gamma";
    }
    return "?";
}

Kind kind_from_string(const std::string& s) {
    if (s == "normal") return Kind::Normal;
    if (s == "binomial") return Kind::Binomial;
    if (s == "poisson") return Kind::Poisson;
    if (s == "gamma" || s == "chisq") return Kind::GammaScale;
    throw DomainError("unknown family '" + s + "'");
}

NaturalDomain natural_domain(const Family& f) {
    if (f.kind == Kind::GammaScale) return {-kInf, 0.0};
    return {-kInf, kInf};
}

bool in_natural_domain(const Family& f, double theta) {
    if (std::isnan(theta) || std::isinf(theta)) return false;
    return f.kind != Kind::GammaScale || theta < 0.0;
}

double psi(const Family& f, double theta) {
    require_domain(f, theta);
    switch (f.kind) {
    case Kind::Normal: return 0.5 * theta * theta;
    case Kind::Binomial: // log(1 + e^theta), overflow-safe
        return theta > 0.0 ? theta + std::log1p(std::exp(-theta)) : std::log1p(std::exp(theta));
    case Kind::Poisson: return std::exp(theta);
    case Kind::GammaScale: return -std::log(-theta);
    }
    return 0.0;
}

double mean_map(const Family& f, double theta) {
    require_domain(f, theta);
    switch (f.kind) {
    case Kind::Normal: return theta;
    case Kind::Binomial:
        if (theta >= 0.0) return 1.0 / (1.0 + std::exp(-theta));
        else {
            double e = std::exp(theta);
            return e / (1.0 + e);
        }
    case Kind::Poisson: return std::exp(theta);
    case Kind::GammaScale: return -1.0 / theta;
    }
    return 0.0;
}

bool in_mean_closure(const Family& f, double eta) {
    if (std::isnan(eta)) return false;
    switch (f.kind) {
    case Kind::Normal: return std::isfinite(eta);
    case Kind::Binomial: return eta >= 0.0 && eta <= 1.0;
    case Kind::Poisson: return eta >= 0.0 && std::isfinite(eta);
    case Kind::GammaScale: return eta > 0.0 && std::isfinite(eta);
    }
    return false;
}

double snap_mean(const Family& f, double eta) {
    if (in_mean_closure(f, eta)) return eta;
    constexpr double tol = 1e-12;
    if (f.kind == Kind::Binomial) {
        if (eta < 0.0 && eta >= -tol) return 0.0;
        if (eta > 1.0 && eta <= 1.0 + tol) return 1.0;
    }
    if (f.kind == Kind::Poisson && eta < 0.0 && eta >= -tol) return 0.0;
    return eta;
}

double mean_map_inv(const Family& f, double eta) {
    if (!in_mean_closure(f, eta))
        throw DomainError("eta=" + std::to_string(eta) + " outside mean range of " + to_string(f.kind));
    switch (f.kind) {
    case Kind::Normal: return eta;
    case Kind::Binomial:
        if (eta == 0.0) return -kInf;
        if (eta == 1.0) return kInf;
        return std::log(eta) - std::log1p(-eta);
    case Kind::Poisson: return eta == 0.0 ? -kInf : std::log(eta);
    case Kind::GammaScale: return -1.0 / eta;
    }
    return 0.0;
}

double to_mean_scale(const Family& f, double x, double w) {
    return f.kind == Kind::Normal ? x : x / w;
}

void check_support(const Family& f, double x, double w) {
    if (!(w > 0.0) || !std::isfinite(w)) throw NonpositiveWeight("weight must be positive and finite");
    if (!std::isfinite(x)) throw SupportError("non-finite observation");
    switch (f.kind) {
    case Kind::Normal: return;
    case Kind::Binomial:
        if (!near_integer(w)) throw SupportError("binomial weight must be an integer trial count");
        if (!near_integer(x) || x < 0.0 || x > std::round(w))
            throw SupportError("binomial count " + std::to_string(x) + " outside 0.." + std::to_string(std::lround(w)));
        return;
    case Kind::Poisson:
        if (x < 0.0) throw SupportError("negative Poisson observation");
        return;
    case Kind::GammaScale:
        if (!(x > 0.0)) throw SupportError("gamma observation must be positive");
        return;
    }
}

double log_base(const Family& f, double x, double w) {
    check_support(f, x, w);
    switch (f.kind) {
    case Kind::Normal: return 0.5 * std::log(w / (2.0 * M_PI)) - 0.5 * w * x * x;
    case Kind::Binomial: {
        double n = std::round(w), k = std::round(x);
        return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    }
    case Kind::Poisson: return xlogy(x, w) - std::lgamma(x + 1.0);
    case Kind::GammaScale: return (w - 1.0) * std::log(x) - std::lgamma(w);
    }
    return 0.0;
}

double log_kernel(const Family& f, double x, double eta, double w) {
    if (!in_mean_closure(f, eta))
        throw DomainError("eta=" + std::to_string(eta) + " outside mean range of " + to_string(f.kind));
    switch (f.kind) {
    case Kind::Normal: return w * (x * eta - 0.5 * eta * eta);
    case Kind::Binomial: return xlogy(x, eta) + xlogy(w - x, 1.0 - eta);
    case Kind::Poisson: return xlogy(x, eta) - w * eta;
    case Kind::GammaScale: return -w * std::log(eta) - x / eta;
    }
    return 0.0;
}

double log_density(const Family& f, double x, double eta, double w) {
    return log_base(f, x, w) + log_kernel(f, x, eta, w);
}

double sample(const Family& f, double eta, double w, std::mt19937_64& rng) {
    if (!(w > 0.0) || !std::isfinite(w)) throw NonpositiveWeight("weight must be positive and finite");
    bool open = in_mean_closure(f, eta);
    if (f.kind == Kind::Binomial) open = open && eta > 0.0 && eta < 1.0;
    if (f.kind == Kind::Poisson) open = open && eta > 0.0;
    if (!open) throw DomainError("sampling needs eta in the open mean range");
    switch (f.kind) {
    case Kind::Normal: return std::normal_distribution<double>(eta, 1.0 / std::sqrt(w))(rng);
    case Kind::Binomial: {
        if (!near_integer(w)) throw DomainError("binomial weight must be an integer trial count");
        std::binomial_distribution<long> d(std::lround(w), eta);
        return static_cast<double>(d(rng));
    }
    case Kind::Poisson: return static_cast<double>(std::poisson_distribution<long>(w * eta)(rng));
    case Kind::GammaScale: return std::gamma_distribution<double>(w, eta)(rng);
    }
    return 0.0;
}

} // namespace neariso
