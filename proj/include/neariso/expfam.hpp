// SPDX-License-Identifier: MIT
#pragma once

#include <random>
#include <string>

namespace neariso {

enum class Kind { Normal, Binomial, Poisson, GammaScale };

// One-parameter exponential family with a weight-free cumulant psi.
// Per-observation scaling lives in the weights: Binomial w = N trials,
// GammaScale w = shape (chi-square: d/2), Normal w = 1/sigma^2, Poisson w = exposure.
struct Family {
    Kind kind = Kind::Normal;
    double shape = 1.0; // GammaScale default shape; informational for other kinds

    static Family normal() { return {Kind::Normal, 1.0}; }
    static Family binomial() { return {Kind::Binomial, 1.0}; }
    static Family poisson() { return {Kind::Poisson, 1.0}; }
    static Family gamma(double a);
    // Chi-square with d degrees of freedom and scale s: Gamma(d/2, 2s).
    // Use weight d/2; the fitted mean parameter is 2s.
    static Family chisq(double d);

    // Weight a single observation would carry by default (shape for gamma, 1 otherwise).
    double default_weight() const { return kind == Kind::GammaScale ? shape : 1.0; }
};

struct NaturalDomain {
    double lower;
    double upper;
};

std::string to_string(Kind k);
Kind kind_from_string(const std::string& s); // throws DomainError

NaturalDomain natural_domain(const Family& f);
bool in_natural_domain(const Family& f, double theta);

double psi(const Family& f, double theta);
double mean_map(const Family& f, double theta);
// Boundary means map to signed infinities.
double mean_map_inv(const Family& f, double eta);
// Closure of the mean range contains eta.
bool in_mean_closure(const Family& f, double eta);
// Snaps eta onto the closure when it lies outside by rounding only (1e-12).
double snap_mean(const Family& f, double eta);

// Raw observation -> mean scale (x / w for the sufficient-statistic families;
// Normal observations are already on the mean scale).
double to_mean_scale(const Family& f, double x, double w);

// Full log-density of a raw observation x under the weight-scaled family
// with mean parameter eta, including log h(x).
double log_density(const Family& f, double x, double eta, double weight);
// log h(x) alone, and the eta-dependent rest; log_density = log_base + log_kernel.
double log_base(const Family& f, double x, double weight);
double log_kernel(const Family& f, double x, double eta, double weight);

void check_support(const Family& f, double x, double weight);

double sample(const Family& f, double eta, double weight, std::mt19937_64& rng);

} // namespace neariso
