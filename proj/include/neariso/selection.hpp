// SPDX-License-Identifier: MIT
#pragma once

#include "neariso/path.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace neariso {

enum class CriterionKind { Aic, Cp, Lambda, NearestKnot };

struct Criterion {
    CriterionKind kind = CriterionKind::Aic;
    double value = 0.0; // sigma^2 for Cp, lambda for the fixed kinds

    static Criterion aic() { return {CriterionKind::Aic, 0.0}; }
    static Criterion cp(double sigma2) { return {CriterionKind::Cp, sigma2}; }
    static Criterion lambda(double l) { return {CriterionKind::Lambda, l}; }
    static Criterion nearest_knot(double l) { return {CriterionKind::NearestKnot, l}; }
};

double log_likelihood(const std::vector<double>& x, const std::vector<double>& w, const Family& f, const Fit& fit);
// -2 loglik + 2 K, with K the number of joined pieces of the fit.
double aic(const std::vector<double>& x, const std::vector<double>& w, const Family& f, const Fit& fit);
double cp_gaussian(const std::vector<double>& x, double sigma2, const Fit& fit);

struct TraceEntry {
    double lambda;
    double value;
    std::size_t pieces;
};

struct CriterionTrace {
    std::vector<TraceEntry> entries;
    std::size_t selected = 0;
    double selected_lambda() const { return entries.at(selected).lambda; }
};

// Evaluates an Aic or Cp criterion at every knot (post-merge state). When
// bounds are given each knot fit is clipped before evaluation.
CriterionTrace select_lambda(const std::vector<double>& x, const std::vector<double>& w, const Family& f,
                             const SolutionPath& path, const Criterion& c,
                             std::optional<Bounds> bounds = std::nullopt);

// Resolves any criterion to a lambda on this path.
double resolve_lambda(const std::vector<double>& x, const std::vector<double>& w, const Family& f,
                      const SolutionPath& path, const Criterion& c, std::optional<Bounds> bounds = std::nullopt);

struct BiasStudyConfig {
    Family family;
    std::vector<double> weights;
    std::vector<double> eta_true; // mean-scale truth
    std::vector<double> grid;     // lambda values shared across replications
    std::size_t replications = 1000;
    std::size_t inner = 100; // fresh draws per replication for the discrepancy
    std::uint64_t seed = 1;
    Direction direction = Direction::Increasing;
    unsigned threads = 1;
};

struct BiasStudyResult {
    std::vector<double> grid;
    std::vector<double> mean_aic;
    std::vector<double> mean_2d;
    std::vector<double> sd_aic;
    std::vector<double> sd_2d;
    std::size_t replications = 0;
    std::size_t inner = 0;
};

// Generator for replication r of a study seeded with `seed`.
std::mt19937_64 replication_rng(std::uint64_t seed, std::uint64_t r);

BiasStudyResult bias_study(const BiasStudyConfig& cfg);

// {0, 1, 2, 4, ..., 2^kmax}
std::vector<double> doubling_grid(int kmax);
// lo + (hi - lo) * (i mod period) / (period - 1), i = 0..n-1
std::vector<double> sawtooth(double lo, double hi, std::size_t period, std::size_t n);

} // namespace neariso
