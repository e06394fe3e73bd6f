// SPDX-License-Identifier: MIT
#pragma once

#include "neariso/expfam.hpp"
#include "neariso/pava.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace neariso {

// A cluster on the path. Its level is affine in lambda:
//   level(lambda) = (sum + lambda * (s_left - s_right)) / weight
// where s_left/s_right are the violation indicators of its two boundaries.
struct Cluster {
    std::size_t begin = 0;
    std::size_t end = 0;
    double weight = 0.0;
    double sum = 0.0; // sum of w_i * x_i over the cluster
};

struct Knot {
    double lambda = 0.0;
    std::vector<Cluster> clusters;
    std::vector<int> s;      // boundary indicators, s.front() = s.back() = 0
    std::size_t merges = 0;  // merge events resolved at this lambda

    double slope(std::size_t j) const { return (s[j] - s[j + 1]) / clusters[j].weight; }
    double level(std::size_t j, double lambda) const {
        return (clusters[j].sum + lambda * (s[j] - s[j + 1])) / clusters[j].weight;
    }
};

// Whole solution path. Clusters and indices refer to the increasing
// orientation; fit_at maps back to the caller's order.
struct SolutionPath {
    WeightedSeries series;   // as supplied
    std::vector<double> x;   // oriented values
    std::vector<double> w;   // oriented weights
    std::vector<Knot> knots; // strictly increasing lambda, knots[0].lambda == 0

    std::size_t size() const { return x.size(); }
    double terminal_lambda() const { return knots.back().lambda; }
    std::vector<double> knot_lambdas() const;
    ClusterPartition final_partition() const;
};

struct PathFit {
    double lambda = 0.0;
    std::vector<double> eta;
    std::size_t clusters = 0;
    std::size_t pieces = 0; // maximal runs of equal fitted values
};

SolutionPath solve_path(const WeightedSeries& series);
PathFit fit_at(const SolutionPath& path, double lambda);

struct Bounds {
    double alpha;
    double beta;
};

struct Fit {
    Family family;
    double lambda = 0.0;
    std::vector<double> eta;
    std::vector<double> theta;
    std::size_t clusters = 0;
    std::size_t pieces = 0;
    std::optional<Bounds> bounds;
};

// Raw observations -> mean-scale weighted series, after support checks.
WeightedSeries mean_scale_series(const std::vector<double>& x, const std::vector<double>& w, const Family& f,
                                 Direction d = Direction::Increasing);
SolutionPath solve_path(const std::vector<double>& x, const std::vector<double>& w, const Family& f,
                        Direction d = Direction::Increasing);

Fit to_fit(const Family& f, const PathFit& pf);
Fit fit_generalized(const std::vector<double>& x, const std::vector<double>& w, const Family& f, double lambda,
                    Direction d = Direction::Increasing);
Fit fit_generalized(const SolutionPath& path, const Family& f, double lambda);

Fit clip_bounds(const Fit& fit, double alpha, double beta);

struct KktCertificate {
    std::vector<double> xi; // xi_0..xi_n in the increasing orientation
    bool valid = false;
    double max_violation = 0.0;
    double tolerance = 0.0;
};

KktCertificate kkt_check(const WeightedSeries& series, double lambda, const std::vector<double>& eta_hat);

} // namespace neariso
