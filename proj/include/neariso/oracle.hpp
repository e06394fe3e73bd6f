// SPDX-License-Identifier: MIT
#pragma once

#include "neariso/path.hpp"

#include <optional>
#include <vector>

namespace neariso {

struct ObjectiveSpec {
    Family family;
    std::vector<double> x; // raw observations
    std::vector<double> w;
    double lambda = 0.0;
    std::optional<Bounds> bounds;
    Direction direction = Direction::Increasing;
};

// sum_i w_i (-theta_i x~_i + psi(theta_i)) + lambda * sum (theta_i - theta_{i+1})_+
// (hinge reversed for Decreasing).
double objective_value(const ObjectiveSpec& spec, const std::vector<double>& theta);

struct OracleResult {
    std::vector<double> theta;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double gap = 0.0; // duality gap (dual_ascent only)
};

// Projected subgradient descent with normalized steps c / sqrt(k); returns the
// best iterate. `converged` is set when the best value moved by less than
// tol * (1 + |f|) over the last tenth of the run.
OracleResult subgradient_minimize(const ObjectiveSpec& spec, std::size_t iters, double tol);

// Cyclic exact coordinate ascent on the box-constrained dual; the primal point
// is recovered from the multipliers and certified by the duality gap.
OracleResult dual_ascent_minimize(const ObjectiveSpec& spec, std::size_t max_sweeps, double tol);

} // namespace neariso
