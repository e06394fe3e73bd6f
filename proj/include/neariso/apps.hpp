// SPDX-License-Identifier: MIT
#pragma once

#include "neariso/selection.hpp"

#include <cstdint>
#include <vector>

namespace neariso {

struct Periodogram {
    std::vector<double> freqs; // j / T, j = 1..floor(T/2)
    std::vector<double> power;
    std::size_t T = 0;
};

// p_j = |sum_t x_t exp(-2 pi i j t / T)|^2 / (2 pi T), by direct summation.
Periodogram periodogram(const std::vector<double>& series);
Periodogram periodogram_from_ordinates(std::vector<double> power, std::size_t T);

struct SpectrumFit {
    std::vector<double> freqs;
    std::vector<double> fitted; // spectral density estimate at freqs
    double lambda = 0.0;
    Fit fit;
};

// Ordinates treated as Gamma(1, p(f)) (half chi-square with 2 dof) and fitted
// with a decreasing trend.
SpectrumFit spectrum_fit(const Periodogram& pg, const Criterion& c);
SpectrumFit spectrum_fit(const std::vector<double>& series, const Criterion& c);

struct Jump {
    std::size_t index; // fitted value rises from index to index + 1
    double magnitude;
};

struct RddResult {
    Fit fit;
    double lambda = 0.0;
    std::vector<Jump> jumps;
};

std::vector<Jump> upward_jumps(const std::vector<double>& fitted);
RddResult rdd_fit(const std::vector<double>& counts, const std::vector<double>& exposure, const Criterion& c);

struct BlockResiduals {
    std::vector<double> sums;
    std::size_t d = 1;
    double gamma2 = 0.0;
    std::size_t dropped = 0;
};

BlockResiduals block_residuals(const std::vector<double>& residuals, std::size_t d, double gamma2);

struct OdeErrorResult {
    Fit fit; // clipped chi-square fit, eta = 2 c
    double lambda = 0.0;
    std::vector<double> c_hat;
    std::vector<double> sigma_tilde;
    double alpha = 0.0; // natural-parameter lower bound
};

OdeErrorResult ode_error_quantify(const BlockResiduals& b, const Criterion& c);

struct FnParams {
    double a = 0.2;
    double b = 0.2;
    double c = 3.0;
};

struct FnPoint {
    double t;
    double V;
    double R;
};

std::vector<FnPoint> fn_simulate(const FnParams& p, double V0, double R0, double dt, std::size_t steps);
// Classical RK4 with step dt / refine, reported on the coarse grid.
std::vector<FnPoint> fn_reference(const FnParams& p, double V0, double R0, double dt, std::size_t steps,
                                  std::size_t refine = 100);

struct FnDemoConfig {
    FnParams params;
    double V0 = -1.0;
    double R0 = 1.0;
    double dt = 0.025;
    std::size_t obs_every = 2; // observation spacing h = obs_every * dt
    double t_start = 10.0;
    double t_end = 60.0;
    double noise_var = 0.01;
    std::size_t d = 3;
    std::uint64_t seed = 1;
};

struct FnDemo {
    std::vector<double> t;
    std::vector<double> observed;
    std::vector<double> euler;
    std::vector<double> exact;
    std::vector<double> residuals; // observed - euler
    BlockResiduals blocks;
    OdeErrorResult result;
};

FnDemo fn_demo(const FnDemoConfig& cfg, const Criterion& c);

} // namespace neariso
