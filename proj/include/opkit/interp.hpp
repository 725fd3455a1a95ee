#pragma once

#include <cstdint>
#include <vector>

#include "opkit/solve.hpp"

namespace opkit {

/// Configuration for the irregular-sampling interpolation experiment: a real
/// signal made of on-grid sinusoids, coarsely sampled, then recovered three
/// ways (naive least squares, smoothness-regularized, sparsity-promoting).
struct InterpConfig {
    Index n = 256;                 // signal length, power of two
    double sample_fraction = 0.25;  // in (0, 1]
    std::vector<Index> freqs = {8, 21, 34};   // positive-frequency bins
    std::vector<double> amps = {1.0, 0.5, 0.25};
    std::uint64_t seed = 42;
    double eps = 1.0;      // second-derivative weight
    double tau_factor = 0.02;  // tau = tau_factor * ||A^H y||_inf
    int max_iters = 1000;
    double tol = 1e-10;
};

struct RecoveryResult {
    Eigen::VectorXd x;  // time-domain estimate
    double rel_l2_error = 0.0;
    SolveReport report;
};

struct InterpResult {
    Eigen::VectorXd x_true;
    std::vector<Index> sample_indices;
    Eigen::VectorXd y;  // sampled data
    RecoveryResult naive;
    RecoveryResult regularized;
    RecoveryResult fista;
    std::vector<Index> recovered_support;  // frequency bins above 1e-3 * max
    std::vector<Index> true_support;
    double tau = 0.0;  // the value actually used
};

void validate_config(const InterpConfig& cfg);

/// Runs the full experiment deterministically from cfg.
InterpResult run_interp(const InterpConfig& cfg);

}  // namespace opkit
