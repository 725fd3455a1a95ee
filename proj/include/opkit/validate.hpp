#pragma once

#include <cstdint>

#include "opkit/operator.hpp"

namespace opkit {

struct DotTestResult {
    bool passed = false;
    int trials = 0;
    double worst_relative_error = 0.0;
    Complex lhs_sample{};  // <A u, v> from the worst trial
    Complex rhs_sample{};  // <u, A^H v> from the worst trial
};

/// Checks <A u, v> == <u, A^H v> on seeded random complex Gaussian vectors.
/// Failure is reported in the result, not thrown.
DotTestResult dottest(const OpPtr& op, int trials = 100, double tol = 1e-10,
                      std::uint64_t seed = 0);

class PowerIterationError : public std::runtime_error {
public:
    PowerIterationError(const std::string& msg, double last_estimate)
        : std::runtime_error(msg), last_estimate(last_estimate) {}

    double last_estimate;
};

/// Largest singular value via power iteration on w -> A^H (A w).
double max_singular_value(const OpPtr& op, double tol = 1e-9,
                          int max_iters = 10000, std::uint64_t seed = 0);

/// Smallest singular value via power iteration on the spectrally shifted map
/// w -> 1.01 * smax^2 * w - A^H (A w). Clamped at zero.
double min_singular_value(const OpPtr& op, double tol = 1e-9,
                          int max_iters = 10000, std::uint64_t seed = 0);

class IllPosedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// smax / smin; throws IllPosedError when smin is zero within tolerance.
double cond(const OpPtr& op, double tol = 1e-9, int max_iters = 10000,
            std::uint64_t seed = 0);

/// Seeded complex vector with independent standard-normal real and imaginary
/// parts. Shared by the dot-test, solvers, and test generators.
Vec random_complex_vector(Index n, std::uint64_t seed);

}  // namespace opkit
