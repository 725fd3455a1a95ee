#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opkit/operator.hpp"

namespace opkit {

struct SolverConfig {
    int max_iters = 0;   // 0 means the per-solver default
    double tol = 1e-8;
    double tau = 0.0;    // l1 weight for fista/ista
    std::vector<double> eps_list;  // regularization weights
    std::uint64_t seed = 0;
};

enum class StopReason { tolerance, max_iters };

inline const char* to_string(StopReason r) {
    return r == StopReason::tolerance ? "tolerance" : "max_iters";
}

struct SolveReport {
    int iterations = 0;
    StopReason stop_reason = StopReason::tolerance;
    std::vector<double> residual_history;   // ||y - A x_k||, includes iterate 0
    std::vector<double> objective_history;  // fista/ista only
};

struct SolveResult {
    Vec x;
    SolveReport report;
};

/// Conjugate gradients on the normal equations, x0 = 0. Stops when
/// ||A^H (y - A x)|| <= tol * ||A^H y|| or at max_iters
/// (default 10 * max(N, M)). Returns the minimum-norm least-squares solution.
SolveResult cgls(const OpPtr& A, const Vec& y, const SolverConfig& cfg = {});

class SingularGramError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (A^H A)^{-1} A^H y by materializing A and Cholesky-factoring the Gram
/// matrix. Throws SingularGramError when the Gram matrix is singular or
/// indefinite; use the regularized path in that case.
Vec direct_lstsq(const OpPtr& A, const Vec& y, Index cap = kDefaultMaterializeCap);

/// Dispatches to direct_lstsq for explicit operators, cgls otherwise.
SolveResult solve_auto(const OpPtr& A, const Vec& y, const SolverConfig& cfg = {});

/// min_x ||y - A x||^2 + sum_i eps_i^2 ||R_i x||^2 via the augmented stack
/// [A; eps_1 R_1; ...] with data [y; 0; ...] and cgls.
SolveResult regularized_inversion(const OpPtr& A, const std::vector<OpPtr>& regs,
                                  const Vec& y, const SolverConfig& cfg);

/// Solves y = (A P) p with cgls and returns x = P p.
SolveResult preconditioned_inversion(const OpPtr& A, const OpPtr& P, const Vec& y,
                                     const SolverConfig& cfg = {});

/// Proximal map of thresh * |.|: shrinks magnitude, preserves phase.
Complex soft_threshold(Complex z, double thresh);

/// Accelerated proximal gradient for 0.5 ||y - A x||^2 + tau ||x||_1.
/// Step 1 / L with L = 1.05 * smax(A)^2 from power iteration. Stops on
/// relative iterate change <= tol or at max_iters (default 500).
SolveResult fista(const OpPtr& A, const Vec& y, const SolverConfig& cfg);

/// fista without momentum; its objective history is monotone.
SolveResult ista(const OpPtr& A, const Vec& y, const SolverConfig& cfg);

}  // namespace opkit
