#include "opkit/validate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace opkit {

Vec random_complex_vector(Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(n);
    for (Index i = 0; i < n; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v[i] = Complex(re, im);
    }
    return v;
}

DotTestResult dottest(const OpPtr& op, int trials, double tol, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("dottest requires trials >= 1");
    DotTestResult res;
    res.trials = trials;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw = [&](Index n) {
        Vec v(n);
        for (Index i = 0; i < n; ++i) v[i] = Complex(gauss(rng), gauss(rng));
        return v;
    };
    for (int t = 0; t < trials; ++t) {
        const Vec u = draw(op->cols());
        const Vec v = draw(op->rows());
        // <a, b> conjugate-linear in the second argument.
        const Complex lhs = v.dot(op->apply(u));
        const Complex rhs = op->apply_adjoint(v).dot(u);
        const double denom = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        const double rel = std::abs(lhs - rhs) / denom;
        if (rel > res.worst_relative_error) {
            res.worst_relative_error = rel;
            res.lhs_sample = lhs;
            res.rhs_sample = rhs;
        }
    }
    res.passed = res.worst_relative_error <= tol;
    return res;
}

namespace {

// Power iteration for the largest eigenvalue of a Hermitian PSD map.
// Convergence on relative change of the Rayleigh quotient.
template <typename Map>
double power_iteration(Map&& map, Index n, double tol, int max_iters,
                       std::uint64_t seed, const char* what) {
    Vec w = random_complex_vector(n, seed);
    w.normalize();
    double lambda = 0.0;
    for (int k = 0; k < max_iters; ++k) {
        Vec mw = map(w);
        const double next = std::real(w.dot(mw));
        const double nrm = mw.norm();
        if (nrm == 0.0) return 0.0;  // w in the null space, eigenvalue 0
        w = mw / nrm;
        if (k > 0 && std::abs(next - lambda) <= tol * std::max(std::abs(next), 1e-300)) {
            return next;
        }
        lambda = next;
    }
    throw PowerIterationError(std::string(what) +
                                  ": power iteration did not converge, last estimate " +
                                  std::to_string(lambda),
                              lambda);
}

}  // namespace

double max_singular_value(const OpPtr& op, double tol, int max_iters,
                          std::uint64_t seed) {
    auto gram = [&](const Vec& w) { return op->apply_adjoint(op->apply(w)); };
    const double lambda = power_iteration(gram, op->cols(), tol, max_iters, seed,
                                          "max_singular_value");
    return std::sqrt(std::max(lambda, 0.0));
}

double min_singular_value(const OpPtr& op, double tol, int max_iters,
                          std::uint64_t seed) {
    const double smax = max_singular_value(op, tol, max_iters, seed);
    if (smax == 0.0) return 0.0;
    const double shift = 1.01 * smax * smax;
    auto shifted = [&](const Vec& w) -> Vec {
        return shift * w - op->apply_adjoint(op->apply(w));
    };
    const double mu = power_iteration(shifted, op->cols(), tol, max_iters, seed + 1,
                                      "min_singular_value");
    return std::sqrt(std::max(shift - mu, 0.0));
}

double cond(const OpPtr& op, double tol, int max_iters, std::uint64_t seed) {
    const double smax = max_singular_value(op, tol, max_iters, seed);
    const double smin = min_singular_value(op, tol, max_iters, seed);
    if (smin <= 1e-8 * smax) {
        throw IllPosedError("operator is rank deficient (smin ~ 0): condition number is infinite");
    }
    return smax / smin;
}

}  // namespace opkit
