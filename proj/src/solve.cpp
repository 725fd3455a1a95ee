#include "opkit/solve.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "opkit/validate.hpp"

namespace opkit {

namespace {

void check_data(const OpPtr& A, const Vec& y) {
    if (y.size() != A->rows()) {
        throw ShapeError("data length " + std::to_string(y.size()) +
                         " does not match operator shape " + to_string(A->shape()));
    }
    if (!all_finite(y)) throw ValidationError("data vector contains NaN or Inf");
}

}  // namespace

SolveResult cgls(const OpPtr& A, const Vec& y, const SolverConfig& cfg) {
    check_data(A, y);
    const int max_iters =
        cfg.max_iters > 0
            ? cfg.max_iters
            : static_cast<int>(10 * std::max(A->rows(), A->cols()));

    SolveResult out;
    out.x = Vec::Zero(A->cols());
    Vec r = y;
    Vec s = A->apply_adjoint(r);
    Vec p = s;
    double gamma = s.squaredNorm();
    const double target = cfg.tol * std::sqrt(gamma);

    out.report.residual_history.push_back(r.norm());
    out.report.stop_reason = StopReason::max_iters;
    if (gamma == 0.0) {
        // A^H y == 0: x = 0 already minimizes the normal equations.
        out.report.stop_reason = StopReason::tolerance;
        return out;
    }
    int k = 0;
    for (; k < max_iters; ++k) {
        const Vec q = A->apply(p);
        const double delta = q.squaredNorm();
        if (delta == 0.0) {  // breakdown: p in the null space of A
            out.report.stop_reason = StopReason::tolerance;
            break;
        }
        const double alpha = gamma / delta;
        out.x += alpha * p;
        r -= alpha * q;
        out.report.residual_history.push_back(r.norm());
        s = A->apply_adjoint(r);
        const double gamma_next = s.squaredNorm();
        if (std::sqrt(gamma_next) <= target) {
            ++k;
            out.report.stop_reason = StopReason::tolerance;
            break;
        }
        p = s + (gamma_next / gamma) * p;
        gamma = gamma_next;
    }
    out.report.iterations = k;
    return out;
}

Vec direct_lstsq(const OpPtr& A, const Vec& y, Index cap) {
    check_data(A, y);
    const Mat dense = materialize(A, cap);
    const Mat gram = dense.adjoint() * dense;
    Eigen::LDLT<Mat> ldlt(gram);
    const Eigen::VectorXd d = ldlt.vectorD().real();
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        d.minCoeff() <= 1e-13 * std::max(d.maxCoeff(), 0.0)) {
        throw SingularGramError(
            "Gram matrix A^H A is singular or indefinite; the problem is "
            "ill-posed as stated. Add regularization (regularized_inversion) "
            "or use an iterative solver.");
    }
    return ldlt.solve(dense.adjoint() * y);
}

SolveResult solve_auto(const OpPtr& A, const Vec& y, const SolverConfig& cfg) {
    if (A->is_explicit()) {
        SolveResult out;
        out.x = direct_lstsq(A, y);
        out.report.iterations = 0;
        out.report.stop_reason = StopReason::tolerance;
        out.report.residual_history.push_back((y - A->apply(out.x)).norm());
        return out;
    }
    return cgls(A, y, cfg);
}

SolveResult regularized_inversion(const OpPtr& A, const std::vector<OpPtr>& regs,
                                  const Vec& y, const SolverConfig& cfg) {
    if (regs.empty()) return cgls(A, y, cfg);
    if (cfg.eps_list.size() != regs.size()) {
        throw std::invalid_argument("eps_list length must match number of regularizers");
    }
    std::vector<OpPtr> blocks;
    blocks.reserve(regs.size() + 1);
    blocks.push_back(A);
    Index aug_rows = A->rows();
    for (size_t i = 0; i < regs.size(); ++i) {
        if (regs[i]->cols() != A->cols()) {
            throw ShapeError("regularizer " + std::to_string(i) + " shape " +
                             to_string(regs[i]->shape()) +
                             " incompatible with operator " + to_string(A->shape()));
        }
        blocks.push_back(op_scale(cfg.eps_list[i], regs[i]));
        aug_rows += regs[i]->rows();
    }
    const OpPtr aug = op_vstack(std::move(blocks));
    Vec y_aug = Vec::Zero(aug_rows);
    y_aug.head(y.size()) = y;
    return cgls(aug, y_aug, cfg);
}

SolveResult preconditioned_inversion(const OpPtr& A, const OpPtr& P, const Vec& y,
                                     const SolverConfig& cfg) {
    SolveResult out = cgls(op_compose(A, P), y, cfg);
    out.x = P->apply(out.x);
    return out;
}

Complex soft_threshold(Complex z, double thresh) {
    const double mag = std::abs(z);
    if (mag <= thresh) return Complex(0.0, 0.0);
    return z * ((mag - thresh) / mag);
}

namespace {

SolveResult proximal_gradient(const OpPtr& A, const Vec& y, const SolverConfig& cfg,
                              bool accelerate) {
    check_data(A, y);
    if (!(cfg.tau > 0)) throw std::invalid_argument("tau must be positive");
    const int max_iters = cfg.max_iters > 0 ? cfg.max_iters : 500;

    const double smax = max_singular_value(A, 1e-8, 10000, cfg.seed);
    const double lip = 1.05 * smax * smax;
    const double step = 1.0 / lip;
    const double thresh = cfg.tau / lip;

    auto objective = [&](const Vec& x, const Vec& r) {
        return 0.5 * r.squaredNorm() + cfg.tau * x.lpNorm<1>();
    };

    SolveResult out;
    out.x = Vec::Zero(A->cols());
    Vec z = out.x;  // momentum point
    Vec r = y;      // y - A x
    double t = 1.0;

    out.report.residual_history.push_back(r.norm());
    out.report.objective_history.push_back(objective(out.x, r));
    out.report.stop_reason = StopReason::max_iters;

    int k = 0;
    for (; k < max_iters; ++k) {
        const Vec rz = y - A->apply(z);
        const Vec grad_point = z + step * A->apply_adjoint(rz);
        Vec x_next(A->cols());
        for (Index i = 0; i < x_next.size(); ++i) {
            x_next[i] = soft_threshold(grad_point[i], thresh);
        }
        const double change = (x_next - out.x).norm();
        const double scale = std::max(x_next.norm(), 1e-300);
        if (accelerate) {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            z = x_next + ((t - 1.0) / t_next) * (x_next - out.x);
            t = t_next;
        } else {
            z = x_next;
        }
        out.x = x_next;
        r = y - A->apply(out.x);
        out.report.residual_history.push_back(r.norm());
        out.report.objective_history.push_back(objective(out.x, r));
        if (change <= cfg.tol * scale) {
            ++k;
            out.report.stop_reason = StopReason::tolerance;
            break;
        }
    }
    out.report.iterations = k;
    return out;
}

}  // namespace

SolveResult fista(const OpPtr& A, const Vec& y, const SolverConfig& cfg) {
    return proximal_gradient(A, y, cfg, true);
}

SolveResult ista(const OpPtr& A, const Vec& y, const SolverConfig& cfg) {
    return proximal_gradient(A, y, cfg, false);
}

}  // namespace opkit
