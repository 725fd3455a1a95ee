#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "opkit/leaf_ops.hpp"
#include "opkit/solve.hpp"
#include "tree_gen.hpp"

using namespace opkit;

namespace {

Vec make_vec(std::initializer_list<Complex> vals) {
    Vec v(static_cast<Index>(vals.size()));
    Index i = 0;
    for (Complex c : vals) v[i++] = c;
    return v;
}

double rel_err(const Vec& a, const Vec& b) {
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

// Random matrix with singular values in [1, 2]: well conditioned by build.
Mat well_conditioned(Index rows, Index cols, std::mt19937_64& rng) {
    const Mat a = testing::random_matrix(rows, cols, rng);
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd s(svd.singularValues().size());
    for (Index i = 0; i < s.size(); ++i) {
        s[i] = 1.0 + double(i) / double(std::max<Index>(1, s.size() - 1));
    }
    return svd.matrixU() * s.asDiagonal().toDenseMatrix().cast<Complex>() *
           svd.matrixV().adjoint();
}

bool non_increasing(const std::vector<double>& h, double slack = 1e-12) {
    for (size_t i = 1; i < h.size(); ++i) {
        if (h[i] > h[i - 1] + slack * (1.0 + h[i - 1])) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("cgls on trivial systems") {
    auto [x1, r1] = cgls(identity(3), make_vec({1, 2, 3}));
    CHECK(rel_err(x1, make_vec({1, 2, 3})) <= 1e-12);
    CHECK(r1.iterations == 1);
    CHECK(r1.residual_history.size() == size_t(r1.iterations) + 1);

    auto [x2, r2] = cgls(diagonal(make_vec({1, 2})), make_vec({1, 4}));
    CHECK(rel_err(x2, make_vec({1, 2})) <= 1e-10);
}

TEST_CASE("cgls returns the minimum-norm solution for restriction") {
    const OpPtr r = restriction(4, {0, 2});
    auto [x, rep] = cgls(r, make_vec({7, 9}));
    // Oracle: pseudo-inverse of the materialized 2x4 matrix.
    const Mat rm = materialize(r);
    const Vec expect = rm.completeOrthogonalDecomposition().solve(make_vec({7, 9}));
    CHECK(rel_err(x, expect) <= 1e-10);
    CHECK(rel_err(x, make_vec({7, 0, 9, 0})) <= 1e-10);
}

TEST_CASE("cgls residual history is monotone and terminates finitely") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 10; ++t) {
        const Index m = std::uniform_int_distribution<Index>(4, 24)(rng);
        const Index n = m + std::uniform_int_distribution<Index>(0, 8)(rng);
        const OpPtr a = dense(well_conditioned(n, m, rng));
        const Vec y = testing::random_vector(n, rng);
        SolverConfig cfg;
        cfg.tol = 1e-10;
        auto [x, rep] = cgls(a, y, cfg);
        CHECK(non_increasing(rep.residual_history));
        CHECK(rep.iterations <= int(m) + 2);
        CHECK(rep.stop_reason == StopReason::tolerance);
    }
}

TEST_CASE("direct least squares") {
    Mat a(3, 2);
    a << 1, 0, 0, 1, 0, 0;
    CHECK(rel_err(direct_lstsq(dense(a), make_vec({1, 2, 5})), make_vec({1, 2})) <= 1e-12);

    Mat b(1, 1);
    b << 2;
    CHECK(rel_err(direct_lstsq(dense(b), make_vec({6})), make_vec({3})) <= 1e-12);
}

TEST_CASE("direct least squares rejects singular Gram matrices") {
    Mat a(2, 2);
    a << 1, 1, 1, 1;
    CHECK_THROWS_AS(direct_lstsq(dense(a), make_vec({1, 1})), SingularGramError);
}

TEST_CASE("direct and iterative solvers agree on well-posed systems") {
    std::mt19937_64 rng(55);
    const OpPtr a = dense(well_conditioned(8, 5, rng));
    const Vec y = testing::random_vector(8, rng);
    SolverConfig cfg;
    cfg.tol = 1e-12;
    auto [x_it, rep] = cgls(a, y, cfg);
    CHECK(rel_err(x_it, direct_lstsq(a, y)) <= 1e-8);
}

TEST_CASE("solve_auto dispatch") {
    std::mt19937_64 rng(66);
    const OpPtr expl = dense(well_conditioned(6, 4, rng));
    const Vec y = testing::random_vector(6, rng);
    auto [x_direct, rep_direct] = solve_auto(expl, y);
    CHECK(rep_direct.iterations == 0);

    SolverConfig cfg;
    cfg.tol = 1e-12;
    auto [x_iter, rep_iter] = solve_auto(op_compose(restriction(8, {0, 3, 5}), op_adjoint(dft(8))),
                                         testing::random_vector(3, rng), cfg);
    CHECK(rep_iter.iterations > 0);

    auto [x_cg, rep_cg] = cgls(expl, y, cfg);
    CHECK(rel_err(x_direct, x_cg) <= 1e-8);
}

TEST_CASE("regularized inversion with no regularizers is cgls exactly") {
    std::mt19937_64 rng(9);
    const OpPtr a = dense(well_conditioned(7, 5, rng));
    const Vec y = testing::random_vector(7, rng);
    SolverConfig cfg;
    auto [x_reg, rep_reg] = regularized_inversion(a, {}, y, cfg);
    auto [x_cg, rep_cg] = cgls(a, y, cfg);
    CHECK(x_reg == x_cg);
    CHECK(rep_reg.residual_history == rep_cg.residual_history);
}

TEST_CASE("Tikhonov weight shrinks the solution") {
    const OpPtr r = restriction(8, {0, 2, 4, 7});
    const Vec y = make_vec({3, -1, 2, 5});
    double prev_norm = 1e300;
    for (double eps : {1.0, 10.0, 100.0}) {
        SolverConfig cfg;
        cfg.eps_list = {eps};
        auto [x, rep] = regularized_inversion(r, {identity(8)}, y, cfg);
        CHECK(x.norm() < prev_norm);
        prev_norm = x.norm();
    }
}

TEST_CASE("regularized inversion matches the normal-equations oracle") {
    std::mt19937_64 rng(2);
    const OpPtr r = restriction(16, {0, 2, 3, 7, 9, 10, 13, 15});
    const OpPtr d2 = second_derivative(16, 1.0);
    const Vec y = testing::random_vector(8, rng);
    const Mat rm = materialize(r);
    const Mat dm = materialize(d2);
    for (double eps : {0.1, 1.0, 10.0}) {
        SolverConfig cfg;
        cfg.eps_list = {eps};
        cfg.tol = 1e-12;
        auto [x, rep] = regularized_inversion(r, {d2}, y, cfg);
        const Mat lhs = rm.adjoint() * rm + eps * eps * dm.adjoint() * dm;
        const Vec expect = lhs.ldlt().solve(rm.adjoint() * y);
        CHECK(rel_err(x, expect) <= 1e-6);
    }
}

TEST_CASE("preconditioned inversion") {
    std::mt19937_64 rng(12);
    const OpPtr a = dense(well_conditioned(6, 6, rng));
    const Vec y = testing::random_vector(6, rng);
    SolverConfig cfg;
    cfg.tol = 1e-12;

    auto [x_id, rep_id] = preconditioned_inversion(a, identity(6), y, cfg);
    auto [x_cg, rep_cg] = cgls(a, y, cfg);
    CHECK(rel_err(x_id, x_cg) <= 1e-9);

    Vec d(6);
    for (Index i = 0; i < 6; ++i) d[i] = Complex(1.0 + 0.2 * double(i), 0.1);
    auto [x_p, rep_p] = preconditioned_inversion(identity(6), diagonal(d), y, cfg);
    CHECK(rel_err(x_p, y) <= 1e-9);
}

TEST_CASE("smoothing preconditioner keeps the solution in range(P)") {
    std::mt19937_64 rng(29);
    const Index n = 16;
    Mat smooth = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = -1; j <= 1; ++j) {
            const Index k = std::clamp<Index>(i + j, 0, n - 1);
            smooth(i, k) += 1.0 / 3.0;
        }
    }
    const OpPtr p = dense(smooth);
    const OpPtr r = restriction(n, {1, 4, 6, 9, 12, 14});
    const Vec y = testing::random_vector(6, rng);
    SolverConfig cfg;
    cfg.tol = 1e-12;
    auto [x, rep] = preconditioned_inversion(r, p, y, cfg);
    // Projection onto range(P) via the pseudo-inverse.
    const auto cod = smooth.completeOrthogonalDecomposition();
    const Vec projected = smooth * cod.solve(x);
    CHECK((x - projected).norm() <= 1e-8);
}

TEST_CASE("soft threshold") {
    CHECK(soft_threshold(Complex(3, 0), 1.0) == Complex(2, 0));
    CHECK(soft_threshold(Complex(-0.5, 0), 1.0) == Complex(0, 0));
    CHECK(soft_threshold(Complex(3, 4), 5.0) == Complex(0, 0));
    const Complex shrunk = soft_threshold(Complex(6, 8), 5.0);
    CHECK(std::abs(shrunk - Complex(3, 4)) <= 1e-14);
    CHECK(soft_threshold(Complex(0, 0), 1.0) == Complex(0, 0));
}

TEST_CASE("fista trivial cases") {
    SolverConfig cfg;
    cfg.tau = 0.5;
    auto [x0, rep0] = fista(identity(4), Vec::Zero(4), cfg);
    CHECK(x0.cwiseAbs().maxCoeff() == 0.0);
    CHECK(rep0.stop_reason == StopReason::tolerance);

    std::mt19937_64 rng(77);
    const Vec y = testing::random_vector(6, rng);
    cfg.tau = 0.3;
    cfg.max_iters = 2000;
    cfg.tol = 1e-12;
    auto [x, rep] = fista(identity(6), y, cfg);
    for (Index i = 0; i < 6; ++i) {
        CHECK(std::abs(x[i] - soft_threshold(y[i], cfg.tau)) <= 1e-8);
    }
}

TEST_CASE("ista objective is monotone and matches the identity prox") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 5; ++t) {
        const OpPtr a = dense(testing::random_matrix(8, 6, rng));
        const Vec y = testing::random_vector(8, rng);
        SolverConfig cfg;
        cfg.tau = 0.4;
        cfg.max_iters = 300;
        auto [x, rep] = ista(a, y, cfg);
        for (size_t i = 1; i < rep.objective_history.size(); ++i) {
            CHECK(rep.objective_history[i] <=
                  rep.objective_history[i - 1] + 1e-12 * (1.0 + rep.objective_history[i - 1]));
        }
    }

    const Vec y = testing::random_vector(5, rng);
    SolverConfig cfg;
    cfg.tau = 0.2;
    cfg.max_iters = 2000;
    cfg.tol = 1e-13;
    auto [x, rep] = ista(identity(5), y, cfg);
    for (Index i = 0; i < 5; ++i) {
        CHECK(std::abs(x[i] - soft_threshold(y[i], cfg.tau)) <= 1e-8);
    }
}

TEST_CASE("ista and fista agree on a well-conditioned diagonal problem") {
    std::mt19937_64 rng(4);
    Vec d(8);
    for (Index i = 0; i < 8; ++i) d[i] = Complex(1.0 + 0.1 * double(i), 0.0);
    const OpPtr a = diagonal(d);
    const Vec y = testing::random_vector(8, rng);
    SolverConfig cfg;
    cfg.tau = 0.25;
    cfg.max_iters = 5000;
    cfg.tol = 1e-13;
    auto [xf, rf] = fista(a, y, cfg);
    auto [xi, ri] = ista(a, y, cfg);
    CHECK((xf - xi).norm() <= 1e-6 * std::max(1.0, xf.norm()));
}

TEST_CASE("fista requires a positive tau") {
    SolverConfig cfg;
    CHECK_THROWS_AS(fista(identity(3), Vec::Zero(3), cfg), std::invalid_argument);
}
