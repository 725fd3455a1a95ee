#include "opkit/interp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "opkit/leaf_ops.hpp"

namespace opkit {

void validate_config(const InterpConfig& cfg) {
    if (cfg.n < 4 || !std::has_single_bit(static_cast<unsigned long long>(cfg.n))) {
        throw ValidationError("signal length must be a power of two >= 4");
    }
    if (!(cfg.sample_fraction > 0.0 && cfg.sample_fraction <= 1.0)) {
        throw ValidationError("sample_fraction must be in (0, 1]");
    }
    if (cfg.freqs.size() != cfg.amps.size()) {
        throw ValidationError("freqs and amps must have the same length");
    }
    if (cfg.freqs.empty()) throw ValidationError("at least one sinusoid required");
    for (Index f : cfg.freqs) {
        if (f <= 0 || f >= cfg.n / 2) {
            throw ValidationError("frequency bin " + std::to_string(f) +
                                  " outside (0, n/2)");
        }
    }
    if (!(cfg.eps >= 0) || !(cfg.tau_factor > 0) || cfg.max_iters < 1 || !(cfg.tol > 0)) {
        throw ValidationError("eps >= 0, tau_factor > 0, max_iters >= 1, tol > 0 required");
    }
}

namespace {

std::vector<Index> draw_sample_indices(Index n, Index count, std::uint64_t seed) {
    std::vector<Index> all(static_cast<size_t>(n));
    std::iota(all.begin(), all.end(), Index(0));
    std::mt19937_64 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<size_t>(count));
    std::sort(all.begin(), all.end());
    return all;
}

double rel_l2(const Eigen::VectorXd& est, const Eigen::VectorXd& truth) {
    return (est - truth).norm() / truth.norm();
}

Eigen::VectorXd real_part_checked(const Vec& v, double imag_tol) {
    if (v.imag().lpNorm<Eigen::Infinity>() > imag_tol) {
        throw ValidationError("synthesized signal is not real within tolerance");
    }
    return v.real();
}

}  // namespace

InterpResult run_interp(const InterpConfig& cfg) {
    validate_config(cfg);
    const Index n = cfg.n;
    InterpResult res;

    // Hermitian-symmetric spectral spikes so the time signal is real. With the
    // orthonormal DFT, X[f] = a * sqrt(n) / 2 yields a cosine of amplitude a.
    Vec spectrum = Vec::Zero(n);
    for (size_t i = 0; i < cfg.freqs.size(); ++i) {
        const double v = cfg.amps[i] * std::sqrt(double(n)) / 2.0;
        spectrum[cfg.freqs[i]] += v;
        spectrum[n - cfg.freqs[i]] += v;
        res.true_support.push_back(cfg.freqs[i]);
        res.true_support.push_back(n - cfg.freqs[i]);
    }
    std::sort(res.true_support.begin(), res.true_support.end());

    const OpPtr fourier = dft(n);
    const OpPtr synthesis = op_adjoint(fourier);
    res.x_true = real_part_checked(forward(synthesis, spectrum), 1e-10);

    const Index n_samples =
        std::max<Index>(1, static_cast<Index>(std::floor(cfg.sample_fraction * double(n))));
    res.sample_indices = draw_sample_indices(n, n_samples, cfg.seed);
    const OpPtr R = restriction(n, res.sample_indices);

    const Vec y_c = forward(R, res.x_true.cast<Complex>());
    res.y = y_c.real();

    SolverConfig base;
    base.max_iters = cfg.max_iters;
    base.tol = cfg.tol;

    // (a) naive: minimum-norm solution of the restriction alone; places the
    // data back at the sampled locations and zeros elsewhere.
    {
        SolveResult sr = solve_auto(R, y_c, base);
        res.naive.x = sr.x.real();
        res.naive.rel_l2_error = rel_l2(res.naive.x, res.x_true);
        res.naive.report = std::move(sr.report);
    }

    // (b) smoothness via a second-derivative penalty.
    {
        SolverConfig cfg_reg = base;
        cfg_reg.eps_list = {cfg.eps};
        SolveResult sr = regularized_inversion(R, {second_derivative(n, 1.0)}, y_c, cfg_reg);
        res.regularized.x = sr.x.real();
        res.regularized.rel_l2_error = rel_l2(res.regularized.x, res.x_true);
        res.regularized.report = std::move(sr.report);
    }

    // (c) sparsity in the frequency domain: solve for the spectrum through
    // the sampled synthesis operator.
    {
        const OpPtr A = op_compose(R, synthesis);
        SolverConfig cfg_fista = base;
        cfg_fista.tau = cfg.tau_factor *
                        adjoint(A, y_c).lpNorm<Eigen::Infinity>();
        res.tau = cfg_fista.tau;
        SolveResult sr = fista(A, y_c, cfg_fista);
        res.fista.x = real_part_checked(forward(synthesis, sr.x), 1e-8);
        res.fista.rel_l2_error = rel_l2(res.fista.x, res.x_true);
        res.fista.report = std::move(sr.report);

        const double peak = sr.x.cwiseAbs().maxCoeff();
        for (Index k = 0; k < n; ++k) {
            if (std::abs(sr.x[k]) > 1e-3 * peak) res.recovered_support.push_back(k);
        }
    }

    return res;
}

}  // namespace opkit
