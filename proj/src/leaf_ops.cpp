#include "opkit/leaf_ops.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <utility>

namespace opkit {

DiagonalOp::DiagonalOp(Vec d)
    : Operator({d.size(), d.size()}, false), d_(std::move(d)) {
    if (!all_finite(d_)) {
        throw ValidationError("diagonal entries must be finite");
    }
}

Vec DiagonalOp::apply(const Vec& x) const {
    return d_.cwiseProduct(x);
}

Vec DiagonalOp::apply_adjoint(const Vec& y) const {
    return d_.conjugate().cwiseProduct(y);
}

DenseOp::DenseOp(Mat m)
    : Operator({m.rows(), m.cols()}, true), m_(std::move(m)) {
    if (!m_.allFinite()) {
        throw ValidationError("dense matrix entries must be finite");
    }
}

RestrictionOp::RestrictionOp(Index model_size, std::vector<Index> indices)
    : Operator({static_cast<Index>(indices.size()), model_size}, false),
      indices_(std::move(indices)) {
    Index prev = -1;
    for (Index i : indices_) {
        if (i <= prev) {
            throw ValidationError("restriction indices must be strictly increasing");
        }
        if (i < 0 || i >= model_size) {
            throw ValidationError("restriction index " + std::to_string(i) +
                                  " out of range [0, " + std::to_string(model_size) + ")");
        }
        prev = i;
    }
}

Vec RestrictionOp::apply(const Vec& x) const {
    Vec y(rows());
    for (Index i = 0; i < rows(); ++i) y[i] = x[indices_[i]];
    return y;
}

Vec RestrictionOp::apply_adjoint(const Vec& y) const {
    Vec x = Vec::Zero(cols());
    for (Index i = 0; i < rows(); ++i) x[indices_[i]] = y[i];
    return x;
}

FirstDerivativeOp::FirstDerivativeOp(Index n, double dx)
    : Operator({n - 1, n}, false), dx_(dx) {
    if (n < 2) throw ValidationError("first derivative requires n >= 2");
    if (!(dx > 0)) throw ValidationError("dx must be positive");
}

Vec FirstDerivativeOp::apply(const Vec& x) const {
    return (x.tail(rows()) - x.head(rows())) / dx_;
}

// Transpose of the (N-1) x N bidiagonal stencil matrix.
Vec FirstDerivativeOp::apply_adjoint(const Vec& y) const {
    const Index n = cols();
    Vec x(n);
    x[0] = -y[0] / dx_;
    for (Index i = 1; i < n - 1; ++i) x[i] = (y[i - 1] - y[i]) / dx_;
    x[n - 1] = y[n - 2] / dx_;
    return x;
}

SecondDerivativeOp::SecondDerivativeOp(Index n, double dx)
    : Operator({n - 2, n}, false), dx_(dx) {
    if (n < 3) throw ValidationError("second derivative requires n >= 3");
    if (!(dx > 0)) throw ValidationError("dx must be positive");
}

Vec SecondDerivativeOp::apply(const Vec& x) const {
    const Index m = rows();
    const double s = 1.0 / (dx_ * dx_);
    Vec y(m);
    for (Index i = 0; i < m; ++i) y[i] = s * (x[i] - 2.0 * x[i + 1] + x[i + 2]);
    return y;
}

Vec SecondDerivativeOp::apply_adjoint(const Vec& y) const {
    const Index n = cols();
    const double s = 1.0 / (dx_ * dx_);
    Vec x = Vec::Zero(n);
    for (Index i = 0; i < rows(); ++i) {
        x[i] += s * y[i];
        x[i + 1] -= 2.0 * s * y[i];
        x[i + 2] += s * y[i];
    }
    return x;
}

DftOp::DftOp(Index n) : Operator({n, n}, false) {
    if (n < 1 || !std::has_single_bit(static_cast<unsigned long long>(n))) {
        throw ValidationError("dft length must be a power of two, got " + std::to_string(n));
    }
    twiddles_.resize(static_cast<size_t>(n / 2));
    for (Index k = 0; k < n / 2; ++k) {
        const double phi = -2.0 * std::numbers::pi * double(k) / double(n);
        twiddles_[static_cast<size_t>(k)] = Complex(std::cos(phi), std::sin(phi));
    }
}

Vec DftOp::transform(const Vec& x, bool inverse) const {
    const Index n = rows();
    Vec a = x;
    // Bit-reversal permutation.
    for (Index i = 1, j = 0; i < n; ++i) {
        Index bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (Index len = 2; len <= n; len <<= 1) {
        const Index stride = n / len;
        for (Index i = 0; i < n; i += len) {
            for (Index k = 0; k < len / 2; ++k) {
                Complex w = twiddles_[static_cast<size_t>(k * stride)];
                if (inverse) w = std::conj(w);
                const Complex u = a[i + k];
                const Complex t = w * a[i + k + len / 2];
                a[i + k] = u + t;
                a[i + k + len / 2] = u - t;
            }
        }
    }
    return a / std::sqrt(double(n));
}

Vec DftOp::apply(const Vec& x) const { return transform(x, false); }
Vec DftOp::apply_adjoint(const Vec& y) const { return transform(y, true); }

OpPtr identity(Index n) { return std::make_shared<IdentityOp>(n); }
OpPtr diagonal(Vec d) { return std::make_shared<DiagonalOp>(std::move(d)); }
OpPtr dense(Mat m) { return std::make_shared<DenseOp>(std::move(m)); }
OpPtr restriction(Index model_size, std::vector<Index> indices) {
    return std::make_shared<RestrictionOp>(model_size, std::move(indices));
}
OpPtr first_derivative(Index n, double dx) {
    return std::make_shared<FirstDerivativeOp>(n, dx);
}
OpPtr second_derivative(Index n, double dx) {
    return std::make_shared<SecondDerivativeOp>(n, dx);
}
OpPtr dft(Index n) { return std::make_shared<DftOp>(n); }

}  // namespace opkit
