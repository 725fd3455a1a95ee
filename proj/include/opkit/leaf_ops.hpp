#pragma once

#include <vector>

#include "opkit/operator.hpp"

namespace opkit {

class IdentityOp final : public Operator {
public:
    explicit IdentityOp(Index n) : Operator({n, n}, false) {}

    Vec apply(const Vec& x) const override { return x; }
    Vec apply_adjoint(const Vec& y) const override { return y; }
};

class DiagonalOp final : public Operator {
public:
    explicit DiagonalOp(Vec d);

    Vec apply(const Vec& x) const override;
    Vec apply_adjoint(const Vec& y) const override;

    const Vec& diagonal() const { return d_; }

private:
    Vec d_;
};

/// The only leaf with an explicit matrix representation. Doubles as the dense
/// baseline in benchmarks and as a building block for test oracles.
class DenseOp final : public Operator {
public:
    explicit DenseOp(Mat m);

    Vec apply(const Vec& x) const override { return m_ * x; }
    Vec apply_adjoint(const Vec& y) const override { return m_.adjoint() * y; }

    const Mat& matrix() const { return m_; }

private:
    Mat m_;
};

/// Selects model samples at fixed indices; the adjoint scatters data values
/// back and fills zeros elsewhere. Stores only the index list.
class RestrictionOp final : public Operator {
public:
    RestrictionOp(Index model_size, std::vector<Index> indices);

    Vec apply(const Vec& x) const override;
    Vec apply_adjoint(const Vec& y) const override;

    const std::vector<Index>& indices() const { return indices_; }

private:
    std::vector<Index> indices_;
};

/// Two-point forward difference (x[i+1] - x[i]) / dx, mapping length N to
/// N - 1. Stores only dx.
class FirstDerivativeOp final : public Operator {
public:
    FirstDerivativeOp(Index n, double dx);

    Vec apply(const Vec& x) const override;
    Vec apply_adjoint(const Vec& y) const override;

    double dx() const { return dx_; }

private:
    double dx_;
};

/// Three-point stencil (x[i] - 2 x[i+1] + x[i+2]) / dx^2, length N to N - 2.
class SecondDerivativeOp final : public Operator {
public:
    SecondDerivativeOp(Index n, double dx);

    Vec apply(const Vec& x) const override;
    Vec apply_adjoint(const Vec& y) const override;

    double dx() const { return dx_; }

private:
    double dx_;
};

/// Orthonormal DFT (1/sqrt(N) scaling both ways, so adjoint == inverse).
/// Radix-2 iterative FFT; N must be a power of two. Twiddle table is the only
/// auxiliary state, O(N).
class DftOp final : public Operator {
public:
    explicit DftOp(Index n);

    Vec apply(const Vec& x) const override;
    Vec apply_adjoint(const Vec& y) const override;

    const std::vector<Complex>& twiddles() const { return twiddles_; }

private:
    Vec transform(const Vec& x, bool inverse) const;

    std::vector<Complex> twiddles_;  // e^{-2*pi*i*k/N}, k = 0..N/2-1
};

OpPtr identity(Index n);
OpPtr diagonal(Vec d);
OpPtr dense(Mat m);
OpPtr restriction(Index model_size, std::vector<Index> indices);
OpPtr first_derivative(Index n, double dx = 1.0);
OpPtr second_derivative(Index n, double dx = 1.0);
OpPtr dft(Index n);

}  // namespace opkit
