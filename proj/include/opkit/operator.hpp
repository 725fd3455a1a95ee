#pragma once

#include <memory>
#include <vector>

#include "opkit/types.hpp"

namespace opkit {

/// A linear operator defined by its forward and adjoint actions on vectors.
/// Nodes are immutable after construction and freely shareable across threads;
/// application is pure.
class Operator {
public:
    Operator(Shape shape, bool is_explicit)
        : shape_(shape), explicit_(is_explicit) {
        if (shape.rows < 1 || shape.cols < 1) {
            throw ShapeError("operator shape must be positive, got " + to_string(shape));
        }
    }
    virtual ~Operator() = default;

    Operator(const Operator&) = delete;
    Operator& operator=(const Operator&) = delete;

    Shape shape() const { return shape_; }
    Index rows() const { return shape_.rows; }
    Index cols() const { return shape_.cols; }

    /// True only for leaves carrying a dense matrix representation.
    bool is_explicit() const { return explicit_; }

    /// y = A x. Input length is guaranteed to equal cols() by the caller.
    virtual Vec apply(const Vec& x) const = 0;

    /// x = A^H y. Input length is guaranteed to equal rows() by the caller.
    virtual Vec apply_adjoint(const Vec& y) const = 0;

private:
    Shape shape_;
    bool explicit_;
};

using OpPtr = std::shared_ptr<const Operator>;

/// y = A x, with shape and finiteness checks at the entry point.
Vec forward(const OpPtr& op, const Vec& x);

/// x = A^H y, with shape and finiteness checks at the entry point.
Vec adjoint(const OpPtr& op, const Vec& y);

// Combinators. Shape mismatches are rejected here, at construction time.
OpPtr op_sum(OpPtr left, OpPtr right);
OpPtr op_scale(Complex alpha, OpPtr inner);
OpPtr op_compose(OpPtr left, OpPtr right);
OpPtr op_adjoint(OpPtr inner);
OpPtr op_vstack(std::vector<OpPtr> children);
OpPtr op_hstack(std::vector<OpPtr> children);

inline OpPtr operator+(OpPtr a, OpPtr b) { return op_sum(std::move(a), std::move(b)); }
inline OpPtr operator*(Complex alpha, OpPtr a) { return op_scale(alpha, std::move(a)); }
inline OpPtr operator*(OpPtr a, OpPtr b) { return op_compose(std::move(a), std::move(b)); }

inline constexpr Index kDefaultMaterializeCap = Index(1) << 20;

class MaterializeCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense matrix whose column j is op applied to the j-th basis vector.
/// Refuses operators larger than `cap` entries.
Mat materialize(const OpPtr& op, Index cap = kDefaultMaterializeCap);

}  // namespace opkit
