#include "opkit/operator.hpp"

#include <utility>

namespace opkit {

namespace {

class SumOp final : public Operator {
public:
    SumOp(OpPtr left, OpPtr right)
        : Operator(left->shape(), false),
          left_(std::move(left)), right_(std::move(right)) {}

    Vec apply(const Vec& x) const override {
        return left_->apply(x) + right_->apply(x);
    }
    Vec apply_adjoint(const Vec& y) const override {
        return left_->apply_adjoint(y) + right_->apply_adjoint(y);
    }

private:
    OpPtr left_, right_;
};

class ScaleOp final : public Operator {
public:
    ScaleOp(Complex alpha, OpPtr inner)
        : Operator(inner->shape(), false),
          alpha_(alpha), inner_(std::move(inner)) {}

    Vec apply(const Vec& x) const override {
        return alpha_ * inner_->apply(x);
    }
    Vec apply_adjoint(const Vec& y) const override {
        return std::conj(alpha_) * inner_->apply_adjoint(y);
    }

private:
    Complex alpha_;
    OpPtr inner_;
};

class ComposeOp final : public Operator {
public:
    ComposeOp(OpPtr left, OpPtr right)
        : Operator({left->rows(), right->cols()}, false),
          left_(std::move(left)), right_(std::move(right)) {}

    Vec apply(const Vec& x) const override {
        return left_->apply(right_->apply(x));
    }
    Vec apply_adjoint(const Vec& y) const override {
        return right_->apply_adjoint(left_->apply_adjoint(y));
    }

private:
    OpPtr left_, right_;
};

class AdjointOp final : public Operator {
public:
    explicit AdjointOp(OpPtr inner)
        : Operator({inner->cols(), inner->rows()}, false),
          inner_(std::move(inner)) {}

    Vec apply(const Vec& x) const override { return inner_->apply_adjoint(x); }
    Vec apply_adjoint(const Vec& y) const override { return inner_->apply(y); }

private:
    OpPtr inner_;
};

Shape vstack_shape(const std::vector<OpPtr>& children) {
    if (children.empty()) throw ShapeError("vstack requires at least one child");
    Index rows = 0;
    const Index cols = children.front()->cols();
    for (const auto& c : children) {
        if (c->cols() != cols) {
            throw ShapeError("vstack children disagree on ncols: " +
                             to_string(c->shape()) + " vs cols=" + std::to_string(cols));
        }
        rows += c->rows();
    }
    return {rows, cols};
}

class VStackOp final : public Operator {
public:
    explicit VStackOp(std::vector<OpPtr> children)
        : Operator(vstack_shape(children), false),
          children_(std::move(children)) {}

    Vec apply(const Vec& x) const override {
        Vec y(rows());
        Index at = 0;
        for (const auto& c : children_) {
            y.segment(at, c->rows()) = c->apply(x);
            at += c->rows();
        }
        return y;
    }
    Vec apply_adjoint(const Vec& y) const override {
        Vec x = Vec::Zero(cols());
        Index at = 0;
        for (const auto& c : children_) {
            x += c->apply_adjoint(y.segment(at, c->rows()));
            at += c->rows();
        }
        return x;
    }

private:
    std::vector<OpPtr> children_;
};

Shape hstack_shape(const std::vector<OpPtr>& children) {
    if (children.empty()) throw ShapeError("hstack requires at least one child");
    Index cols = 0;
    const Index rows = children.front()->rows();
    for (const auto& c : children) {
        if (c->rows() != rows) {
            throw ShapeError("hstack children disagree on nrows: " +
                             to_string(c->shape()) + " vs rows=" + std::to_string(rows));
        }
        cols += c->cols();
    }
    return {rows, cols};
}

// Forward slices the input contiguously in child order; adjoint concatenates.
class HStackOp final : public Operator {
public:
    explicit HStackOp(std::vector<OpPtr> children)
        : Operator(hstack_shape(children), false),
          children_(std::move(children)) {}

    Vec apply(const Vec& x) const override {
        Vec y = Vec::Zero(rows());
        Index at = 0;
        for (const auto& c : children_) {
            y += c->apply(x.segment(at, c->cols()));
            at += c->cols();
        }
        return y;
    }
    Vec apply_adjoint(const Vec& y) const override {
        Vec x(cols());
        Index at = 0;
        for (const auto& c : children_) {
            x.segment(at, c->cols()) = c->apply_adjoint(y);
            at += c->cols();
        }
        return x;
    }

private:
    std::vector<OpPtr> children_;
};

void check_input(const OpPtr& op, const Vec& v, Index expected, const char* what) {
    if (!op) throw std::invalid_argument("null operator");
    if (v.size() != expected) {
        throw ShapeError(std::string(what) + ": vector length " +
                         std::to_string(v.size()) + " does not match operator shape " +
                         to_string(op->shape()));
    }
    if (!all_finite(v)) {
        throw ValidationError(std::string(what) + ": input vector contains NaN or Inf");
    }
}

}  // namespace

Vec forward(const OpPtr& op, const Vec& x) {
    check_input(op, x, op ? op->cols() : 0, "forward");
    return op->apply(x);
}

Vec adjoint(const OpPtr& op, const Vec& y) {
    check_input(op, y, op ? op->rows() : 0, "adjoint");
    return op->apply_adjoint(y);
}

OpPtr op_sum(OpPtr left, OpPtr right) {
    if (!(left->shape() == right->shape())) {
        throw ShapeError("sum of incompatible shapes " + to_string(left->shape()) +
                         " and " + to_string(right->shape()));
    }
    return std::make_shared<SumOp>(std::move(left), std::move(right));
}

OpPtr op_scale(Complex alpha, OpPtr inner) {
    return std::make_shared<ScaleOp>(alpha, std::move(inner));
}

OpPtr op_compose(OpPtr left, OpPtr right) {
    if (left->cols() != right->rows()) {
        throw ShapeError("compose of incompatible shapes " + to_string(left->shape()) +
                         " and " + to_string(right->shape()));
    }
    return std::make_shared<ComposeOp>(std::move(left), std::move(right));
}

OpPtr op_adjoint(OpPtr inner) {
    return std::make_shared<AdjointOp>(std::move(inner));
}

OpPtr op_vstack(std::vector<OpPtr> children) {
    return std::make_shared<VStackOp>(std::move(children));
}

OpPtr op_hstack(std::vector<OpPtr> children) {
    return std::make_shared<HStackOp>(std::move(children));
}

Mat materialize(const OpPtr& op, Index cap) {
    const Index n = op->rows();
    const Index m = op->cols();
    if (n * m > cap) {
        throw MaterializeCapError("materialize refused: " + to_string(op->shape()) +
                                  " has " + std::to_string(n * m) +
                                  " entries, cap is " + std::to_string(cap));
    }
    Mat dense(n, m);
    Vec e = Vec::Zero(m);
    for (Index j = 0; j < m; ++j) {
        e[j] = 1.0;
        dense.col(j) = op->apply(e);
        e[j] = 0.0;
    }
    return dense;
}

}  // namespace opkit
