#pragma once

// Random composite operator trees for property tests. Given a target shape,
// picks a combinator or a leaf; leaves prefer the structured kinds whenever
// the shape allows them.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "opkit/leaf_ops.hpp"

namespace opkit::testing {

inline Mat random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

inline Vec random_vector(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(n);
    for (Index i = 0; i < n; ++i) v[i] = Complex(gauss(rng), gauss(rng));
    return v;
}

inline bool is_pow2(Index n) { return n >= 1 && (n & (n - 1)) == 0; }

inline OpPtr random_leaf(Index rows, Index cols, std::mt19937_64& rng) {
    std::vector<int> kinds = {0};  // dense always fits
    if (rows == cols) {
        kinds.push_back(1);  // identity
        kinds.push_back(2);  // diagonal
        if (is_pow2(rows)) kinds.push_back(3);  // dft
    }
    if (rows < cols) kinds.push_back(4);                    // restriction
    if (rows == cols - 1 && cols >= 2) kinds.push_back(5);  // deriv1
    if (rows == cols - 2 && cols >= 3) kinds.push_back(6);  // deriv2
    switch (kinds[std::uniform_int_distribution<size_t>(0, kinds.size() - 1)(rng)]) {
        case 1: return identity(rows);
        case 2: return diagonal(random_vector(rows, rng));
        case 3: return dft(rows);
        case 4: {
            std::vector<Index> all(static_cast<size_t>(cols));
            std::iota(all.begin(), all.end(), Index(0));
            std::shuffle(all.begin(), all.end(), rng);
            all.resize(static_cast<size_t>(rows));
            std::sort(all.begin(), all.end());
            return restriction(cols, std::move(all));
        }
        case 5: return first_derivative(cols, 0.5 + std::uniform_real_distribution<>(0.0, 1.0)(rng));
        case 6: return second_derivative(cols, 0.5 + std::uniform_real_distribution<>(0.0, 1.0)(rng));
        default: return dense(random_matrix(rows, cols, rng));
    }
}

inline OpPtr random_tree(Index rows, Index cols, int depth, std::mt19937_64& rng,
                         Index max_dim = 16) {
    if (depth <= 0) return random_leaf(rows, cols, rng);
    std::uniform_int_distribution<int> pick(0, 6);
    switch (pick(rng)) {
        case 0:
            return op_sum(random_tree(rows, cols, depth - 1, rng, max_dim),
                          random_tree(rows, cols, depth - 1, rng, max_dim));
        case 1: {
            std::normal_distribution<double> gauss(0.0, 1.0);
            return op_scale(Complex(gauss(rng), gauss(rng)),
                            random_tree(rows, cols, depth - 1, rng, max_dim));
        }
        case 2: {
            const Index k = std::uniform_int_distribution<Index>(1, max_dim)(rng);
            return op_compose(random_tree(rows, k, depth - 1, rng, max_dim),
                              random_tree(k, cols, depth - 1, rng, max_dim));
        }
        case 3:
            return op_adjoint(random_tree(cols, rows, depth - 1, rng, max_dim));
        case 4: {
            if (rows < 2) return random_leaf(rows, cols, rng);
            const Index split = std::uniform_int_distribution<Index>(1, rows - 1)(rng);
            return op_vstack({random_tree(split, cols, depth - 1, rng, max_dim),
                              random_tree(rows - split, cols, depth - 1, rng, max_dim)});
        }
        case 5: {
            if (cols < 2) return random_leaf(rows, cols, rng);
            const Index split = std::uniform_int_distribution<Index>(1, cols - 1)(rng);
            return op_hstack({random_tree(rows, split, depth - 1, rng, max_dim),
                              random_tree(rows, cols - split, depth - 1, rng, max_dim)});
        }
        default:
            return random_leaf(rows, cols, rng);
    }
}

}  // namespace opkit::testing
