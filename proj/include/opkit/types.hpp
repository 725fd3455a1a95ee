#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace opkit {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using Index = Eigen::Index;

// Data-space rows (N) by model-space columns (M).
struct Shape {
    Index rows;
    Index cols;

    friend bool operator==(const Shape&, const Shape&) = default;
};

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline std::string to_string(const Shape& s) {
    return "(" + std::to_string(s.rows) + ", " + std::to_string(s.cols) + ")";
}

inline bool all_finite(const Vec& x) {
    return x.allFinite();
}

}  // namespace opkit
