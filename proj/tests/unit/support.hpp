#pragma once

#include "ccqed/operator.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

namespace testing {

inline double max_abs(const ccqed::Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double max_diff(const ccqed::Matrix& a, const ccqed::Matrix& b) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    return max_abs(a - b);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

inline ccqed::Matrix random_matrix(std::mt19937_64& rng, Eigen::Index d) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ccqed::Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = ccqed::Complex(u(rng), u(rng));
    }
    return m;
}

}  // namespace testing
