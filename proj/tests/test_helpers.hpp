#pragma once

#include <cmath>

#include "entkit/complex_matrix.hpp"

namespace entkit::testing {

inline double max_entry_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

inline bool is_orthonormal(const ComplexMatrix& columns, double tol) {
    for (std::size_t i = 0; i < columns.cols(); ++i)
        for (std::size_t j = 0; j < columns.cols(); ++j) {
            const cdouble g = inner(columns.column(i), columns.column(j));
            const cdouble want = i == j ? 1.0 : 0.0;
            if (std::abs(g - want) > tol) return false;
        }
    return true;
}

}  // namespace entkit::testing
