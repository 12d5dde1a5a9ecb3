// Complex polynomial utilities: root finding (Durand-Kerner) and
// coefficient recovery of determinant pencils by interpolation.

#pragma once

#include <vector>

#include "entkit/complex_matrix.hpp"

namespace entkit {

// Coefficients ascending: p(x) = c[0] + c[1] x + ... + c[n] x^n.
// Leading coefficients below drop_tol (relative to the largest) are trimmed.
std::vector<cdouble> trim_polynomial(std::vector<cdouble> coeffs, double drop_tol = 1e-10);

cdouble evaluate_polynomial(const std::vector<cdouble>& coeffs, cdouble x);

// All roots of a trimmed polynomial via Durand-Kerner iteration.
std::vector<cdouble> polynomial_roots(const std::vector<cdouble>& coeffs,
                                      double tol = 1e-13, int max_iter = 400);

// Determinant of a square complex matrix by LU with partial pivoting.
cdouble determinant(ComplexMatrix a);

// Coefficients of p(x) = det(a + x b) for square a, b, recovered by
// evaluation at roots of unity (degree <= n).
std::vector<cdouble> determinant_pencil_coefficients(const ComplexMatrix& a,
                                                     const ComplexMatrix& b);

}  // namespace entkit
