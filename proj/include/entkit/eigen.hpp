// Eigen- and normal-form solvers for the small dense matrices used here:
// Hermitian eigensystems (cyclic Jacobi), kernels and pseudo-inverses,
// singular values, the antisymmetric block normal form and the Takagi
// factorization of complex symmetric matrices.

#pragma once

#include <cstddef>
#include <vector>

#include "entkit/complex_matrix.hpp"

namespace entkit {

struct Eigensystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // orthonormal columns, same order
};

// Cyclic Jacobi diagonalization. Throws NonHermitian if the symmetry
// violation exceeds herm_tol relative to the largest entry.
Eigensystem hermitian_eigensystem(const ComplexMatrix& a, double herm_tol = 1e-10);

double min_eigenvalue(const ComplexMatrix& hermitian, double herm_tol = 1e-10);

// Orthonormal basis of {v : |Av| <= rank_tol * |A|}; rank_tol relative
// to the largest eigenvalue magnitude.
std::vector<CVector> kernel_basis(const ComplexMatrix& a, double rank_tol = 1e-9);
std::size_t hermitian_rank(const ComplexMatrix& a, double rank_tol = 1e-9);

// Moore-Penrose inverse restricted to the eigenvalue support.
ComplexMatrix pseudo_inverse_psd(const ComplexMatrix& a, double rank_tol = 1e-9);
ComplexMatrix sqrt_psd(const ComplexMatrix& a, double rank_tol = 1e-12);
// Nearest PSD matrix: negative eigenvalues clipped to zero.
ComplexMatrix project_psd(const ComplexMatrix& a);
// Projector onto the span of eigenvectors with |eigenvalue| <= rank_tol*max.
ComplexMatrix kernel_projector(const ComplexMatrix& a, double rank_tol = 1e-9);

struct Svd {
    std::vector<double> singular;  // descending
    ComplexMatrix u;               // left vectors as columns
    ComplexMatrix v;               // right vectors as columns; a = u diag(s) v^dagger
};
Svd singular_value_decomposition(const ComplexMatrix& a);

// w = U J(z) U^T for antisymmetric w, where J(z) is block diagonal with
// 2x2 blocks [[0, z_k], [-z_k, 0]] followed by zeros; z sorted descending.
struct BlockDiagonalization {
    ComplexMatrix unitary;
    std::vector<double> z;
};
BlockDiagonalization antisymmetric_block_diagonalize(const ComplexMatrix& w,
                                                     double tol = 1e-10);

// v = U diag(d) U^T for complex symmetric v, d nonnegative descending.
struct TakagiFactorization {
    ComplexMatrix unitary;
    std::vector<double> d;
};
TakagiFactorization takagi_factorize(const ComplexMatrix& v, double tol = 1e-10);

}  // namespace entkit
