// Bipartite density matrices, pure states, product vectors, and the named
// state families used throughout the toolkit.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "entkit/complex_matrix.hpp"
#include "entkit/random.hpp"

namespace entkit {

struct Dims {
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t total() const { return m * n; }
    Dims swapped() const { return Dims{n, m}; }
    bool operator==(const Dims&) const = default;
};

// Hermitian, PSD, trace-one operator with bipartite dimension labels.
// Construction validates the invariants and throws InvariantViolation.
class DensityMatrix {
public:
    DensityMatrix(Dims dims, ComplexMatrix rho, double psd_tol = 1e-9);

    // Divides by the trace before validating; for matrices assembled from
    // arithmetic that is exact only up to rounding.
    static DensityMatrix normalized(Dims dims, ComplexMatrix rho, double psd_tol = 1e-9);

    const Dims& dims() const { return dims_; }
    const ComplexMatrix& matrix() const { return rho_; }
    std::size_t rank(double rank_tol = 1e-9) const;
    std::vector<CVector> kernel(double rank_tol = 1e-9) const;

private:
    Dims dims_;
    ComplexMatrix rho_;
};

class PureState {
public:
    PureState(Dims dims, CVector amplitudes);
    const Dims& dims() const { return dims_; }
    const CVector& amplitudes() const { return amp_; }
    DensityMatrix to_density() const;

private:
    Dims dims_;
    CVector amp_;
};

struct ProductVector {
    CVector e;  // Alice, unit norm
    CVector f;  // Bob, unit norm
    CVector joint() const { return tensor(e, f); }
};

// |Psi_max> = sum_i |i,i> / sqrt(M) on M x M.
PureState maximally_entangled(std::size_t m);

// lambda * P_anti/tr + (1-lambda) * P_sym/tr on d x d.
DensityMatrix sym_antisym_family(std::size_t d, double lambda);

// p |Psi-><Psi-| + (1-p) I/4.
DensityMatrix werner_2x2(double p);

DensityMatrix maximally_mixed(Dims dims);

// Extra families, not taken from any publication, used as test generators.
DensityMatrix isotropic_state(std::size_t d, double fidelity);
// PPT entangled 3x3 state built from the five-vector unextendible product
// basis of "tiles" type; an edge state with no product vector in its range.
DensityMatrix tiles_upb_state();

ComplexMatrix swap_operator(std::size_t d);
DensityMatrix swap_parties(const DensityMatrix& rho);
DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& ua,
                                  const ComplexMatrix& ub);
ComplexMatrix reduced_state_a(const ComplexMatrix& rho, Dims dims);
ComplexMatrix reduced_state_b(const ComplexMatrix& rho, Dims dims);

bool range_contains_product(const DensityMatrix& rho, const ProductVector& pv,
                            double tol = 1e-8);

struct SchmidtDecomposition {
    std::vector<double> coefficients;  // descending, sum of squares 1
    std::vector<CVector> left;
    std::vector<CVector> right;
    std::size_t rank(double tol = 1e-9) const;
    CVector reconstruct() const;
};
SchmidtDecomposition schmidt_decomposition(const PureState& psi);

// Seeded sampling (Ginibre construction; truncated for fixed rank).
DensityMatrix random_density(Dims dims, std::size_t rank, Rng& rng);
PureState random_pure_state(Dims dims, Rng& rng);
ProductVector random_product_vector(Dims dims, Rng& rng);
// Mixture of n_terms product projectors with uniform-simplex weights;
// returns the generating terms when requested.
DensityMatrix random_separable(Dims dims, std::size_t n_terms, Rng& rng,
                               std::vector<std::pair<double, ProductVector>>* terms = nullptr);

}  // namespace entkit
