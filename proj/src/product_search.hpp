// Internal: alternating optimization of quadratic forms over product
// vectors |e,f>, optionally with the conjugated-Alice form |e*,f> and
// linear range conditions taken from operator kernels.

#pragma once

#include <optional>
#include <vector>

#include "entkit/complex_matrix.hpp"
#include "entkit/random.hpp"
#include "entkit/states.hpp"

namespace entkit::detail {

CVector smallest_eigenvector(const ComplexMatrix& hermitian);
CVector largest_eigenvector(const ComplexMatrix& hermitian);

// value(e,f) = <e,f|G0|e,f> + <e*,f|G1|e*,f>, either term optional.
struct ProductObjective {
    const ComplexMatrix* g_direct = nullptr;
    const ComplexMatrix* g_conj = nullptr;
    Dims dims;

    double value(const ProductVector& pv) const;
    ComplexMatrix bob_matrix(const CVector& e) const;
    ComplexMatrix alice_matrix(const CVector& f) const;
};

struct ProductSearchResult {
    double value = 0.0;
    ProductVector pv;
    std::size_t iterations_used = 0;
};

ProductSearchResult minimize_product_form(const ProductObjective& objective, Rng& rng,
                                          std::size_t restarts, int iters_per_start,
                                          const std::vector<ProductVector>& warm_starts = {});

// Kernel vectors reshaped to M x N coefficient matrices; they induce the
// linear conditions <k|e,f> = 0 (direct) and <k|e*,f> = 0 (conj side).
struct RangeConditions {
    std::vector<ComplexMatrix> direct;
    std::vector<ComplexMatrix> conj_side;
    bool empty() const { return direct.empty() && conj_side.empty(); }
    std::size_t count() const { return direct.size() + conj_side.size(); }
};

ComplexMatrix reshape_to_matrix(const CVector& v, Dims dims);
RangeConditions make_range_conditions(const std::vector<CVector>& kernel_direct,
                                      const std::vector<CVector>& kernel_conj, Dims dims);

// Condition rows on f for fixed e, and on e for fixed f.
ComplexMatrix f_condition_rows(const RangeConditions& rc, const CVector& e);
ComplexMatrix e_condition_rows(const RangeConditions& rc, const CVector& f);

// Orthonormal basis of {v : rows v = 0} with singular values <= sigma_tol.
std::vector<CVector> null_space(const ComplexMatrix& rows, double sigma_tol = 1e-8);

// Alternating minimization restricted to the feasible manifold: each
// half-step solves the smallest eigenvector of the objective matrix
// projected onto the null space of the condition rows.
std::optional<ProductSearchResult> minimize_feasible_product_form(
    const ProductObjective& objective, const RangeConditions& rc, Rng& rng,
    std::size_t restarts, int iters_per_start,
    const std::vector<ProductVector>& warm_starts = {});

}  // namespace entkit::detail
