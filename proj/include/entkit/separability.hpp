// Partial transposition, the Peres-Horodecki test, product-vector
// subtraction, best separable approximations, edge-state search, and the
// constructive low-rank separability check.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entkit/states.hpp"

namespace entkit {

enum class Side { A, B };

// <i,k|rho^TA|j,l> = <j,k|rho|i,l> (side A); analogous for side B.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, Dims dims, Side side = Side::A);

struct PptResult {
    bool ppt = false;
    double min_eigenvalue = 0.0;
    CVector eigenvector;  // of the minimal eigenvalue of rho^TA
};
PptResult is_ppt(const DensityMatrix& rho, double tol = 1e-9);

// Largest lambda such that rho - lambda |e,f><e,f| stays PSD (and, in
// ppt_constrained mode, its partial transpose after the matching
// subtraction of |e*,f><e*,f|). A product vector outside the range
// yields lambda_max = 0 with in_range = false rather than an error.
struct SubtractionResult {
    double lambda_max = 0.0;
    bool in_range = false;
    bool degenerate = false;  // lambda_max ~ 1, nothing remains
    std::optional<DensityMatrix> remainder;
};
SubtractionResult max_subtractable_weight(const DensityMatrix& rho, const ProductVector& pv,
                                          bool ppt_constrained, double tol = 1e-9);

struct WeightedProduct {
    double weight = 0.0;
    ProductVector pv;
};

// rho = lambda * sigma + (1 - lambda) * delta with sigma the recorded
// product mixture (weights sum to one) and delta the edge part.
struct Decomposition {
    double lambda = 0.0;
    std::vector<WeightedProduct> separable_part;
    std::optional<DensityMatrix> edge_part;
    bool budget_exhausted = false;
    ComplexMatrix separable_matrix(Dims dims) const;
    ComplexMatrix reassemble(Dims dims) const;
};

Decomposition best_separable_approximation(const DensityMatrix& rho, bool ppt_constrained,
                                           std::size_t budget, std::uint64_t seed);

struct EdgeSearchResult {
    bool is_edge = false;  // heuristic: no qualifying vector found within budget
    std::optional<ProductVector> found;
    std::size_t restarts_used = 0;
};
EdgeSearchResult is_edge_state(const DensityMatrix& rho, std::size_t budget,
                               std::uint64_t seed);

enum class VerdictKind { Separable, Entangled, PptUndecided };

struct SeparabilityVerdict {
    VerdictKind kind = VerdictKind::PptUndecided;
    std::optional<Decomposition> certificate;  // Separable
    std::optional<PptResult> nppt_evidence;    // Entangled
    std::string note;
};

// Theorem-1 classification for 2x2 and 2x3 systems.
SeparabilityVerdict classify_low_dim(const DensityMatrix& rho, std::size_t budget = 20000,
                                     std::uint64_t seed = 1);

// Constructive separability for PPT states of low rank (kernel-orthogonality
// product systems); PPTUndecided when the conditions are not met or the
// system degenerates.
SeparabilityVerdict low_rank_separability(const DensityMatrix& rho, std::uint64_t seed = 1,
                                          std::size_t budget = 20000);

}  // namespace entkit
