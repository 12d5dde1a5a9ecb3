// Construction, verification, optimization, and local-projector
// decomposition of entanglement witnesses.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entkit/separability.hpp"
#include "entkit/states.hpp"

namespace entkit {

// Hermitian operator with nonnegative expectation on every product
// vector (certified by randomized search) and, when built for a target,
// strictly negative trace product with it. Stored trace-normalized.
struct Witness {
    ComplexMatrix op;
    Dims dims;
    double sep_floor = 0.0;          // best found min over product vectors
    std::size_t search_restarts = 0;  // budget behind sep_floor
    std::optional<double> detected_value;  // tr(W rho_target) when built for one
};

struct ProductExpectation {
    double value = 0.0;
    ProductVector argmin;
};

// Best found minimum of <e,f|W|e,f> over product vectors; an upper bound
// on the true minimum.
ProductExpectation min_product_expectation(const ComplexMatrix& w, Dims dims,
                                           std::size_t restarts, std::uint64_t seed);
ProductExpectation max_product_expectation(const ComplexMatrix& w, Dims dims,
                                           std::size_t restarts, std::uint64_t seed);

// W = P + Q^TA - eps, with P, Q the kernel projectors of the edge state
// and its partial transpose; eps from the product search, shrunk by a
// safety factor.
Witness canonical_edge_witness(const DensityMatrix& delta, const DensityMatrix& target,
                               std::size_t restarts, std::uint64_t seed);

// W = alpha 1 - |psi><psi| with alpha the squared largest Schmidt
// coefficient.
Witness projector_witness(const PureState& psi, std::size_t restarts = 2000,
                          std::uint64_t seed = 1);

// Subtraction-fixpoint optimization: repeatedly removes product
// projectors with positive expectation while the witness property and
// the detection of every probe state are preserved.
Witness optimize_witness(const Witness& w, const std::vector<DensityMatrix>& probes,
                         std::size_t budget, std::uint64_t seed);

struct PseudoMixtureTerm {
    double c = 0.0;
    CVector a;
    CVector b;
};

// W = sum_i c_i |a_i><a_i| (x) |b_i><b_i| with sum c_i = 1.
struct PseudoMixture {
    std::vector<PseudoMixtureTerm> terms;
    double coefficient_sum() const;
    ComplexMatrix reconstruct(Dims dims) const;
};

PseudoMixture local_decomposition(const Witness& w);

enum class DecomposabilityKind { Decomposable, NonDecomposableCertified, Unknown };

struct DecomposabilityResult {
    DecomposabilityKind kind = DecomposabilityKind::Unknown;
    std::optional<ComplexMatrix> p;  // W = P + Q^TA
    std::optional<ComplexMatrix> q;
    std::optional<DensityMatrix> ppt_state_detected;
    double residual = 0.0;
};

// Alternating-projection split W = P + Q^TA; a PPT state detected by W
// certifies non-decomposability instead.
DecomposabilityResult is_decomposable(const Witness& w, std::size_t budget,
                                      const std::vector<DensityMatrix>& ppt_probes = {});

}  // namespace entkit
