// Quantum correlations of two identical particles: Slater decomposition
// and rank, pure and mixed fermionic concurrence, the epsilon-contraction
// rank-one criterion, and the bosonic analogue.

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "entkit/complex_matrix.hpp"

namespace entkit {

// Two-fermion pure state: antisymmetric coefficient matrix with
// sum |w_ij|^2 = 1/2 (unit state norm).
class FermionState {
public:
    FermionState(std::size_t n_modes, ComplexMatrix w);
    static FermionState unnormalized(std::size_t n_modes, ComplexMatrix w);

    std::size_t n_modes() const { return n_; }
    const ComplexMatrix& coefficients() const { return w_; }
    // Amplitudes on the ordered-pair basis (i<j), lexicographic.
    CVector pair_amplitudes() const;

private:
    FermionState() = default;
    std::size_t n_ = 0;
    ComplexMatrix w_;
};

// Two-boson pure state: symmetric coefficient matrix, sum |v_ij|^2 = 1/2.
class BosonState {
public:
    BosonState(std::size_t n_modes, ComplexMatrix v);
    std::size_t n_modes() const { return n_; }
    const ComplexMatrix& coefficients() const { return v_; }

private:
    std::size_t n_ = 0;
    ComplexMatrix v_;
};

// Mixed two-fermion state on four modes, held as a density operator on
// the six-dimensional antisymmetric space with lexicographic pair basis
// (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).
class MixedFermionState {
public:
    explicit MixedFermionState(ComplexMatrix rho6);
    static MixedFermionState from_ensemble(
        const std::vector<std::pair<double, FermionState>>& ensemble);
    const ComplexMatrix& matrix() const { return rho_; }

private:
    ComplexMatrix rho_;
};

struct SlaterDecomposition {
    ComplexMatrix unitary;
    std::vector<double> z;  // descending; sum of squares 1/4 for unit states
};

SlaterDecomposition slater_decompose(const FermionState& state);
std::size_t slater_rank(const FermionState& state, double tol = 1e-8);

// Four-mode concurrence |8 Pf(w)|; the unique scaling of the
// epsilon-contraction that reaches 1 at maximal Slater rank under the
// tr(w* w) = -1/2 normalization.
double fermionic_concurrence(const FermionState& state);

cdouble pfaffian4(const ComplexMatrix& w);

// Dual coefficient matrix w~_ij = sum_kl eps^{ijkl} conj(w_kl); the
// returned state is unnormalized.
FermionState dual_state(const FermionState& state);

enum class TildeConvention { SqrtEigenvalues, PlainEigenvalues };

// Wootters-style mixed concurrence on four modes. The sqrt convention
// with the norm-preserving tilde map is the default; it is the one that
// matches the pure-state concurrence.
double mixed_fermionic_concurrence(const MixedFermionState& rho,
                                   TildeConvention convention = TildeConvention::SqrtEigenvalues);

// All 4x4 sub-Pfaffians vanish <=> Slater rank one, any mode count.
bool slater_rank_one_test(const FermionState& state, double tol = 1e-8);

struct BosonicDecomposition {
    ComplexMatrix unitary;
    std::vector<double> d;  // descending
};

BosonicDecomposition bosonic_decompose(const BosonState& state);
std::size_t bosonic_slater_rank(const BosonState& state, double tol = 1e-8);

// Two-mode bosonic concurrence 4|det v|, the analogue of the four-mode
// fermionic case.
double bosonic_concurrence(const BosonState& state);

}  // namespace entkit
