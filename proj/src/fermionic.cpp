#include "entkit/fermionic.hpp"

#include <algorithm>
#include <cmath>

#include "entkit/eigen.hpp"
#include "entkit/errors.hpp"

namespace entkit {

namespace {

double coefficient_norm_sq(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& x : m.data()) s += std::norm(x);
    return s;
}

// Sign-carrying pairing between complementary index pairs of four modes:
// (0,1)<->(2,3) +, (0,2)<->(1,3) -, (0,3)<->(1,2) +.
ComplexMatrix epsilon_pairing() {
    ComplexMatrix s(6, 6);
    s(0, 5) = 1.0;
    s(5, 0) = 1.0;
    s(1, 4) = -1.0;
    s(4, 1) = -1.0;
    s(2, 3) = 1.0;
    s(3, 2) = 1.0;
    return s;
}

std::vector<std::pair<std::size_t, std::size_t>> pair_basis(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.push_back({i, j});
    return out;
}

}  // namespace

FermionState::FermionState(std::size_t n_modes, ComplexMatrix w) : n_(n_modes), w_(std::move(w)) {
    if (!w_.square() || w_.rows() != n_)
        throw WrongModeCount("coefficient matrix size does not match the mode count");
    if (w_.antisymmetry_violation() > 1e-10 * std::max(1.0, w_.max_abs()))
        throw NotAntisymmetric("fermionic coefficient matrix must be antisymmetric");
    if (std::abs(coefficient_norm_sq(w_) - 0.5) > 1e-10)
        throw InvariantViolation("fermionic normalization tr(w* w) = -1/2 violated");
}

FermionState FermionState::unnormalized(std::size_t n_modes, ComplexMatrix w) {
    if (!w.square() || w.rows() != n_modes)
        throw WrongModeCount("coefficient matrix size does not match the mode count");
    if (w.antisymmetry_violation() > 1e-10 * std::max(1.0, w.max_abs()))
        throw NotAntisymmetric("fermionic coefficient matrix must be antisymmetric");
    FermionState s;
    s.n_ = n_modes;
    s.w_ = std::move(w);
    return s;
}

CVector FermionState::pair_amplitudes() const {
    CVector out;
    for (const auto& [i, j] : pair_basis(n_)) out.push_back(2.0 * w_(i, j));
    return out;
}

BosonState::BosonState(std::size_t n_modes, ComplexMatrix v) : n_(n_modes), v_(std::move(v)) {
    if (!v_.square() || v_.rows() != n_)
        throw WrongModeCount("coefficient matrix size does not match the mode count");
    if (v_.symmetry_violation() > 1e-10 * std::max(1.0, v_.max_abs()))
        throw NotSymmetric("bosonic coefficient matrix must be symmetric");
    if (std::abs(coefficient_norm_sq(v_) - 0.5) > 1e-10)
        throw InvariantViolation("bosonic normalization violated");
}

MixedFermionState::MixedFermionState(ComplexMatrix rho6) : rho_(std::move(rho6)) {
    if (!rho_.square() || rho_.rows() != 6)
        throw NotAState("mixed two-fermion states live on the 6-dim antisymmetric space");
    if (rho_.hermiticity_violation() > 1e-10 * std::max(1.0, rho_.max_abs()))
        throw NotAState("density operator must be hermitian");
    if (std::abs(rho_.trace() - 1.0) > 1e-10) throw NotAState("density operator trace must be 1");
    if (min_eigenvalue(rho_) < -1e-9) throw NotAState("density operator must be PSD");
}

MixedFermionState MixedFermionState::from_ensemble(
    const std::vector<std::pair<double, FermionState>>& ensemble) {
    double total = 0.0;
    ComplexMatrix rho(6, 6);
    for (const auto& [p, state] : ensemble) {
        if (p < 0.0) throw NotAState("ensemble probabilities must be nonnegative");
        if (state.n_modes() != 4) throw WrongModeCount("mixed concurrence needs four modes");
        total += p;
        ComplexMatrix term = projector(state.pair_amplitudes());
        term *= p;
        rho += term;
    }
    if (std::abs(total - 1.0) > 1e-10)
        throw NotAState("ensemble probabilities must sum to one");
    return MixedFermionState(std::move(rho));
}

SlaterDecomposition slater_decompose(const FermionState& state) {
    const auto bd = antisymmetric_block_diagonalize(state.coefficients());
    return SlaterDecomposition{bd.unitary, bd.z};
}

std::size_t slater_rank(const FermionState& state, double tol) {
    const auto sd = slater_decompose(state);
    std::size_t rank = 0;
    for (double z : sd.z)
        if (z > tol) ++rank;
    return rank;
}

cdouble pfaffian4(const ComplexMatrix& w) {
    return w(0, 1) * w(2, 3) - w(0, 2) * w(1, 3) + w(0, 3) * w(1, 2);
}

double fermionic_concurrence(const FermionState& state) {
    if (state.n_modes() != 4)
        throw WrongModeCount("fermionic concurrence is defined for four modes");
    return std::abs(8.0 * pfaffian4(state.coefficients()));
}

FermionState dual_state(const FermionState& state) {
    if (state.n_modes() != 4) throw WrongModeCount("dual state is defined for four modes");
    const ComplexMatrix& w = state.coefficients();
    ComplexMatrix out(4, 4);
    int perm[4] = {0, 1, 2, 3};
    do {
        // Parity of the permutation by counting inversions.
        int inversions = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if (perm[a] > perm[b]) ++inversions;
        const double sign = inversions % 2 == 0 ? 1.0 : -1.0;
        out(perm[0], perm[1]) += sign * std::conj(w(perm[2], perm[3]));
    } while (std::next_permutation(perm, perm + 4));
    return FermionState::unnormalized(4, std::move(out));
}

double mixed_fermionic_concurrence(const MixedFermionState& rho, TildeConvention convention) {
    const ComplexMatrix s = epsilon_pairing();
    const ComplexMatrix tilde = s * rho.matrix().conjugate() * s;
    const ComplexMatrix root = sqrt_psd(rho.matrix());
    ComplexMatrix h = root * tilde * root;
    hermitize(h);
    auto es = hermitian_eigensystem(h);
    std::vector<double> lambdas;
    for (double v : es.values) {
        const double clipped = std::max(0.0, v);
        lambdas.push_back(convention == TildeConvention::SqrtEigenvalues ? std::sqrt(clipped)
                                                                         : clipped);
    }
    std::sort(lambdas.rbegin(), lambdas.rend());
    double rest = 0.0;
    for (std::size_t k = 1; k < lambdas.size(); ++k) rest += lambdas[k];
    return std::max(0.0, lambdas.front() - rest);
}

bool slater_rank_one_test(const FermionState& state, double tol) {
    const std::size_t n = state.n_modes();
    const ComplexMatrix& w = state.coefficients();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d) {
                    const cdouble pf =
                        w(a, b) * w(c, d) - w(a, c) * w(b, d) + w(a, d) * w(b, c);
                    if (std::abs(pf) > tol) return false;
                }
    return true;
}

BosonicDecomposition bosonic_decompose(const BosonState& state) {
    const auto tf = takagi_factorize(state.coefficients());
    return BosonicDecomposition{tf.unitary, tf.d};
}

std::size_t bosonic_slater_rank(const BosonState& state, double tol) {
    const auto bd = bosonic_decompose(state);
    std::size_t rank = 0;
    for (double d : bd.d)
        if (d > tol) ++rank;
    return rank;
}

double bosonic_concurrence(const BosonState& state) {
    if (state.n_modes() != 2)
        throw WrongModeCount("bosonic concurrence is defined for two modes");
    const ComplexMatrix& v = state.coefficients();
    const cdouble det = v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0);
    return 4.0 * std::abs(det);
}

}  // namespace entkit
