#include "entkit/states.hpp"

#include <cmath>
#include <string>

#include "entkit/eigen.hpp"
#include "entkit/errors.hpp"

namespace entkit {

DensityMatrix::DensityMatrix(Dims dims, ComplexMatrix rho, double psd_tol)
    : dims_(dims), rho_(std::move(rho)) {
    if (dims_.m < 2 || dims_.n < 2)
        throw InvariantViolation("dims: both local dimensions must be at least 2");
    if (!rho_.square() || rho_.rows() != dims_.total())
        throw InvariantViolation("matrix size does not match dims " +
                                 std::to_string(dims_.m) + "x" + std::to_string(dims_.n));
    const double scale = std::max(1.0, rho_.max_abs());
    if (rho_.hermiticity_violation() > 1e-10 * scale)
        throw InvariantViolation("hermiticity: rho != rho^dagger beyond 1e-10");
    if (std::abs(rho_.trace() - 1.0) > 1e-10)
        throw InvariantViolation("trace: |tr rho - 1| exceeds 1e-10");
    if (min_eigenvalue(rho_) < -psd_tol)
        throw InvariantViolation("positivity: min eigenvalue below -" +
                                 std::to_string(psd_tol));
}

DensityMatrix DensityMatrix::normalized(Dims dims, ComplexMatrix rho, double psd_tol) {
    const double tr = rho.trace().real();
    if (tr <= 0.0) throw InvariantViolation("trace: nonpositive trace");
    rho *= 1.0 / tr;
    return DensityMatrix(dims, std::move(rho), psd_tol);
}

std::size_t DensityMatrix::rank(double rank_tol) const {
    return hermitian_rank(rho_, rank_tol);
}

std::vector<CVector> DensityMatrix::kernel(double rank_tol) const {
    return kernel_basis(rho_, rank_tol);
}

PureState::PureState(Dims dims, CVector amplitudes)
    : dims_(dims), amp_(std::move(amplitudes)) {
    if (amp_.size() != dims_.total())
        throw InvariantViolation("amplitude count does not match dims");
    if (std::abs(norm(amp_) - 1.0) > 1e-12)
        throw InvariantViolation("pure state norm differs from 1 beyond 1e-12");
}

DensityMatrix PureState::to_density() const {
    return DensityMatrix::normalized(dims_, outer(amp_, amp_));
}

PureState maximally_entangled(std::size_t m) {
    if (m < 2) throw DimensionOutOfScope("maximally_entangled requires M >= 2");
    CVector amp(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) amp[i * m + i] = 1.0 / std::sqrt(double(m));
    return PureState(Dims{m, m}, std::move(amp));
}

ComplexMatrix swap_operator(std::size_t d) {
    ComplexMatrix s(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) s(i * d + k, k * d + i) = 1.0;
    return s;
}

DensityMatrix sym_antisym_family(std::size_t d, double lambda) {
    if (d < 2) throw DimensionOutOfScope("sym_antisym_family requires d >= 2");
    const ComplexMatrix id = ComplexMatrix::identity(d * d);
    const ComplexMatrix s = swap_operator(d);
    ComplexMatrix anti = id - s;
    anti *= 0.5;
    ComplexMatrix sym = id + s;
    sym *= 0.5;
    const double tr_anti = double(d * (d - 1)) / 2.0;
    const double tr_sym = double(d * (d + 1)) / 2.0;
    anti *= lambda / tr_anti;
    sym *= (1.0 - lambda) / tr_sym;
    return DensityMatrix(Dims{d, d}, anti + sym);
}

DensityMatrix werner_2x2(double p) {
    CVector singlet(4, 0.0);
    singlet[1] = 1.0 / std::sqrt(2.0);
    singlet[2] = -1.0 / std::sqrt(2.0);
    ComplexMatrix rho = outer(singlet, singlet);
    rho *= p;
    ComplexMatrix id = ComplexMatrix::identity(4);
    id *= (1.0 - p) / 4.0;
    return DensityMatrix(Dims{2, 2}, rho + id);
}

DensityMatrix maximally_mixed(Dims dims) {
    ComplexMatrix id = ComplexMatrix::identity(dims.total());
    id *= 1.0 / double(dims.total());
    return DensityMatrix(dims, id);
}

DensityMatrix isotropic_state(std::size_t d, double fidelity) {
    const PureState phi = maximally_entangled(d);
    ComplexMatrix p = outer(phi.amplitudes(), phi.amplitudes());
    ComplexMatrix rest = ComplexMatrix::identity(d * d) - p;
    p *= fidelity;
    rest *= (1.0 - fidelity) / double(d * d - 1);
    return DensityMatrix(Dims{d, d}, p + rest);
}

DensityMatrix tiles_upb_state() {
    auto ket = [](std::initializer_list<double> xs) {
        CVector v;
        for (double x : xs) v.push_back(x);
        normalize(v);
        return v;
    };
    const CVector k0 = ket({1, 0, 0});
    const CVector k1 = ket({0, 1, 0});
    const CVector k2 = ket({0, 0, 1});
    const CVector m01 = ket({1, -1, 0});
    const CVector m12 = ket({0, 1, -1});
    const CVector all = ket({1, 1, 1});
    const std::vector<std::pair<CVector, CVector>> upb = {
        {k0, m01}, {k2, m12}, {m01, k2}, {m12, k0}, {all, all}};
    ComplexMatrix acc = ComplexMatrix::identity(9);
    for (const auto& [e, f] : upb) acc -= projector(tensor(e, f));
    acc *= 0.25;
    return DensityMatrix(Dims{3, 3}, acc);
}

DensityMatrix swap_parties(const DensityMatrix& rho) {
    const Dims d = rho.dims();
    ComplexMatrix out(d.total(), d.total());
    for (std::size_t i = 0; i < d.m; ++i)
        for (std::size_t k = 0; k < d.n; ++k)
            for (std::size_t j = 0; j < d.m; ++j)
                for (std::size_t l = 0; l < d.n; ++l)
                    out(k * d.m + i, l * d.m + j) = rho.matrix()(i * d.n + k, j * d.n + l);
    return DensityMatrix(d.swapped(), std::move(out));
}

DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& ua,
                                  const ComplexMatrix& ub) {
    const ComplexMatrix u = kron(ua, ub);
    return DensityMatrix::normalized(rho.dims(), u * rho.matrix() * u.adjoint());
}

ComplexMatrix reduced_state_a(const ComplexMatrix& rho, Dims dims) {
    ComplexMatrix out(dims.m, dims.m);
    for (std::size_t i = 0; i < dims.m; ++i)
        for (std::size_t j = 0; j < dims.m; ++j) {
            cdouble s = 0.0;
            for (std::size_t k = 0; k < dims.n; ++k) s += rho(i * dims.n + k, j * dims.n + k);
            out(i, j) = s;
        }
    return out;
}

ComplexMatrix reduced_state_b(const ComplexMatrix& rho, Dims dims) {
    ComplexMatrix out(dims.n, dims.n);
    for (std::size_t k = 0; k < dims.n; ++k)
        for (std::size_t l = 0; l < dims.n; ++l) {
            cdouble s = 0.0;
            for (std::size_t i = 0; i < dims.m; ++i) s += rho(i * dims.n + k, i * dims.n + l);
            out(k, l) = s;
        }
    return out;
}

bool range_contains_product(const DensityMatrix& rho, const ProductVector& pv, double tol) {
    const CVector joint = pv.joint();
    for (const auto& k : rho.kernel())
        if (std::abs(inner(k, joint)) > tol) return false;
    return true;
}

std::size_t SchmidtDecomposition::rank(double tol) const {
    std::size_t r = 0;
    for (double c : coefficients)
        if (c > tol) ++r;
    return r;
}

CVector SchmidtDecomposition::reconstruct() const {
    CVector out(left.empty() ? 0 : left.front().size() * right.front().size(), 0.0);
    for (std::size_t k = 0; k < coefficients.size(); ++k)
        axpy(coefficients[k], tensor(left[k], right[k]), out);
    return out;
}

SchmidtDecomposition schmidt_decomposition(const PureState& psi) {
    const Dims d = psi.dims();
    ComplexMatrix c(d.m, d.n);
    for (std::size_t i = 0; i < d.m; ++i)
        for (std::size_t k = 0; k < d.n; ++k) c(i, k) = psi.amplitudes()[i * d.n + k];
    const Svd svd = singular_value_decomposition(c);
    SchmidtDecomposition out;
    const std::size_t r = std::min(d.m, d.n);
    for (std::size_t k = 0; k < r; ++k) {
        out.coefficients.push_back(svd.singular[k]);
        out.left.push_back(svd.u.column(k));
        out.right.push_back(conjugate(svd.v.column(k)));
    }
    return out;
}

DensityMatrix random_density(Dims dims, std::size_t rank, Rng& rng) {
    if (rank == 0 || rank > dims.total())
        throw DimensionOutOfScope("rank must lie in [1, M*N]");
    const ComplexMatrix g = random_ginibre(dims.total(), rank, rng);
    return DensityMatrix::normalized(dims, g * g.adjoint());
}

PureState random_pure_state(Dims dims, Rng& rng) {
    return PureState(dims, random_unit_vector(dims.total(), rng));
}

ProductVector random_product_vector(Dims dims, Rng& rng) {
    return ProductVector{random_unit_vector(dims.m, rng), random_unit_vector(dims.n, rng)};
}

DensityMatrix random_separable(Dims dims, std::size_t n_terms, Rng& rng,
                               std::vector<std::pair<double, ProductVector>>* terms) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(n_terms);
    double total = 0.0;
    for (auto& x : w) {
        x = expo(rng) + 1e-3;  // keep every term genuinely present
        total += x;
    }
    ComplexMatrix acc(dims.total(), dims.total());
    for (std::size_t t = 0; t < n_terms; ++t) {
        const ProductVector pv = random_product_vector(dims, rng);
        ComplexMatrix p = projector(pv.joint());
        p *= w[t] / total;
        acc += p;
        if (terms) terms->push_back({w[t] / total, pv});
    }
    return DensityMatrix(dims, std::move(acc));
}

}  // namespace entkit
