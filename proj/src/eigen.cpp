#include "entkit/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "entkit/errors.hpp"

namespace entkit {

namespace {

// One complex Jacobi rotation zeroing A(p,q), accumulating into V.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cdouble apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;
    const cdouble phase = apq / r;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * r);
    double t;
    if (tau >= 0.0)
        t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
    else
        t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        if (k == p || k == q) continue;
        const cdouble akp = a(k, p);
        const cdouble akq = a(k, q);
        a(k, p) = akp * c - akq * s * std::conj(phase);
        a(k, q) = akp * s * phase + akq * c;
        a(p, k) = std::conj(a(k, p));
        a(q, k) = std::conj(a(k, q));
    }
    a(p, p) = app * c * c - 2.0 * r * c * s + aqq * s * s;
    a(q, q) = app * s * s + 2.0 * r * c * s + aqq * c * c;
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    for (std::size_t k = 0; k < v.rows(); ++k) {
        const cdouble vkp = v(k, p);
        const cdouble vkq = v(k, q);
        v(k, p) = vkp * c - vkq * s * std::conj(phase);
        v(k, q) = vkp * s * phase + vkq * c;
    }
}

double offdiagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
}

// Modified Gram-Schmidt; vectors with residual norm below drop_tol are removed.
std::vector<CVector> orthonormalized(std::vector<CVector> basis, double drop_tol) {
    std::vector<CVector> out;
    for (auto& v : basis) {
        for (const auto& u : out) axpy(-inner(u, v), u, v);
        const double n = norm(v);
        if (n > drop_tol) {
            for (auto& x : v) x /= n;
            out.push_back(std::move(v));
        }
    }
    return out;
}

}  // namespace

Eigensystem hermitian_eigensystem(const ComplexMatrix& a, double herm_tol) {
    if (!a.square()) throw NonHermitian("matrix is not square");
    const std::size_t n = a.rows();
    const double scale = a.max_abs();
    if (a.hermiticity_violation() > herm_tol * std::max(1.0, scale))
        throw NonHermitian("hermiticity violated beyond tolerance");

    // Work on the exactly symmetrized matrix.
    ComplexMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        w(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cdouble x = 0.5 * (a(i, j) + std::conj(a(j, i)));
            w(i, j) = x;
            w(j, i) = std::conj(x);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double target = 1e-14 * std::max(w.frobenius_norm(), 1e-300);
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiagonal_norm(w) <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(w(p, q)) > 0.0) jacobi_rotate(w, v, p, q);
    }

    Eigensystem out;
    out.values.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = w(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = diag[order[k]];
        out.vectors.set_column(k, v.column(order[k]));
    }
    return out;
}

double min_eigenvalue(const ComplexMatrix& hermitian, double herm_tol) {
    const auto es = hermitian_eigensystem(hermitian, herm_tol);
    return es.values.empty() ? 0.0 : es.values.front();
}

std::vector<CVector> kernel_basis(const ComplexMatrix& a, double rank_tol) {
    const auto es = hermitian_eigensystem(a);
    double scale = 0.0;
    for (double x : es.values) scale = std::max(scale, std::abs(x));
    std::vector<CVector> out;
    for (std::size_t k = 0; k < es.values.size(); ++k)
        if (std::abs(es.values[k]) <= rank_tol * scale) out.push_back(es.vectors.column(k));
    return out;
}

std::size_t hermitian_rank(const ComplexMatrix& a, double rank_tol) {
    return a.rows() - kernel_basis(a, rank_tol).size();
}

ComplexMatrix pseudo_inverse_psd(const ComplexMatrix& a, double rank_tol) {
    const auto es = hermitian_eigensystem(a);
    double scale = 0.0;
    for (double x : es.values) scale = std::max(scale, std::abs(x));
    ComplexMatrix out(a.rows(), a.rows());
    for (std::size_t k = 0; k < es.values.size(); ++k) {
        if (es.values[k] <= rank_tol * scale) continue;
        const CVector v = es.vectors.column(k);
        ComplexMatrix p = outer(v, v);
        p *= 1.0 / es.values[k];
        out += p;
    }
    return out;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& a, double rank_tol) {
    const auto es = hermitian_eigensystem(a);
    double scale = 0.0;
    for (double x : es.values) scale = std::max(scale, std::abs(x));
    ComplexMatrix out(a.rows(), a.rows());
    for (std::size_t k = 0; k < es.values.size(); ++k) {
        if (es.values[k] <= rank_tol * scale) continue;
        const CVector v = es.vectors.column(k);
        ComplexMatrix p = outer(v, v);
        p *= std::sqrt(es.values[k]);
        out += p;
    }
    return out;
}

ComplexMatrix project_psd(const ComplexMatrix& a) {
    const auto es = hermitian_eigensystem(a);
    ComplexMatrix out(a.rows(), a.rows());
    for (std::size_t k = 0; k < es.values.size(); ++k) {
        if (es.values[k] <= 0.0) continue;
        const CVector v = es.vectors.column(k);
        ComplexMatrix p = outer(v, v);
        p *= es.values[k];
        out += p;
    }
    return out;
}

ComplexMatrix kernel_projector(const ComplexMatrix& a, double rank_tol) {
    ComplexMatrix out(a.rows(), a.rows());
    for (const auto& v : kernel_basis(a, rank_tol)) out += outer(v, v);
    return out;
}

Svd singular_value_decomposition(const ComplexMatrix& a) {
    if (a.rows() < a.cols()) {
        Svd t = singular_value_decomposition(a.adjoint());
        return Svd{t.singular, t.v, t.u};
    }
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const auto es = hermitian_eigensystem(a.adjoint() * a);

    Svd out;
    out.singular.resize(n);
    out.u = ComplexMatrix(m, n);
    out.v = ComplexMatrix(n, n);
    double smax = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = n - 1 - k;  // descending
        const double s = std::sqrt(std::max(0.0, es.values[src]));
        out.singular[k] = s;
        smax = std::max(smax, s);
        out.v.set_column(k, es.vectors.column(src));
    }
    std::vector<CVector> ucols;
    for (std::size_t k = 0; k < n; ++k) {
        if (out.singular[k] > 1e-13 * std::max(smax, 1e-300)) {
            CVector u = a * out.v.column(k);
            for (auto& x : u) x /= out.singular[k];
            ucols.push_back(std::move(u));
        } else {
            ucols.push_back(CVector(m, 0.0));  // completed below
        }
    }
    // Complete left vectors for (near-)zero singular values.
    for (std::size_t k = 0; k < n; ++k) {
        if (norm(ucols[k]) > 0.5) continue;
        for (std::size_t cand = 0; cand < m; ++cand) {
            CVector u(m, 0.0);
            u[cand] = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k && norm(ucols[j]) > 0.5) axpy(-inner(ucols[j], u), ucols[j], u);
            if (norm(u) > 0.3) {
                normalize(u);
                ucols[k] = std::move(u);
                break;
            }
        }
    }
    for (std::size_t k = 0; k < n; ++k) out.u.set_column(k, ucols[k]);
    return out;
}

namespace {

// Eigenvalue clusters of a PSD spectrum, ascending input, processed descending.
struct Cluster {
    double value = 0.0;
    std::vector<CVector> basis;
};

std::vector<Cluster> psd_clusters(const Eigensystem& es, double rel_gap) {
    std::vector<Cluster> clusters;
    const std::size_t n = es.values.size();
    double vmax = 0.0;
    for (double x : es.values) vmax = std::max(vmax, std::abs(x));
    for (std::size_t idx = 0; idx < n; ++idx) {
        const std::size_t k = n - 1 - idx;  // descending
        const double val = std::max(0.0, es.values[k]);
        if (!clusters.empty() &&
            std::abs(clusters.back().value - val) <= rel_gap * std::max(vmax, 1e-300)) {
            clusters.back().basis.push_back(es.vectors.column(k));
        } else {
            clusters.push_back(Cluster{val, {es.vectors.column(k)}});
        }
    }
    return clusters;
}

}  // namespace

BlockDiagonalization antisymmetric_block_diagonalize(const ComplexMatrix& w, double tol) {
    if (!w.square()) throw NotAntisymmetric("matrix is not square");
    const std::size_t n = w.rows();
    const double scale = std::max(1.0, w.max_abs());
    if (w.antisymmetry_violation() > tol * scale)
        throw NotAntisymmetric("antisymmetry violated beyond tolerance");

    ComplexMatrix ws(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) ws(i, j) = 0.5 * (w(i, j) - w(j, i));

    const auto es = hermitian_eigensystem(ws * ws.adjoint());
    const auto clusters = psd_clusters(es, 1e-10);
    double vmax = 0.0;
    for (double x : es.values) vmax = std::max(vmax, std::abs(x));

    std::vector<CVector> pair_cols;
    std::vector<CVector> kernel_cols;
    std::vector<double> zs;
    for (const auto& cluster : clusters) {
        if (cluster.value <= 1e-12 * std::max(vmax, 1e-300)) {
            for (const auto& v : cluster.basis) kernel_cols.push_back(v);
            continue;
        }
        const double z = std::sqrt(cluster.value);
        std::vector<CVector> work = cluster.basis;
        while (!work.empty()) {
            CVector u1 = work.front();
            CVector u2 = ws * conjugate(u1);
            for (auto& x : u2) x *= -1.0 / z;
            // Clean against already extracted directions inside this cluster.
            axpy(-inner(u1, u2), u1, u2);
            for (const auto& c : pair_cols) axpy(-inner(c, u2), c, u2);
            const double n2 = norm(u2);
            if (n2 < 0.5)
                throw NumericallyIllConditioned("antisymmetric pairing degenerated");
            for (auto& x : u2) x /= n2;
            pair_cols.push_back(u1);
            pair_cols.push_back(u2);
            zs.push_back(z);
            std::vector<CVector> rest;
            for (std::size_t i = 1; i < work.size(); ++i) {
                CVector v = work[i];
                axpy(-inner(u1, v), u1, v);
                axpy(-inner(u2, v), u2, v);
                rest.push_back(std::move(v));
            }
            work = orthonormalized(std::move(rest), 0.3);
        }
    }

    BlockDiagonalization out;
    out.unitary = ComplexMatrix(n, n);
    std::size_t col = 0;
    for (const auto& c : pair_cols) out.unitary.set_column(col++, c);
    for (const auto& c : kernel_cols) out.unitary.set_column(col++, c);
    out.z = zs;

    // Residual check against the reconstructed normal form.
    ComplexMatrix j(n, n);
    for (std::size_t k = 0; k < zs.size(); ++k) {
        j(2 * k, 2 * k + 1) = zs[k];
        j(2 * k + 1, 2 * k) = -zs[k];
    }
    const ComplexMatrix rec = out.unitary * j * out.unitary.transpose();
    if ((rec - ws).frobenius_norm() > 1e-9 * scale)
        throw NumericallyIllConditioned("block diagonalization residual too large");
    return out;
}

TakagiFactorization takagi_factorize(const ComplexMatrix& v, double tol) {
    if (!v.square()) throw NotSymmetric("matrix is not square");
    const std::size_t n = v.rows();
    const double scale = std::max(1.0, v.max_abs());
    if (v.symmetry_violation() > tol * scale)
        throw NotSymmetric("symmetry violated beyond tolerance");

    ComplexMatrix vs(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) vs(i, j) = 0.5 * (v(i, j) + v(j, i));

    const auto es = hermitian_eigensystem(vs * vs.adjoint());
    const auto clusters = psd_clusters(es, 1e-10);
    double vmax = 0.0;
    for (double x : es.values) vmax = std::max(vmax, std::abs(x));

    std::vector<CVector> cols;
    std::vector<CVector> kernel_cols;
    std::vector<double> ds;
    for (const auto& cluster : clusters) {
        if (cluster.value <= 1e-12 * std::max(vmax, 1e-300)) {
            for (const auto& b : cluster.basis) kernel_cols.push_back(b);
            continue;
        }
        const double d = std::sqrt(cluster.value);
        std::vector<CVector> work = cluster.basis;
        while (!work.empty()) {
            const CVector& x = work.front();
            CVector y = vs * conjugate(x);
            for (auto& t : y) t /= d;
            // u with v conj(u) = d u: either x+y or i(x-y) has healthy norm.
            CVector u(n);
            for (std::size_t i = 0; i < n; ++i) u[i] = x[i] + y[i];
            if (norm(u) < 0.5)
                for (std::size_t i = 0; i < n; ++i) u[i] = cdouble(0.0, 1.0) * (x[i] - y[i]);
            for (const auto& c : cols) axpy(-inner(c, u), c, u);
            const double nu = norm(u);
            if (nu < 1e-8) throw NumericallyIllConditioned("takagi extraction degenerated");
            for (auto& t : u) t /= nu;
            cols.push_back(u);
            ds.push_back(d);
            std::vector<CVector> rest;
            for (std::size_t i = 1; i < work.size(); ++i) {
                CVector r = work[i];
                axpy(-inner(u, r), u, r);
                rest.push_back(std::move(r));
            }
            work = orthonormalized(std::move(rest), 0.3);
        }
    }

    TakagiFactorization out;
    out.unitary = ComplexMatrix(n, n);
    std::size_t col = 0;
    for (const auto& c : cols) out.unitary.set_column(col++, c);
    for (const auto& c : kernel_cols) out.unitary.set_column(col++, c);
    out.d = ds;

    ComplexMatrix dm(n, n);
    for (std::size_t k = 0; k < ds.size(); ++k) dm(k, k) = ds[k];
    const ComplexMatrix rec = out.unitary * dm * out.unitary.transpose();
    if ((rec - vs).frobenius_norm() > 1e-9 * scale)
        throw NumericallyIllConditioned("takagi residual too large");
    return out;
}

}  // namespace entkit
