#include "product_search.hpp"

#include <cmath>
#include <limits>

#include "entkit/eigen.hpp"

namespace entkit::detail {

CVector smallest_eigenvector(const ComplexMatrix& hermitian) {
    return hermitian_eigensystem(hermitian).vectors.column(0);
}

CVector largest_eigenvector(const ComplexMatrix& hermitian) {
    return hermitian_eigensystem(hermitian).vectors.column(hermitian.rows() - 1);
}

double ProductObjective::value(const ProductVector& pv) const {
    double v = 0.0;
    if (g_direct) v += expectation(*g_direct, pv.joint());
    if (g_conj) v += expectation(*g_conj, tensor(conjugate(pv.e), pv.f));
    return v;
}

ComplexMatrix ProductObjective::bob_matrix(const CVector& e) const {
    const std::size_t m = dims.m;
    const std::size_t n = dims.n;
    ComplexMatrix b(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            cdouble s = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) {
                    if (g_direct)
                        s += std::conj(e[i]) * (*g_direct)(i * n + k, j * n + l) * e[j];
                    if (g_conj) s += e[i] * (*g_conj)(i * n + k, j * n + l) * std::conj(e[j]);
                }
            b(k, l) = s;
        }
    hermitize(b);
    return b;
}

ComplexMatrix ProductObjective::alice_matrix(const CVector& f) const {
    const std::size_t m = dims.m;
    const std::size_t n = dims.n;
    ComplexMatrix a(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            cdouble direct = 0.0;
            cdouble conj_part = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    if (g_direct)
                        direct += std::conj(f[k]) * (*g_direct)(i * n + k, j * n + l) * f[l];
                    if (g_conj)
                        conj_part += std::conj(f[k]) * (*g_conj)(i * n + k, j * n + l) * f[l];
                }
            // <e*,f|G1|e*,f> = sum over e_i conj(e_j) C[i,j]; as a form in e
            // this is the transpose of the f-contraction C.
            a(i, j) += direct;
            if (g_conj) a(j, i) += conj_part;
        }
    hermitize(a);
    return a;
}

ProductSearchResult minimize_product_form(const ProductObjective& objective, Rng& rng,
                                          std::size_t restarts, int iters_per_start,
                                          const std::vector<ProductVector>& warm_starts) {
    ProductSearchResult best;
    best.value = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    const std::size_t total = warm_starts.size() + restarts;
    for (std::size_t s = 0; s < total; ++s) {
        ProductVector pv = s < warm_starts.size()
                               ? warm_starts[s]
                               : random_product_vector(objective.dims, rng);
        double prev = objective.value(pv);
        for (int it = 0; it < iters_per_start; ++it) {
            CVector f = smallest_eigenvector(objective.bob_matrix(pv.e));
            pv.f = std::move(f);
            CVector e = smallest_eigenvector(objective.alice_matrix(pv.f));
            pv.e = std::move(e);
            ++iterations;
            const double now = objective.value(pv);
            if (std::abs(prev - now) < 1e-15 * (1.0 + std::abs(now))) break;
            prev = now;
        }
        const double v = objective.value(pv);
        if (v < best.value) {
            best.value = v;
            best.pv = pv;
        }
    }
    best.iterations_used = iterations;
    return best;
}

ComplexMatrix reshape_to_matrix(const CVector& v, Dims dims) {
    ComplexMatrix k(dims.m, dims.n);
    for (std::size_t i = 0; i < dims.m; ++i)
        for (std::size_t l = 0; l < dims.n; ++l) k(i, l) = v[i * dims.n + l];
    return k;
}

RangeConditions make_range_conditions(const std::vector<CVector>& kernel_direct,
                                      const std::vector<CVector>& kernel_conj, Dims dims) {
    RangeConditions rc;
    for (const auto& k : kernel_direct) rc.direct.push_back(reshape_to_matrix(k, dims));
    for (const auto& k : kernel_conj) rc.conj_side.push_back(reshape_to_matrix(k, dims));
    return rc;
}

ComplexMatrix f_condition_rows(const RangeConditions& rc, const CVector& e) {
    const std::size_t n = rc.direct.empty()
                              ? (rc.conj_side.empty() ? 0 : rc.conj_side.front().cols())
                              : rc.direct.front().cols();
    ComplexMatrix rows(rc.count(), n);
    std::size_t r = 0;
    for (const auto& k : rc.direct) {
        for (std::size_t l = 0; l < n; ++l) {
            cdouble s = 0.0;
            for (std::size_t i = 0; i < k.rows(); ++i) s += std::conj(k(i, l)) * e[i];
            rows(r, l) = s;
        }
        ++r;
    }
    for (const auto& k : rc.conj_side) {
        for (std::size_t l = 0; l < n; ++l) {
            cdouble s = 0.0;
            for (std::size_t i = 0; i < k.rows(); ++i)
                s += std::conj(k(i, l)) * std::conj(e[i]);
            rows(r, l) = s;
        }
        ++r;
    }
    return rows;
}

ComplexMatrix e_condition_rows(const RangeConditions& rc, const CVector& f) {
    const std::size_t m = rc.direct.empty()
                              ? (rc.conj_side.empty() ? 0 : rc.conj_side.front().rows())
                              : rc.direct.front().rows();
    ComplexMatrix rows(rc.count(), m);
    std::size_t r = 0;
    for (const auto& k : rc.direct) {
        for (std::size_t i = 0; i < m; ++i) {
            cdouble s = 0.0;
            for (std::size_t l = 0; l < k.cols(); ++l) s += std::conj(k(i, l)) * f[l];
            rows(r, i) = s;
        }
        ++r;
    }
    for (const auto& k : rc.conj_side) {
        // <k|e*,f> = 0 is linear in conj(e); conjugating gives rows on e.
        for (std::size_t i = 0; i < m; ++i) {
            cdouble s = 0.0;
            for (std::size_t l = 0; l < k.cols(); ++l) s += k(i, l) * std::conj(f[l]);
            rows(r, i) = s;
        }
        ++r;
    }
    return rows;
}

std::vector<CVector> null_space(const ComplexMatrix& rows, double sigma_tol) {
    const std::size_t n = rows.cols();
    if (rows.rows() == 0) {
        std::vector<CVector> basis;
        for (std::size_t j = 0; j < n; ++j) {
            CVector v(n, 0.0);
            v[j] = 1.0;
            basis.push_back(std::move(v));
        }
        return basis;
    }
    const ComplexMatrix h = rows.adjoint() * rows;
    const auto es = hermitian_eigensystem(h);
    std::vector<CVector> basis;
    for (std::size_t k = 0; k < es.values.size(); ++k)
        if (es.values[k] <= sigma_tol * sigma_tol) basis.push_back(es.vectors.column(k));
    return basis;
}

namespace {

CVector restricted_smallest(const ComplexMatrix& form, const std::vector<CVector>& basis) {
    const std::size_t q = basis.size();
    ComplexMatrix restricted(q, q);
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b) restricted(a, b) = sandwich(basis[a], form, basis[b]);
    hermitize(restricted);
    const CVector y = smallest_eigenvector(restricted);
    CVector v(basis.front().size(), 0.0);
    for (std::size_t a = 0; a < q; ++a) axpy(y[a], basis[a], v);
    normalize(v);
    return v;
}

}  // namespace

std::optional<ProductSearchResult> minimize_feasible_product_form(
    const ProductObjective& objective, const RangeConditions& rc, Rng& rng,
    std::size_t restarts, int iters_per_start,
    const std::vector<ProductVector>& warm_starts) {
    std::optional<ProductSearchResult> best;
    std::size_t iterations = 0;
    const std::size_t total = warm_starts.size() + restarts;
    for (std::size_t s = 0; s < total; ++s) {
        ProductVector pv = s < warm_starts.size()
                               ? warm_starts[s]
                               : random_product_vector(objective.dims, rng);
        bool live = true;
        double prev = std::numeric_limits<double>::infinity();
        for (int it = 0; it < iters_per_start && live; ++it) {
            const auto fbasis = null_space(f_condition_rows(rc, pv.e));
            if (fbasis.empty()) {
                live = false;
                break;
            }
            pv.f = restricted_smallest(objective.bob_matrix(pv.e), fbasis);
            const auto ebasis = null_space(e_condition_rows(rc, pv.f));
            if (ebasis.empty()) {
                live = false;
                break;
            }
            pv.e = restricted_smallest(objective.alice_matrix(pv.f), ebasis);
            ++iterations;
            const double now = objective.value(pv);
            if (std::abs(prev - now) < 1e-15 * (1.0 + std::abs(now))) break;
            prev = now;
        }
        if (!live) continue;
        const double v = objective.value(pv);
        if (!best || v < best->value) {
            best = ProductSearchResult{v, pv, 0};
        }
    }
    if (best) best->iterations_used = iterations;
    return best;
}

}  // namespace entkit::detail
