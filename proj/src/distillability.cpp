#include "entkit/distillability.hpp"

#include <algorithm>
#include <cmath>

#include "entkit/eigen.hpp"
#include "entkit/errors.hpp"
#include "product_search.hpp"

namespace entkit {

namespace {

Rng seeded(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 3);
    x ^= x >> 31;
    x *= 0xbf58476d1ce4e5b9ULL;
    return Rng(x);
}

// (rho^TA)^(x)K regrouped so all Alice copies precede all Bob copies.
ComplexMatrix kcopy_operator(const ComplexMatrix& pt, Dims dims, std::size_t copies) {
    const std::size_t m = dims.m;
    const std::size_t n = dims.n;
    std::size_t adim = 1, bdim = 1;
    for (std::size_t t = 0; t < copies; ++t) {
        adim *= m;
        bdim *= n;
    }
    const std::size_t total = adim * bdim;
    ComplexMatrix out(total, total);
    std::vector<std::size_t> ad(copies), bd(copies), adp(copies), bdp(copies);
    auto digits = [&](std::size_t idx, std::size_t base, std::vector<std::size_t>& out_digits) {
        for (std::size_t t = copies; t-- > 0;) {
            out_digits[t] = idx % base;
            idx /= base;
        }
    };
    for (std::size_t a = 0; a < adim; ++a) {
        digits(a, m, ad);
        for (std::size_t b = 0; b < bdim; ++b) {
            digits(b, n, bd);
            for (std::size_t ap = 0; ap < adim; ++ap) {
                digits(ap, m, adp);
                for (std::size_t bp = 0; bp < bdim; ++bp) {
                    digits(bp, n, bdp);
                    cdouble prod = 1.0;
                    for (std::size_t t = 0; t < copies && prod != 0.0; ++t)
                        prod *= pt(ad[t] * n + bd[t], adp[t] * n + bdp[t]);
                    out(a * bdim + b, ap * bdim + bp) = prod;
                }
            }
        }
    }
    return out;
}

struct Pair {
    CVector first, second;
};

Pair random_orthonormal_pair(std::size_t dim, Rng& rng) {
    Pair p;
    p.first = random_unit_vector(dim, rng);
    p.second = random_unit_vector(dim, rng);
    axpy(-inner(p.first, p.second), p.first, p.second);
    normalize(p.second);
    return p;
}

// Smallest eigenvector of X restricted to span{e1,e2} (x) C^bdim; returns
// the coefficient matrix y[(r,k)].
CVector restricted_minimum(const ComplexMatrix& x, const Pair& alice, std::size_t bdim,
                           double* value) {
    const std::size_t adim = alice.first.size();
    const std::size_t q = 2 * bdim;
    ComplexMatrix reduced(q, q);
    const CVector* es[2] = {&alice.first, &alice.second};
    // reduced[(r,k),(s,l)] = sum_{a,a'} conj(e_r[a]) X[(a,k),(a',l)] e_s[a']
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t k = 0; k < bdim; ++k)
                for (std::size_t l = 0; l < bdim; ++l) {
                    cdouble acc = 0.0;
                    for (std::size_t a = 0; a < adim; ++a) {
                        const cdouble cra = std::conj((*es[r])[a]);
                        if (cra == 0.0) continue;
                        for (std::size_t ap = 0; ap < adim; ++ap)
                            acc += cra * x(a * bdim + k, ap * bdim + l) * (*es[s])[ap];
                    }
                    reduced(r * bdim + k, s * bdim + l) = acc;
                }
    hermitize(reduced);
    const auto esys = hermitian_eigensystem(reduced);
    if (value) *value = esys.values.front();
    return esys.vectors.column(0);
}

SchmidtTwoVector schmidt_two_form(const CVector& psi, std::size_t adim, std::size_t bdim) {
    ComplexMatrix c(adim, bdim);
    for (std::size_t a = 0; a < adim; ++a)
        for (std::size_t b = 0; b < bdim; ++b) c(a, b) = psi[a * bdim + b];
    const Svd svd = singular_value_decomposition(c);
    SchmidtTwoVector out;
    out.e1 = svd.u.column(0);
    out.f1 = conjugate(svd.v.column(0));
    out.a = svd.singular[0];
    if (std::min(adim, bdim) > 1) {
        out.e2 = svd.u.column(1);
        out.f2 = conjugate(svd.v.column(1));
        out.b = svd.singular[1];
    } else {
        out.e2 = CVector(adim, 0.0);
        out.f2 = CVector(bdim, 0.0);
        out.b = 0.0;
    }
    return out;
}

}  // namespace

CVector SchmidtTwoVector::assemble() const {
    CVector psi = tensor(e1, f1);
    for (auto& x : psi) x *= a;
    if (norm(e2) > 0.0 && norm(f2) > 0.0) {
        CVector second = tensor(e2, f2);
        axpy(b, second, psi);
    }
    return psi;
}

KCopyResult kcopy_min_expectation(const DensityMatrix& rho, std::size_t copies,
                                  std::size_t restarts, std::uint64_t seed,
                                  std::size_t dimension_cap) {
    if (copies < 1) throw DimensionCap("copies must be at least 1");
    const Dims dims = rho.dims();
    std::size_t total = 1;
    for (std::size_t t = 0; t < copies; ++t) {
        total *= dims.total();
        if (total > dimension_cap)
            throw DimensionCap("K-copy dimension exceeds the configured cap");
    }
    std::size_t adim = 1, bdim = 1;
    for (std::size_t t = 0; t < copies; ++t) {
        adim *= dims.m;
        bdim *= dims.n;
    }

    const ComplexMatrix pt = partial_transpose(rho.matrix(), dims);
    const ComplexMatrix x = kcopy_operator(pt, dims, copies);
    Rng rng = seeded(seed, copies);

    std::vector<Pair> starts;
    if (total <= 128) {
        // Seed from the most negative eigenvector truncated to Schmidt
        // rank two; fast convergence where negativity exists.
        const auto esys = hermitian_eigensystem(x);
        const SchmidtTwoVector trunc = schmidt_two_form(esys.vectors.column(0), adim, bdim);
        if (std::abs(trunc.b) > 1e-12)
            starts.push_back(Pair{trunc.e1, trunc.e2});
        else
            starts.push_back(random_orthonormal_pair(adim, rng));
    }
    while (starts.size() < std::max<std::size_t>(restarts, 1))
        starts.push_back(random_orthonormal_pair(adim, rng));

    double best_value = std::numeric_limits<double>::infinity();
    CVector best_psi;
    std::size_t used = 0;
    for (const auto& start : starts) {
        Pair alice = start;
        double value = std::numeric_limits<double>::infinity();
        CVector psi_current;
        for (int it = 0; it < 40; ++it) {
            double now = 0.0;
            const CVector y = restricted_minimum(x, alice, bdim, &now);
            CVector psi(adim * bdim, 0.0);
            for (std::size_t k = 0; k < bdim; ++k)
                for (std::size_t a = 0; a < adim; ++a) {
                    psi[a * bdim + k] += alice.first[a] * y[0 * bdim + k];
                    psi[a * bdim + k] += alice.second[a] * y[1 * bdim + k];
                }
            psi_current = psi;
            const bool converged =
                it > 2 && std::abs(now - value) < 1e-14 * (1.0 + std::abs(now));
            value = now;
            if (converged) break;
            const SchmidtTwoVector form = schmidt_two_form(psi, adim, bdim);
            if (norm(form.e2) == 0.0 || std::abs(form.b) < 1e-14) break;
            alice = Pair{form.e1, form.e2};
        }
        ++used;
        if (value < best_value && !psi_current.empty()) {
            best_value = value;
            best_psi = std::move(psi_current);
        }
    }

    KCopyResult out;
    normalize(best_psi);
    out.argmin = schmidt_two_form(best_psi, adim, bdim);
    // Report the directly re-evaluated quadratic form of the argmin.
    const CVector assembled = out.argmin.assemble();
    out.value = expectation(x, assembled) / std::pow(norm(assembled), 2);
    out.restarts_used = used;
    return out;
}

DistillabilityVerdict classify_distillability(const DensityMatrix& rho, std::size_t kmax,
                                              std::size_t restarts, std::uint64_t seed) {
    DistillabilityVerdict out;
    if (is_ppt(rho).ppt) {
        out.kind = DistillabilityKind::UndistillablePpt;
        return out;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= kmax; ++k) {
        KCopyResult res;
        try {
            res = kcopy_min_expectation(rho, k, restarts, seed + k);
        } catch (const DimensionCap&) {
            break;
        }
        best = std::min(best, res.value);
        if (res.value <= -1e-9) {
            out.kind = DistillabilityKind::Distillable;
            out.copies = k;
            out.value = res.value;
            out.argmin = res.argmin;
            return out;
        }
    }
    out.kind = DistillabilityKind::Inconclusive;
    out.copies = kmax;
    out.value = best;
    return out;
}

std::vector<FamilyScanRow> family_scan(std::size_t d, const std::vector<double>& lambda_grid,
                                       std::size_t copies, std::size_t restarts,
                                       std::uint64_t seed) {
    if (d < 2 || d > 4) throw DimensionCap("family_scan covers d in {2,3,4}");
    std::vector<FamilyScanRow> rows;
    for (double lambda : lambda_grid) {
        const DensityMatrix rho = sym_antisym_family(d, lambda);
        FamilyScanRow row;
        row.lambda = lambda;
        row.seed = seed;
        row.ppt = is_ppt(rho).ppt;
        const KCopyResult res = kcopy_min_expectation(rho, copies, restarts, seed);
        row.min_expectation = res.value;
        row.restarts_used = res.restarts_used;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace entkit
