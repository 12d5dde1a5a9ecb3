#include "entkit/separability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "entkit/eigen.hpp"
#include "entkit/errors.hpp"
#include "entkit/polynomial.hpp"
#include "product_search.hpp"

namespace entkit {

using detail::ProductObjective;
using detail::RangeConditions;

namespace {

constexpr double kRankTol = 1e-9;
constexpr double kRangeTol = 1e-7;
constexpr double kWeightFloor = 1e-7;

Rng sub_rng(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    return Rng(x);
}

// Spectral bookkeeping for one PSD operator: pseudo-inverse, kernel, rank.
struct PsdData {
    ComplexMatrix op;
    ComplexMatrix pinv;
    std::vector<CVector> kernel;
    std::size_t rank = 0;
    double scale = 0.0;  // largest eigenvalue
};

PsdData analyze_psd(ComplexMatrix x) {
    PsdData d;
    const std::size_t n = x.rows();
    const auto es = hermitian_eigensystem(x);
    d.op = std::move(x);
    d.pinv = ComplexMatrix(n, n);
    for (double v : es.values) d.scale = std::max(d.scale, std::abs(v));
    for (std::size_t k = 0; k < n; ++k) {
        const CVector v = es.vectors.column(k);
        if (es.values[k] > kRankTol * d.scale) {
            ComplexMatrix p = outer(v, v);
            p *= 1.0 / es.values[k];
            d.pinv += p;
            ++d.rank;
        } else {
            // Everything at or below the rank cut joins the kernel gate,
            // including slightly negative noise directions; subtraction
            // candidates must stay orthogonal to them.
            d.kernel.push_back(v);
        }
    }
    return d;
}

// Normalize an operator that is PSD up to the subtraction noise floor;
// the clipped mass is bounded by the soundness budget.
DensityMatrix clip_to_state(Dims dims, const ComplexMatrix& x) {
    return DensityMatrix::normalized(dims, project_psd(x), 1e-9);
}

double range_residual(const PsdData& d, const CVector& v) {
    double r = 0.0;
    for (const auto& k : d.kernel) r = std::max(r, std::abs(inner(k, v)));
    return r;
}

// Exact subtraction weight for a candidate; zero when out of range.
double candidate_weight(const PsdData& direct, const PsdData* pt, const ProductVector& pv) {
    const CVector ef = pv.joint();
    if (range_residual(direct, ef) > kRangeTol) return 0.0;
    const double q1 = expectation(direct.pinv, ef);
    if (q1 <= 0.0) return 0.0;
    double lambda = 1.0 / q1;
    if (pt) {
        const CVector cef = tensor(conjugate(pv.e), pv.f);
        if (range_residual(*pt, cef) > kRangeTol) return 0.0;
        const double q2 = expectation(pt->pinv, cef);
        if (q2 <= 0.0) return 0.0;
        lambda = std::min(lambda, 1.0 / q2);
    }
    return lambda;
}

// ------------------------------------------------------------------
// Candidate product vectors on a dim-2 Alice side, parameterized by
// |e(alpha)> = (|0> + alpha|1>)/norm. Conditions from K(X) are affine in
// alpha; conditions from K(X^TA) are affine in conj(alpha).
struct AlphaSystem {
    ComplexMatrix c0, c1;  // direct rows
    ComplexMatrix d0, d1;  // conjugate-side rows
    std::size_t n = 0;

    std::size_t count() const { return c0.rows() + d0.rows(); }

    ComplexMatrix rows_at(cdouble alpha) const {
        ComplexMatrix rows(count(), n);
        for (std::size_t r = 0; r < c0.rows(); ++r)
            for (std::size_t l = 0; l < n; ++l) rows(r, l) = c0(r, l) + alpha * c1(r, l);
        for (std::size_t r = 0; r < d0.rows(); ++r)
            for (std::size_t l = 0; l < n; ++l)
                rows(c0.rows() + r, l) = d0(r, l) + std::conj(alpha) * d1(r, l);
        return rows;
    }

    ComplexMatrix rows_at_infinity() const {
        ComplexMatrix rows(count(), n);
        for (std::size_t r = 0; r < c1.rows(); ++r)
            for (std::size_t l = 0; l < n; ++l) rows(r, l) = c1(r, l);
        for (std::size_t r = 0; r < d1.rows(); ++r)
            for (std::size_t l = 0; l < n; ++l) rows(c1.rows() + r, l) = d1(r, l);
        return rows;
    }
};

AlphaSystem build_alpha_system(const std::vector<CVector>& kernel_direct,
                               const std::vector<CVector>& kernel_conj, Dims dims) {
    AlphaSystem s;
    s.n = dims.n;
    s.c0 = ComplexMatrix(kernel_direct.size(), dims.n);
    s.c1 = ComplexMatrix(kernel_direct.size(), dims.n);
    for (std::size_t r = 0; r < kernel_direct.size(); ++r)
        for (std::size_t l = 0; l < dims.n; ++l) {
            s.c0(r, l) = std::conj(kernel_direct[r][0 * dims.n + l]);
            s.c1(r, l) = std::conj(kernel_direct[r][1 * dims.n + l]);
        }
    s.d0 = ComplexMatrix(kernel_conj.size(), dims.n);
    s.d1 = ComplexMatrix(kernel_conj.size(), dims.n);
    for (std::size_t r = 0; r < kernel_conj.size(); ++r)
        for (std::size_t l = 0; l < dims.n; ++l) {
            s.d0(r, l) = std::conj(kernel_conj[r][0 * dims.n + l]);
            s.d1(r, l) = std::conj(kernel_conj[r][1 * dims.n + l]);
        }
    return s;
}

CVector alice_from_alpha(cdouble alpha) {
    CVector e = {1.0, alpha};
    normalize(e);
    return e;
}

double sigma_min(const ComplexMatrix& rows) {
    const auto es = hermitian_eigensystem(rows.adjoint() * rows);
    return std::sqrt(std::max(0.0, es.values.front()));
}

// Nelder-Mead on the plane; small and sufficient for the 2-parameter
// alpha searches used here.
cdouble nelder_mead_2d(const std::function<double(cdouble)>& objective, cdouble start,
                       double step, int max_iter) {
    struct Vertex {
        cdouble x;
        double v;
    };
    std::vector<Vertex> simplex = {
        {start, objective(start)},
        {start + cdouble(step, 0.0), objective(start + cdouble(step, 0.0))},
        {start + cdouble(0.0, step), objective(start + cdouble(0.0, step))}};
    auto by_value = [](const Vertex& a, const Vertex& b) { return a.v < b.v; };
    for (int it = 0; it < max_iter; ++it) {
        std::sort(simplex.begin(), simplex.end(), by_value);
        if (std::abs(simplex[2].x - simplex[0].x) < 1e-12) break;
        const cdouble centroid = 0.5 * (simplex[0].x + simplex[1].x);
        const cdouble refl = centroid + (centroid - simplex[2].x);
        const double vr = objective(refl);
        if (vr < simplex[0].v) {
            const cdouble expand = centroid + 2.0 * (centroid - simplex[2].x);
            const double ve = objective(expand);
            simplex[2] = ve < vr ? Vertex{expand, ve} : Vertex{refl, vr};
        } else if (vr < simplex[1].v) {
            simplex[2] = {refl, vr};
        } else {
            const cdouble contract = centroid + 0.5 * (simplex[2].x - centroid);
            const double vc = objective(contract);
            if (vc < simplex[2].v) {
                simplex[2] = {contract, vc};
            } else {
                simplex[1].x = simplex[0].x + 0.5 * (simplex[1].x - simplex[0].x);
                simplex[2].x = simplex[0].x + 0.5 * (simplex[2].x - simplex[0].x);
                simplex[1].v = objective(simplex[1].x);
                simplex[2].v = objective(simplex[2].x);
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(), by_value);
    return simplex[0].x;
}

std::vector<cdouble> alpha_grid() {
    std::vector<cdouble> grid;
    for (double x : {-2.0, -0.7, 0.0, 0.7, 2.0})
        for (double y : {-2.0, -0.7, 0.0, 0.7, 2.0}) grid.push_back(cdouble(x, y));
    for (double r : {5.0, 12.0})
        for (int k = 0; k < 4; ++k)
            grid.push_back(r * cdouble(std::cos(1.57 * k + 0.4), std::sin(1.57 * k + 0.4)));
    return grid;
}

// Newton refinement of det(rows_at(alpha)) = 0 over the real plane
// (the determinant is not holomorphic once conjugate rows are present).
cdouble newton_polish_det(const AlphaSystem& s, cdouble alpha) {
    auto g = [&](cdouble a) { return determinant(s.rows_at(a)); };
    const double h = 1e-7;
    for (int it = 0; it < 8; ++it) {
        const cdouble g0 = g(alpha);
        if (std::abs(g0) < 1e-16) break;
        const cdouble gx = (g(alpha + h) - g(alpha - h)) / (2.0 * h);
        const cdouble gy = (g(alpha + cdouble(0, h)) - g(alpha - cdouble(0, h))) / (2.0 * h);
        // Solve [Re gx, Re gy; Im gx, Im gy] (dx,dy) = -(Re g0, Im g0).
        const double det = gx.real() * gy.imag() - gy.real() * gx.imag();
        if (std::abs(det) < 1e-300) break;
        const double dx = (-g0.real() * gy.imag() + g0.imag() * gy.real()) / det;
        const double dy = (-gx.real() * g0.imag() + gx.imag() * g0.real()) / det;
        alpha += cdouble(dx, dy);
        if (std::abs(cdouble(dx, dy)) < 1e-14 * (1.0 + std::abs(alpha))) break;
    }
    return alpha;
}

// Product vectors annihilated by every condition row: finite-system case.
std::vector<ProductVector> alpha_root_candidates(const AlphaSystem& s, Rng& rng) {
    std::vector<ProductVector> out;
    const double row_scale = std::max({s.c0.max_abs(), s.c1.max_abs(), s.d0.max_abs(),
                                       s.d1.max_abs(), 1e-300});
    auto collect = [&](cdouble alpha) {
        const ComplexMatrix rows = s.rows_at(alpha);
        if (sigma_min(rows) > 1e-6 * std::max(1.0, row_scale)) return;
        for (const auto& f : detail::null_space(rows, 1e-6))
            out.push_back(ProductVector{alice_from_alpha(alpha), f});
    };

    if (s.d0.rows() == 0 && s.c0.rows() == s.n) {
        // Square holomorphic pencil: polynomial roots of det(C0 + alpha C1).
        const auto coeffs =
            trim_polynomial(determinant_pencil_coefficients(s.c0, s.c1), 1e-10);
        if (!coeffs.empty())
            for (const auto& root : polynomial_roots(coeffs)) collect(root);
    } else {
        // Mixed or overdetermined system: minimize the smallest singular
        // value over the alpha plane from a grid of starts, then polish.
        auto objective = [&](cdouble alpha) { return sigma_min(s.rows_at(alpha)); };
        std::vector<cdouble> starts = alpha_grid();
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int k = 0; k < 8; ++k) starts.push_back(cdouble(u(rng), u(rng)));
        const bool square = s.count() == s.n;
        for (const auto& start : starts) {
            cdouble alpha = nelder_mead_2d(objective, start, 0.5, 200);
            if (square) alpha = newton_polish_det(s, alpha);
            collect(alpha);
        }
    }

    // Alice vector |1> (alpha at infinity).
    const ComplexMatrix rows_inf = s.rows_at_infinity();
    if (rows_inf.rows() < s.n || sigma_min(rows_inf) <= 1e-6 * std::max(1.0, row_scale)) {
        CVector e = {0.0, 1.0};
        for (const auto& f : detail::null_space(rows_inf, 1e-6))
            out.push_back(ProductVector{e, f});
    }

    // Deduplicate by overlap of the joint vectors.
    std::vector<ProductVector> unique;
    for (const auto& pv : out) {
        bool dup = false;
        for (const auto& q : unique)
            if (std::abs(inner(q.joint(), pv.joint())) > 1.0 - 1e-8) dup = true;
        if (!dup) unique.push_back(pv);
    }
    return unique;
}

// Best subtractable vector along the continuous alpha family (fewer
// conditions than Bob dimensions): maximize the exact weight over alpha.
std::optional<ProductVector> alpha_family_best(const AlphaSystem& s, const PsdData& direct,
                                               const PsdData* pt, Dims dims, Rng& rng,
                                               std::size_t restarts) {
    auto best_f_for_alpha = [&](cdouble alpha, ProductVector* pv_out) -> double {
        const ComplexMatrix rows = s.rows_at(alpha);
        const auto basis = detail::null_space(rows, 1e-8);
        if (basis.empty()) return 0.0;
        const CVector e = alice_from_alpha(alpha);
        ProductObjective direct_form{&direct.pinv, nullptr, dims};
        const ComplexMatrix bob_direct = direct_form.bob_matrix(e);
        ComplexMatrix bob_conj;
        if (pt) {
            ProductObjective conj_form{nullptr, &pt->pinv, dims};
            bob_conj = conj_form.bob_matrix(e);
        }
        const std::size_t q = basis.size();
        ComplexMatrix a_res(q, q), b_res(q, q);
        for (std::size_t x = 0; x < q; ++x)
            for (std::size_t y = 0; y < q; ++y) {
                a_res(x, y) = sandwich(basis[x], bob_direct, basis[y]);
                if (pt) b_res(x, y) = sandwich(basis[x], bob_conj, basis[y]);
            }
        hermitize(a_res);
        if (pt) hermitize(b_res);
        double best = 0.0;
        ProductVector best_pv;
        const int sweeps = pt ? 7 : 1;
        for (int sidx = 0; sidx < sweeps; ++sidx) {
            const double sfrac = sweeps == 1 ? 0.0 : double(sidx) / double(sweeps - 1);
            ComplexMatrix mix = a_res;
            if (pt) {
                mix *= (1.0 - sfrac);
                ComplexMatrix b = b_res;
                b *= sfrac;
                mix += b;
            }
            const CVector y = detail::smallest_eigenvector(mix);
            CVector f(dims.n, 0.0);
            for (std::size_t x = 0; x < q; ++x) axpy(y[x], basis[x], f);
            normalize(f);
            const ProductVector pv{e, f};
            const double w = candidate_weight(direct, pt, pv);
            if (w > best) {
                best = w;
                best_pv = pv;
            }
        }
        if (pv_out && best > 0.0) *pv_out = best_pv;
        return best;
    };

    auto objective = [&](cdouble alpha) { return -best_f_for_alpha(alpha, nullptr); };
    std::vector<cdouble> starts = alpha_grid();
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (std::size_t k = 0; k < restarts; ++k) starts.push_back(cdouble(u(rng), u(rng)));

    double best = 0.0;
    std::optional<ProductVector> best_pv;
    for (const auto& start : starts) {
        const cdouble alpha = nelder_mead_2d(objective, start, 0.4, 120);
        ProductVector pv;
        const double w = best_f_for_alpha(alpha, &pv);
        if (w > best) {
            best = w;
            best_pv = pv;
        }
    }
    // Alpha at infinity.
    {
        const ComplexMatrix rows_inf = s.rows_at_infinity();
        for (const auto& f : detail::null_space(rows_inf, 1e-8)) {
            const ProductVector pv{CVector{0.0, 1.0}, f};
            const double w = candidate_weight(direct, pt, pv);
            if (w > best) {
                best = w;
                best_pv = pv;
            }
        }
    }
    return best_pv;
}

}  // namespace

ComplexMatrix partial_transpose(const ComplexMatrix& rho, Dims dims, Side side) {
    ComplexMatrix out(dims.total(), dims.total());
    for (std::size_t i = 0; i < dims.m; ++i)
        for (std::size_t k = 0; k < dims.n; ++k)
            for (std::size_t j = 0; j < dims.m; ++j)
                for (std::size_t l = 0; l < dims.n; ++l) {
                    if (side == Side::A)
                        out(i * dims.n + k, j * dims.n + l) = rho(j * dims.n + k, i * dims.n + l);
                    else
                        out(i * dims.n + k, j * dims.n + l) = rho(i * dims.n + l, j * dims.n + k);
                }
    return out;
}

PptResult is_ppt(const DensityMatrix& rho, double tol) {
    const ComplexMatrix pt = partial_transpose(rho.matrix(), rho.dims());
    const auto es = hermitian_eigensystem(pt);
    PptResult out;
    out.min_eigenvalue = es.values.front();
    out.eigenvector = es.vectors.column(0);
    out.ppt = out.min_eigenvalue >= -tol;
    return out;
}

SubtractionResult max_subtractable_weight(const DensityMatrix& rho, const ProductVector& pv,
                                          bool ppt_constrained, double tol) {
    const PsdData direct = analyze_psd(rho.matrix());
    std::optional<PsdData> pt;
    if (ppt_constrained) {
        const ComplexMatrix ptm = partial_transpose(rho.matrix(), rho.dims());
        if (min_eigenvalue(ptm) < -tol)
            throw NotPpt("ppt_constrained subtraction requires a PPT state");
        pt = analyze_psd(ptm);
    }

    SubtractionResult out;
    const CVector ef = pv.joint();
    out.in_range = range_residual(direct, ef) <= kRangeTol;
    if (ppt_constrained && out.in_range)
        out.in_range = range_residual(*pt, tensor(conjugate(pv.e), pv.f)) <= kRangeTol;
    if (!out.in_range) {
        out.lambda_max = 0.0;
        out.remainder = rho;
        return out;
    }
    out.lambda_max = candidate_weight(direct, pt ? &*pt : nullptr, pv);
    if (out.lambda_max >= 1.0 - 1e-9) {
        out.lambda_max = std::min(out.lambda_max, 1.0);
        out.degenerate = true;
        return out;
    }
    ComplexMatrix rem = rho.matrix();
    ComplexMatrix p = projector(ef);
    p *= out.lambda_max;
    rem -= p;
    out.remainder = clip_to_state(rho.dims(), rem);
    return out;
}

ComplexMatrix Decomposition::separable_matrix(Dims dims) const {
    ComplexMatrix sigma(dims.total(), dims.total());
    for (const auto& t : separable_part) {
        ComplexMatrix p = projector(t.pv.joint());
        p *= t.weight;
        sigma += p;
    }
    return sigma;
}

ComplexMatrix Decomposition::reassemble(Dims dims) const {
    ComplexMatrix out = separable_matrix(dims);
    out *= lambda;
    if (edge_part) {
        ComplexMatrix e = edge_part->matrix();
        e *= (1.0 - lambda);
        out += e;
    }
    return out;
}

namespace {

// ------------------------------------------------------------------
// Constructive product decomposition of a PSD operator with a dim-2
// side after support reduction; exact kernel-orthogonality route.
struct Constructive {
    bool success = false;
    bool ill_conditioned = false;
    std::string reason;
    std::vector<WeightedProduct> terms;  // absolute weights, sum = tr x
    double residual = 0.0;
};

struct Isometry {
    ComplexMatrix v;  // columns: kept local basis
};

Isometry support_isometry(const ComplexMatrix& reduced) {
    const auto es = hermitian_eigensystem(reduced);
    double scale = 0.0;
    for (double x : es.values) scale = std::max(scale, std::abs(x));
    std::vector<CVector> keep;
    for (std::size_t k = 0; k < es.values.size(); ++k)
        if (es.values[k] > kRankTol * scale) keep.push_back(es.vectors.column(k));
    Isometry iso;
    iso.v = ComplexMatrix(reduced.rows(), keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) iso.v.set_column(j, keep[j]);
    return iso;
}

bool solve_term_weights(const std::vector<ProductVector>& candidates, const ComplexMatrix& x,
                        std::vector<double>* weights, double* residual) {
    std::vector<std::size_t> active(candidates.size());
    std::iota(active.begin(), active.end(), std::size_t{0});
    const double trace = x.trace().real();
    while (!active.empty()) {
        const std::size_t q = active.size();
        ComplexMatrix gram(q, q);
        CVector b(q);
        for (std::size_t s = 0; s < q; ++s) {
            const CVector js = candidates[active[s]].joint();
            b[s] = expectation(x, js);
            for (std::size_t t = 0; t < q; ++t) {
                const double overlap =
                    std::norm(inner(js, candidates[active[t]].joint()));
                gram(s, t) = overlap;
            }
        }
        const ComplexMatrix ginv = pseudo_inverse_psd(gram, 1e-12);
        std::vector<double> mu(q);
        double worst = 0.0;
        std::size_t worst_idx = q;
        for (std::size_t s = 0; s < q; ++s) {
            cdouble acc = 0.0;
            for (std::size_t t = 0; t < q; ++t) acc += ginv(s, t) * b[t];
            mu[s] = acc.real();
            if (mu[s] < worst) {
                worst = mu[s];
                worst_idx = s;
            }
        }
        if (worst < -1e-8 * std::max(trace, 1e-12) && q > 1) {
            active.erase(active.begin() + worst_idx);
            continue;
        }
        ComplexMatrix rec(x.rows(), x.cols());
        weights->assign(candidates.size(), 0.0);
        for (std::size_t s = 0; s < q; ++s) {
            const double w = std::max(0.0, mu[s]);
            (*weights)[active[s]] = w;
            ComplexMatrix p = projector(candidates[active[s]].joint());
            p *= w;
            rec += p;
        }
        *residual = (rec - x).frobenius_norm();
        return true;
    }
    return false;
}

Constructive constructive_decomposition(const ComplexMatrix& x, Dims dims, Rng& rng,
                                        int depth) {
    Constructive out;
    const double trace = x.trace().real();
    if (trace <= 1e-14) {
        out.success = true;
        return out;
    }
    if (depth > 24) {
        out.reason = "recursion depth exceeded";
        return out;
    }

    // Reduce to local supports.
    const Isometry va = support_isometry(reduced_state_a(x, dims));
    const Isometry vb = support_isometry(reduced_state_b(x, dims));
    const std::size_t mr = va.v.cols();
    const std::size_t nr = vb.v.cols();
    const ComplexMatrix t = kron(va.v, vb.v);
    const ComplexMatrix xr = t.adjoint() * x * t;
    const Dims rdims{mr, nr};

    auto lift = [&](const ProductVector& pv) {
        ProductVector full{va.v * pv.e, vb.v * pv.f};
        normalize(full.e);
        normalize(full.f);
        return full;
    };

    if (mr == 1 || nr == 1) {
        // Effectively single-party: eigendecomposition gives the terms.
        const bool alice_trivial = (mr == 1);
        const ComplexMatrix local =
            alice_trivial ? reduced_state_b(xr, rdims) : reduced_state_a(xr, rdims);
        const auto es = hermitian_eigensystem(local);
        for (std::size_t k = 0; k < es.values.size(); ++k) {
            if (es.values[k] <= 1e-13 * std::max(1.0, trace)) continue;
            ProductVector pv;
            if (alice_trivial) {
                pv.e = CVector{1.0};
                pv.f = es.vectors.column(k);
            } else {
                pv.e = es.vectors.column(k);
                pv.f = CVector{1.0};
            }
            out.terms.push_back({es.values[k], lift(pv)});
        }
        ComplexMatrix rec(x.rows(), x.cols());
        for (const auto& term : out.terms) {
            ComplexMatrix p = projector(term.pv.joint());
            p *= term.weight;
            rec += p;
        }
        out.residual = (rec - x).frobenius_norm();
        out.success = out.residual <= 1e-9 * std::max(1.0, trace);
        if (!out.success) out.reason = "product side reconstruction failed";
        return out;
    }

    if (mr > 2 && nr > 2) {
        out.reason = "both reduced sides above dimension 2";
        return out;
    }

    // Orient the dim-2 side to Alice.
    const bool swapped = (mr != 2);
    ComplexMatrix xw = xr;
    Dims wdims = rdims;
    if (swapped) {
        ComplexMatrix sw(rdims.total(), rdims.total());
        for (std::size_t i = 0; i < rdims.m; ++i)
            for (std::size_t k = 0; k < rdims.n; ++k)
                for (std::size_t j = 0; j < rdims.m; ++j)
                    for (std::size_t l = 0; l < rdims.n; ++l)
                        sw(k * rdims.m + i, l * rdims.m + j) =
                            xr(i * rdims.n + k, j * rdims.n + l);
        xw = std::move(sw);
        wdims = rdims.swapped();
    }

    const PsdData data = analyze_psd(xw);
    if (data.rank < wdims.n) {
        out.reason = "rank below local rank";  // not separable
        return out;
    }
    if (data.rank > wdims.n) {
        out.reason = "rank above Bob dimension";
        return out;
    }

    std::vector<CVector> kernel = data.kernel;
    AlphaSystem system = build_alpha_system(kernel, {}, wdims);

    auto finish = [&](std::vector<ProductVector> candidates) -> bool {
        if (candidates.empty()) return false;
        // Verify kernel orthogonality of every candidate.
        std::vector<ProductVector> verified;
        for (const auto& pv : candidates) {
            if (range_residual(data, pv.joint()) <= 1e-6)
                verified.push_back(pv);
            else
                out.ill_conditioned = true;
        }
        if (verified.empty()) return false;
        std::vector<double> weights;
        double residual = 0.0;
        if (!solve_term_weights(verified, xw, &weights, &residual)) return false;
        if (residual > 1e-9 * std::max(1.0, trace)) {
            out.residual = residual;
            return false;
        }
        for (std::size_t s = 0; s < verified.size(); ++s) {
            if (weights[s] <= 1e-12 * std::max(1.0, trace)) continue;
            ProductVector pv = verified[s];
            if (swapped) std::swap(pv.e, pv.f);
            out.terms.push_back({weights[s], lift(pv)});
        }
        out.residual = residual;
        out.success = true;
        return true;
    };

    const auto coeffs =
        trim_polynomial(determinant_pencil_coefficients(system.c0, system.c1), 1e-10);
    if (!coeffs.empty()) {
        if (finish(alpha_root_candidates(system, rng))) return out;
        if (out.ill_conditioned && out.reason.empty())
            out.reason = "root verification failed";
    } else {
        // Degenerate pencil: a common Bob null vector admits every Alice
        // vector; subtract the best such term and recurse.
        ComplexMatrix stacked(system.c0.rows() * 2, wdims.n);
        for (std::size_t r = 0; r < system.c0.rows(); ++r)
            for (std::size_t l = 0; l < wdims.n; ++l) {
                stacked(r, l) = system.c0(r, l);
                stacked(system.c0.rows() + r, l) = system.c1(r, l);
            }
        const auto common = detail::null_space(stacked, 1e-8);
        if (!common.empty()) {
            const ComplexMatrix ptw = partial_transpose(xw, wdims);
            std::optional<PsdData> pt;
            if (min_eigenvalue(ptw) >= -1e-9) pt = analyze_psd(ptw);
            double best = 0.0;
            ProductVector best_pv;
            for (const auto& f : common) {
                ProductObjective direct_form{&data.pinv, nullptr, wdims};
                ProductObjective conj_form{nullptr, pt ? &pt->pinv : nullptr, wdims};
                ComplexMatrix amat = direct_form.alice_matrix(f);
                if (pt) amat += conj_form.alice_matrix(f);
                const CVector e = detail::smallest_eigenvector(amat);
                const ProductVector pv{e, f};
                const double w = candidate_weight(data, pt ? &*pt : nullptr, pv);
                if (w > best) {
                    best = w;
                    best_pv = pv;
                }
            }
            if (best > 1e-12 * std::max(1.0, trace)) {
                ComplexMatrix rem = xw;
                ComplexMatrix p = projector(best_pv.joint());
                p *= best;
                rem -= p;
                Constructive inner = constructive_decomposition(
                    rem, wdims, rng, depth + 1);
                if (inner.success) {
                    ProductVector pv = best_pv;
                    if (swapped) std::swap(pv.e, pv.f);
                    out.terms.push_back({best, lift(pv)});
                    for (auto term : inner.terms) {
                        if (swapped) std::swap(term.pv.e, term.pv.f);
                        out.terms.push_back({term.weight, lift(term.pv)});
                    }
                    out.success = true;
                    out.residual = inner.residual;
                    return out;
                }
            }
        }
        out.reason = "degenerate kernel pencil";
    }
    if (out.reason.empty()) out.reason = "no verified decomposition";
    return out;
}

// Try the constructive route on x and on its partial transpose (whose
// product terms map back by conjugating the Alice vectors).
Constructive constructive_either_side(const ComplexMatrix& x, Dims dims, Rng& rng) {
    Constructive direct = constructive_decomposition(x, dims, rng, 0);
    if (direct.success) return direct;
    const ComplexMatrix pt = partial_transpose(x, dims);
    if (min_eigenvalue(pt) < -1e-9 * std::max(1.0, pt.max_abs())) return direct;
    Constructive via_pt = constructive_decomposition(pt, dims, rng, 0);
    if (via_pt.success) {
        for (auto& term : via_pt.terms) term.pv.e = conjugate(term.pv.e);
        return via_pt;
    }
    direct.ill_conditioned = direct.ill_conditioned || via_pt.ill_conditioned;
    return direct;
}

// ------------------------------------------------------------------
// Greedy subtraction engine shared by the BSA and the low-rank descent.
struct GreedyOutcome {
    std::vector<WeightedProduct> terms;
    ComplexMatrix remainder;
    bool budget_exhausted = false;
    bool reached_one = false;
};

GreedyOutcome greedy_subtraction(const DensityMatrix& rho, bool ppt_mode, std::size_t budget,
                                 std::uint64_t seed) {
    const Dims dims = rho.dims();
    GreedyOutcome out;
    out.remainder = rho.matrix();
    const std::size_t max_steps = 6 * dims.total() + 8;
    const std::size_t restarts = std::clamp<std::size_t>(budget / 400, 6, 64);
    std::optional<ProductVector> warm;

    for (std::size_t step = 0; step < max_steps; ++step) {
        const double tr_rem = out.remainder.trace().real();
        if (tr_rem <= 1e-10) {
            out.reached_one = true;
            return out;
        }
        Rng rng = sub_rng(seed, step);

        if (ppt_mode && (dims.m == 2 || dims.n == 2 || out.remainder.rows() <= 16 ||
                         hermitian_rank(reduced_state_a(out.remainder, dims)) <= 2 ||
                         hermitian_rank(reduced_state_b(out.remainder, dims)) <= 2)) {
            Constructive fin = constructive_either_side(out.remainder, dims, rng);
            if (fin.success) {
                for (const auto& term : fin.terms) out.terms.push_back(term);
                out.remainder = ComplexMatrix(dims.total(), dims.total());
                out.reached_one = true;
                return out;
            }
        }

        const PsdData direct = analyze_psd(out.remainder);
        std::optional<PsdData> pt;
        if (ppt_mode) pt = analyze_psd(partial_transpose(out.remainder, dims));

        double best_w = 0.0;
        ProductVector best_pv;
        auto consider = [&](const ProductVector& pv) {
            const double w = candidate_weight(direct, pt ? &*pt : nullptr, pv);
            if (w > best_w) {
                best_w = w;
                best_pv = pv;
            }
        };

        const std::size_t conditions = direct.kernel.size() + (pt ? pt->kernel.size() : 0);
        if (conditions == 0) {
            ProductObjective objective{&direct.pinv, pt ? &pt->pinv : nullptr, dims};
            std::vector<ProductVector> warm_starts;
            if (warm) warm_starts.push_back(*warm);
            const auto res =
                detail::minimize_product_form(objective, rng, restarts, 50, warm_starts);
            consider(res.pv);
        } else if (dims.m == 2 || dims.n == 2) {
            // Two-dimensional side: optimize along the exactly-feasible
            // alpha family (or enumerate it when it is finite).
            const bool swap = dims.m != 2;
            ComplexMatrix xw = out.remainder;
            Dims wdims = dims;
            std::vector<CVector> kd, kc;
            if (!swap) {
                for (const auto& k : direct.kernel) kd.push_back(k);
                if (pt)
                    for (const auto& k : pt->kernel) kc.push_back(k);
            } else {
                // Swap parties; PT-side kernels conjugate on the new Alice.
                wdims = dims.swapped();
                ComplexMatrix sw(dims.total(), dims.total());
                for (std::size_t i = 0; i < dims.m; ++i)
                    for (std::size_t k = 0; k < dims.n; ++k)
                        for (std::size_t j = 0; j < dims.m; ++j)
                            for (std::size_t l = 0; l < dims.n; ++l)
                                sw(k * dims.m + i, l * dims.m + j) =
                                    out.remainder(i * dims.n + k, j * dims.n + l);
                xw = std::move(sw);
                auto swap_vec = [&](const CVector& v) {
                    CVector o(v.size());
                    for (std::size_t i = 0; i < dims.m; ++i)
                        for (std::size_t k = 0; k < dims.n; ++k)
                            o[k * dims.m + i] = v[i * dims.n + k];
                    return o;
                };
                for (const auto& k : direct.kernel) kd.push_back(swap_vec(k));
                if (pt) {
                    // K(X^TB) = conj(K(X^TA)) after the swap.
                    for (const auto& k : pt->kernel) kc.push_back(conjugate(swap_vec(k)));
                }
            }
            const PsdData wdirect = swap ? analyze_psd(xw) : direct;
            std::optional<PsdData> wpt;
            if (pt) wpt = swap ? analyze_psd(partial_transpose(xw, wdims)) : *pt;

            const AlphaSystem system = build_alpha_system(kd, kc, wdims);
            auto back = [&](ProductVector pv) {
                if (swap) std::swap(pv.e, pv.f);
                return pv;
            };
            if (system.count() < wdims.n) {
                const auto found = alpha_family_best(system, wdirect,
                                                     wpt ? &*wpt : nullptr, wdims, rng,
                                                     std::min<std::size_t>(restarts, 12));
                if (found) consider(back(*found));
            } else {
                for (const auto& pv : alpha_root_candidates(system, rng))
                    consider(back(pv));
            }
        } else {
            // Larger systems: exactly-feasible alternating search when the
            // conditions leave room on both sides, else residual search.
            RangeConditions rc = detail::make_range_conditions(
                direct.kernel, pt ? pt->kernel : std::vector<CVector>{}, dims);
            ProductObjective objective{&direct.pinv, pt ? &pt->pinv : nullptr, dims};
            if (rc.count() < std::min(dims.m, dims.n)) {
                const auto res = detail::minimize_feasible_product_form(objective, rc, rng,
                                                                        restarts, 40);
                if (res) consider(res->pv);
            } else {
                const ComplexMatrix kproj_direct = [&] {
                    ComplexMatrix p(dims.total(), dims.total());
                    for (const auto& k : direct.kernel) p += outer(k, k);
                    return p;
                }();
                ComplexMatrix kproj_conj(dims.total(), dims.total());
                if (pt)
                    for (const auto& k : pt->kernel) kproj_conj += outer(k, k);
                ProductObjective residual{&kproj_direct, pt ? &kproj_conj : nullptr, dims};
                const auto res = detail::minimize_product_form(residual, rng, restarts, 40);
                if (res.value <= 1e-14) consider(res.pv);
            }
        }

        if (best_w <= kWeightFloor) return out;

        // Soundness guard: the closed-form weight assumes exact range
        // membership; shrink by bisection if this step alone would push
        // the remainder noticeably below its current positivity floor.
        const ComplexMatrix p_unit = projector(best_pv.joint());
        auto floor_after = [&](double lam) {
            ComplexMatrix probe = out.remainder;
            ComplexMatrix lp = p_unit;
            lp *= lam;
            probe -= lp;
            double floor = min_eigenvalue(probe);
            if (ppt_mode)
                floor = std::min(floor, min_eigenvalue(partial_transpose(probe, dims)));
            return floor;
        };
        const double unit = std::max(1.0, direct.scale);
        const double budget_floor =
            std::min(-1e-10 * unit, floor_after(0.0) - 1e-11 * unit);
        if (floor_after(best_w) < budget_floor) {
            double lo = 0.0, hi = best_w;
            for (int it = 0; it < 40; ++it) {
                const double mid = 0.5 * (lo + hi);
                (floor_after(mid) >= budget_floor ? lo : hi) = mid;
            }
            best_w = lo;
            if (best_w <= kWeightFloor) return out;
        }

        ComplexMatrix p = p_unit;
        p *= best_w;
        out.remainder -= p;
        out.terms.push_back({best_w, best_pv});
        warm = best_pv;
    }
    out.budget_exhausted = true;
    return out;
}

}  // namespace

Decomposition best_separable_approximation(const DensityMatrix& rho, bool ppt_constrained,
                                           std::size_t budget, std::uint64_t seed) {
    if (ppt_constrained && !is_ppt(rho).ppt)
        throw NotPpt("ppt-constrained decomposition requires a PPT input");

    GreedyOutcome run = greedy_subtraction(rho, ppt_constrained, budget, seed);

    // Pairwise re-optimization: release the heaviest term back into the
    // remainder, re-run the greedy placement on the relaxed operator, and
    // keep whichever placement subtracts more weight.
    for (int pass = 0; pass < 2 && !run.reached_one && !run.terms.empty(); ++pass) {
        std::size_t heaviest = 0;
        for (std::size_t i = 1; i < run.terms.size(); ++i)
            if (run.terms[i].weight > run.terms[heaviest].weight) heaviest = i;
        ComplexMatrix relaxed = run.remainder;
        ComplexMatrix p = projector(run.terms[heaviest].pv.joint());
        p *= run.terms[heaviest].weight;
        relaxed += p;
        const double scale = relaxed.trace().real();
        if (scale < 1e-6) break;
        const DensityMatrix relaxed_state = clip_to_state(rho.dims(), relaxed);
        GreedyOutcome retry =
            greedy_subtraction(relaxed_state, ppt_constrained, budget / 2, seed + 77 + pass);
        double yield = 0.0;
        for (const auto& t : retry.terms) yield += t.weight;
        if (yield * scale <= run.terms[heaviest].weight + 1e-12) break;
        std::vector<WeightedProduct> terms;
        for (std::size_t i = 0; i < run.terms.size(); ++i)
            if (i != heaviest) terms.push_back(run.terms[i]);
        for (const auto& t : retry.terms) terms.push_back({t.weight * scale, t.pv});
        run.terms = std::move(terms);
        run.remainder = retry.remainder;
        for (auto& entry : run.remainder.data()) entry *= scale;
        run.reached_one = retry.reached_one;
    }

    Decomposition out;
    out.budget_exhausted = run.budget_exhausted;
    double lambda = 0.0;
    for (const auto& t : run.terms) lambda += t.weight;
    lambda = std::min(lambda, 1.0);
    out.lambda = run.reached_one ? 1.0 : lambda;
    for (const auto& t : run.terms) {
        if (t.weight <= 1e-14) continue;
        out.separable_part.push_back({t.weight / (lambda > 0.0 ? lambda : 1.0), t.pv});
    }
    if (!run.reached_one && out.lambda < 1.0 - 1e-9) {
        out.edge_part = clip_to_state(rho.dims(), run.remainder);
    }
    return out;
}

EdgeSearchResult is_edge_state(const DensityMatrix& rho, std::size_t budget,
                               std::uint64_t seed) {
    const PptResult ppt = is_ppt(rho);
    if (!ppt.ppt) throw NotPpt("edge search requires a PPT state");
    const Dims dims = rho.dims();
    const PsdData direct = analyze_psd(rho.matrix());
    const PsdData pt = analyze_psd(partial_transpose(rho.matrix(), dims));

    EdgeSearchResult out;
    if (direct.kernel.empty() && pt.kernel.empty()) {
        CVector e(dims.m, 0.0), f(dims.n, 0.0);
        e[0] = 1.0;
        f[0] = 1.0;
        out.found = ProductVector{e, f};
        return out;
    }

    Rng rng = sub_rng(seed, 0);
    const std::size_t restarts = std::max<std::size_t>(budget, 1);

    auto qualifies = [&](const ProductVector& pv) {
        return range_residual(direct, pv.joint()) <= 1e-8 &&
               range_residual(pt, tensor(conjugate(pv.e), pv.f)) <= 1e-8;
    };

    if (dims.m == 2 || dims.n == 2) {
        // The dim-2 machinery answers this almost exactly.
        DensityMatrix work = dims.m == 2 ? rho : swap_parties(rho);
        const Dims wdims = work.dims();
        const PsdData wdirect = analyze_psd(work.matrix());
        const PsdData wpt = analyze_psd(partial_transpose(work.matrix(), wdims));
        std::vector<CVector> kd = wdirect.kernel;
        std::vector<CVector> kc = wpt.kernel;
        const AlphaSystem system = build_alpha_system(kd, kc, wdims);
        auto back = [&](ProductVector pv) {
            if (dims.m != 2) std::swap(pv.e, pv.f);
            return pv;
        };
        if (system.count() < wdims.n) {
            const auto found = alpha_family_best(system, wdirect, &wpt, wdims, rng, 10);
            if (found && qualifies(back(*found))) {
                out.found = back(*found);
                return out;
            }
        } else {
            for (const auto& pv : alpha_root_candidates(system, rng)) {
                if (qualifies(back(pv))) {
                    out.found = back(pv);
                    return out;
                }
            }
        }
        out.is_edge = true;
        out.restarts_used = restarts;
        return out;
    }

    // Joint range-membership residual minimization, multi-start.
    ComplexMatrix kproj_direct(dims.total(), dims.total());
    for (const auto& k : direct.kernel) kproj_direct += outer(k, k);
    ComplexMatrix kproj_conj(dims.total(), dims.total());
    for (const auto& k : pt.kernel) kproj_conj += outer(k, k);
    ProductObjective residual{&kproj_direct, &kproj_conj, dims};

    const std::size_t chunk = 64;
    std::size_t used = 0;
    while (used < restarts) {
        const std::size_t now = std::min(chunk, restarts - used);
        const auto res = detail::minimize_product_form(residual, rng, now, 40);
        used += now;
        if (res.value <= 1e-14 && qualifies(res.pv)) {
            out.found = res.pv;
            out.restarts_used = used;
            return out;
        }
    }
    out.is_edge = true;
    out.restarts_used = used;
    return out;
}

SeparabilityVerdict classify_low_dim(const DensityMatrix& rho, std::size_t budget,
                                     std::uint64_t seed) {
    const Dims d = rho.dims();
    const bool in_scope = (d.m == 2 && (d.n == 2 || d.n == 3)) || (d.n == 2 && d.m == 3);
    if (!in_scope)
        throw DimensionOutOfScope("classify_low_dim covers 2x2 and 2x3 systems only");

    SeparabilityVerdict verdict;
    const PptResult ppt = is_ppt(rho);
    if (!ppt.ppt) {
        verdict.kind = VerdictKind::Entangled;
        verdict.nppt_evidence = ppt;
        verdict.note = "negative partial transpose";
        return verdict;
    }
    Decomposition bsa = best_separable_approximation(rho, true, budget, seed);
    if (bsa.lambda >= 1.0 - 1e-6) {
        verdict.kind = VerdictKind::Separable;
        verdict.certificate = std::move(bsa);
        return verdict;
    }
    verdict.kind = VerdictKind::PptUndecided;
    verdict.note = "separable approximation stalled below 1";
    return verdict;
}

SeparabilityVerdict low_rank_separability(const DensityMatrix& rho, std::uint64_t seed,
                                          std::size_t budget) {
    const PptResult ppt = is_ppt(rho);
    if (!ppt.ppt) throw NotPpt("low_rank_separability requires a PPT state");
    const Dims d = rho.dims();

    Rng rng = sub_rng(seed, 1);
    Constructive direct = constructive_either_side(rho.matrix(), d, rng);
    if (direct.success) {
        SeparabilityVerdict verdict;
        verdict.kind = VerdictKind::Separable;
        Decomposition cert;
        cert.lambda = 1.0;
        for (const auto& term : direct.terms) cert.separable_part.push_back(term);
        verdict.certificate = std::move(cert);
        return verdict;
    }

    const std::size_t r = rho.rank();
    const std::size_t rt = hermitian_rank(partial_transpose(rho.matrix(), d));
    const std::size_t bound = 2 * d.total() - d.m - d.n + 2;
    const bool rank_condition = r <= std::max(d.m, d.n) || rt <= std::max(d.m, d.n);
    if (rank_condition && direct.ill_conditioned)
        throw NumericallyIllConditioned(
            "low-rank product system roots failed residual verification");

    SeparabilityVerdict verdict;
    if (r + rt <= bound) {
        // Descent: subtract range-compatible product vectors until a
        // constructive finish applies.
        Decomposition bsa = best_separable_approximation(rho, true, budget, seed);
        if (bsa.lambda >= 1.0 - 1e-9) {
            const double residual =
                (bsa.reassemble(d) - rho.matrix()).frobenius_norm();
            if (residual <= 1e-8) {
                verdict.kind = VerdictKind::Separable;
                verdict.certificate = std::move(bsa);
                return verdict;
            }
        }
        verdict.note = "generic sum-of-ranks descent did not complete";
    } else {
        verdict.note = "rank conditions not met";
    }
    verdict.kind = VerdictKind::PptUndecided;
    return verdict;
}

}  // namespace entkit
