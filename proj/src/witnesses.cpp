#include "entkit/witnesses.hpp"

#include <algorithm>
#include <cmath>

#include "entkit/eigen.hpp"
#include "entkit/errors.hpp"
#include "product_search.hpp"

namespace entkit {

using detail::ProductObjective;

namespace {

Rng seeded(std::uint64_t seed) {
    std::uint64_t x = seed ^ 0xa3c59ac2ULL;
    x *= 0xff51afd7ed558ccdULL;
    return Rng(x);
}

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    cdouble s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * b(j, i);
    return s.real();
}

}  // namespace

ProductExpectation min_product_expectation(const ComplexMatrix& w, Dims dims,
                                           std::size_t restarts, std::uint64_t seed) {
    Rng rng = seeded(seed);
    ProductObjective objective{&w, nullptr, dims};
    const auto res = detail::minimize_product_form(objective, rng, std::max<std::size_t>(restarts, 1), 60);
    return ProductExpectation{res.value, res.pv};
}

ProductExpectation max_product_expectation(const ComplexMatrix& w, Dims dims,
                                           std::size_t restarts, std::uint64_t seed) {
    ComplexMatrix neg = w;
    neg *= -1.0;
    ProductExpectation res = min_product_expectation(neg, dims, restarts, seed);
    res.value = -res.value;
    return res;
}

Witness canonical_edge_witness(const DensityMatrix& delta, const DensityMatrix& target,
                               std::size_t restarts, std::uint64_t seed) {
    const Dims dims = delta.dims();
    const ComplexMatrix pt = partial_transpose(delta.matrix(), dims);
    if (min_eigenvalue(pt) < -1e-9)
        throw EdgePreconditionFailed("edge input must be PPT");

    const ComplexMatrix p = kernel_projector(delta.matrix());
    const ComplexMatrix q = kernel_projector(pt);
    ComplexMatrix base = p + partial_transpose(q, dims);
    hermitize(base);

    const ProductExpectation eps = min_product_expectation(base, dims, restarts, seed);
    if (eps.value <= 1e-7)
        throw EdgePreconditionFailed(
            "no product gap above the kernels: input is not an edge state");

    const double shift = 0.99 * eps.value;
    ComplexMatrix op = base;
    ComplexMatrix id = ComplexMatrix::identity(dims.total());
    id *= shift;
    op -= id;
    const double trace = op.trace().real();
    if (trace <= 0.0) throw EdgePreconditionFailed("degenerate witness trace");
    op *= 1.0 / trace;

    Witness w;
    w.op = std::move(op);
    w.dims = dims;
    w.search_restarts = restarts;
    const ProductExpectation floor = min_product_expectation(w.op, dims, restarts, seed + 1);
    w.sep_floor = floor.value;
    const double detected = trace_product(w.op, target.matrix());
    if (detected >= -1e-9)
        throw NonDetecting("constructed witness does not detect the target");
    w.detected_value = detected;
    return w;
}

Witness projector_witness(const PureState& psi, std::size_t restarts, std::uint64_t seed) {
    const auto sd = schmidt_decomposition(psi);
    if (sd.rank() < 2) throw ProductStateInput("projector witness needs an entangled state");
    const double alpha = sd.coefficients.front() * sd.coefficients.front();
    const Dims dims = psi.dims();

    ComplexMatrix op = ComplexMatrix::identity(dims.total());
    op *= alpha;
    op -= outer(psi.amplitudes(), psi.amplitudes());
    const double trace = op.trace().real();
    op *= 1.0 / trace;

    Witness w;
    w.op = std::move(op);
    w.dims = dims;
    w.search_restarts = restarts;
    w.sep_floor = min_product_expectation(w.op, dims, restarts, seed).value;
    w.detected_value = (alpha - 1.0) / trace;
    return w;
}

Witness optimize_witness(const Witness& w, const std::vector<DensityMatrix>& probes,
                         std::size_t budget, std::uint64_t seed) {
    Witness current = w;
    std::vector<bool> detected;
    for (const auto& rho : probes)
        detected.push_back(trace_product(current.op, rho.matrix()) < 0.0);

    const std::size_t inner_restarts = 200;
    const double gap = 1e-5;
    std::size_t spent = 0;
    std::uint64_t salt = seed;

    auto acceptable = [&](const ComplexMatrix& candidate) {
        if (min_product_expectation(candidate, w.dims, inner_restarts, ++salt).value < -1e-7)
            return false;
        for (std::size_t i = 0; i < probes.size(); ++i)
            if (detected[i] && trace_product(candidate, probes[i].matrix()) >= 0.0)
                return false;
        return true;
    };

    while (spent < budget) {
        const ProductExpectation top =
            max_product_expectation(current.op, w.dims, inner_restarts, ++salt);
        spent += inner_restarts;
        if (top.value <= gap) break;  // subtraction fixpoint

        const ComplexMatrix d = projector(top.argmin.joint());
        auto subtracted = [&](double lam) {
            ComplexMatrix next = current.op;
            ComplexMatrix ld = d;
            ld *= lam;
            next -= ld;
            next *= 1.0 / (1.0 - lam);
            return next;
        };

        double lo = 0.0, hi = std::min(top.value, 0.9);
        if (!acceptable(subtracted(hi))) {
            for (int it = 0; it < 12; ++it) {
                const double mid = 0.5 * (lo + hi);
                (acceptable(subtracted(mid)) ? lo : hi) = mid;
                spent += inner_restarts;
            }
        } else {
            lo = hi;
        }
        if (lo <= 1e-9) break;
        current.op = subtracted(lo);
    }

    current.sep_floor =
        min_product_expectation(current.op, w.dims, w.search_restarts, ++salt).value;
    current.search_restarts = w.search_restarts;
    if (w.detected_value) {
        // Keep reporting against the same probe the input was built for,
        // when it is among the supplied probes; otherwise drop the field.
        current.detected_value.reset();
    }
    return current;
}

double PseudoMixture::coefficient_sum() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.c;
    return s;
}

ComplexMatrix PseudoMixture::reconstruct(Dims dims) const {
    ComplexMatrix out(dims.total(), dims.total());
    for (const auto& t : terms) {
        ComplexMatrix p = kron(projector(t.a), projector(t.b));
        p *= t.c;
        out += p;
    }
    return out;
}

namespace {

// Tomographically complete local frame: basis kets plus the four
// two-level superpositions per mode pair (the Pauli eigenstates for
// qubits).
std::vector<CVector> local_frame(std::size_t d) {
    std::vector<CVector> frame;
    for (std::size_t i = 0; i < d; ++i) {
        CVector v(d, 0.0);
        v[i] = 1.0;
        frame.push_back(v);
    }
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            for (const cdouble phase : {cdouble(1, 0), cdouble(-1, 0), cdouble(0, 1), cdouble(0, -1)}) {
                CVector v(d, 0.0);
                v[i] = r;
                v[j] = r * phase;
                frame.push_back(v);
            }
        }
    return frame;
}

struct FrameSolve {
    std::vector<double> c;
    double residual = 0.0;
};

FrameSolve solve_frame(const std::vector<std::pair<CVector, CVector>>& frame,
                       const std::vector<std::size_t>& active, const ComplexMatrix& w,
                       Dims dims) {
    const std::size_t q = active.size();
    ComplexMatrix gram(q, q);
    CVector rhs(q);
    for (std::size_t s = 0; s < q; ++s) {
        const auto& [as, bs] = frame[active[s]];
        const CVector js = tensor(as, bs);
        rhs[s] = expectation(w, js);
        for (std::size_t t = 0; t < q; ++t) {
            const auto& [at, bt] = frame[active[t]];
            gram(s, t) = std::norm(inner(as, at)) * std::norm(inner(bs, bt));
        }
    }
    hermitize(gram);
    const ComplexMatrix ginv = pseudo_inverse_psd(gram, 1e-12);
    FrameSolve out;
    out.c.resize(q);
    for (std::size_t s = 0; s < q; ++s) {
        cdouble acc = 0.0;
        for (std::size_t t = 0; t < q; ++t) acc += ginv(s, t) * rhs[t];
        out.c[s] = acc.real();
    }
    ComplexMatrix rec(dims.total(), dims.total());
    for (std::size_t s = 0; s < q; ++s) {
        const auto& [as, bs] = frame[active[s]];
        ComplexMatrix p = kron(projector(as), projector(bs));
        p *= out.c[s];
        rec += p;
    }
    out.residual = (rec - w).frobenius_norm();
    return out;
}

}  // namespace

PseudoMixture local_decomposition(const Witness& w) {
    const Dims dims = w.dims;
    const double trace = w.op.trace().real();
    if (trace <= 0.0) throw SingularFrame("witness trace must be positive");
    ComplexMatrix op = w.op;
    op *= 1.0 / trace;  // enforce the sum rule normalization

    std::vector<std::pair<CVector, CVector>> frame;
    for (const auto& a : local_frame(dims.m))
        for (const auto& b : local_frame(dims.n)) frame.push_back({a, b});

    std::vector<std::size_t> active(frame.size());
    std::iota(active.begin(), active.end(), std::size_t{0});
    FrameSolve best = solve_frame(frame, active, op, dims);
    if (best.residual > 1e-10)
        throw SingularFrame("frame failed to reconstruct the witness");

    // Greedy pruning: drop small-coefficient projectors while the exact
    // reconstruction survives. Kept cheap; minimality is best-effort.
    if (frame.size() <= 64) {
        bool improved = true;
        while (improved) {
            improved = false;
            std::vector<std::size_t> order(active.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return std::abs(best.c[a]) < std::abs(best.c[b]);
            });
            for (std::size_t pos : order) {
                if (active.size() <= 1) break;
                std::vector<std::size_t> trial;
                for (std::size_t i = 0; i < active.size(); ++i)
                    if (i != pos) trial.push_back(active[i]);
                const FrameSolve attempt = solve_frame(frame, trial, op, dims);
                if (attempt.residual <= 1e-10) {
                    active = std::move(trial);
                    best = attempt;
                    improved = true;
                    break;
                }
            }
        }
    }

    PseudoMixture out;
    for (std::size_t s = 0; s < active.size(); ++s) {
        if (std::abs(best.c[s]) < 1e-13) continue;
        out.terms.push_back({best.c[s], frame[active[s]].first, frame[active[s]].second});
    }
    return out;
}

DecomposabilityResult is_decomposable(const Witness& w, std::size_t budget,
                                      const std::vector<DensityMatrix>& ppt_probes) {
    DecomposabilityResult out;
    for (const auto& rho : ppt_probes) {
        if (!is_ppt(rho).ppt) continue;
        if (trace_product(w.op, rho.matrix()) < -1e-9) {
            out.kind = DecomposabilityKind::NonDecomposableCertified;
            out.ppt_state_detected = rho;
            return out;
        }
    }

    const Dims dims = w.dims;
    const double scale = std::max(1.0, w.op.frobenius_norm());
    ComplexMatrix p(dims.total(), dims.total());
    ComplexMatrix q(dims.total(), dims.total());
    double residual = scale;
    for (std::size_t it = 0; it < std::max<std::size_t>(budget, 2); ++it) {
        ComplexMatrix target_p = w.op - partial_transpose(q, dims);
        hermitize(target_p);
        p = project_psd(target_p);
        ComplexMatrix target_q = partial_transpose(w.op - p, dims);
        hermitize(target_q);
        q = project_psd(target_q);
        residual = (w.op - p - partial_transpose(q, dims)).frobenius_norm();
        if (residual <= 1e-8 * scale) break;
    }
    out.residual = residual;
    if (residual <= 1e-7) {
        out.kind = DecomposabilityKind::Decomposable;
        out.p = std::move(p);
        out.q = std::move(q);
    }
    return out;
}

}  // namespace entkit
