#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entkit/eigen.hpp"
#include "entkit/errors.hpp"
#include "entkit/separability.hpp"
#include "entkit/states.hpp"
#include "test_helpers.hpp"

using namespace entkit;
using entkit::testing::max_entry_distance;

namespace {

// Independent oracle: largest lambda keeping rho - lambda P PSD, by
// bisection on the minimal eigenvalue.
double bisect_max_weight(const ComplexMatrix& rho, const CVector& joint, double floor_tol) {
    const ComplexMatrix p = projector(joint);
    auto feasible = [&](double lam) {
        ComplexMatrix rem = rho;
        ComplexMatrix lp = p;
        lp *= lam;
        rem -= lp;
        return min_eigenvalue(rem) >= -floor_tol;
    };
    double lo = 0.0, hi = 1.0;
    if (!feasible(0.0)) return 0.0;
    while (feasible(hi) && hi < 4.0) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

TEST_CASE("partial transpose structure") {
    Rng rng(101);
    SUBCASE("product operators transpose on one side only") {
        const ComplexMatrix ga = random_ginibre(2, 2, rng);
        const ComplexMatrix gb = random_ginibre(3, 3, rng);
        const ComplexMatrix rho_a = ga * ga.adjoint();
        const ComplexMatrix rho_b = gb * gb.adjoint();
        const ComplexMatrix whole = kron(rho_a, rho_b);
        CHECK(max_entry_distance(partial_transpose(whole, Dims{2, 3}),
                                 kron(rho_a.transpose(), rho_b)) < 1e-14);
        CHECK(min_eigenvalue(partial_transpose(whole, Dims{2, 3})) > -1e-12);
    }
    SUBCASE("double application is the identity map") {
        const DensityMatrix rho = random_density(Dims{2, 3}, 6, rng);
        const ComplexMatrix once = partial_transpose(rho.matrix(), Dims{2, 3});
        CHECK(max_entry_distance(partial_transpose(once, Dims{2, 3}), rho.matrix()) == 0.0);
    }
    SUBCASE("transposing both sides gives the full transpose") {
        const DensityMatrix rho = random_density(Dims{2, 2}, 4, rng);
        const ComplexMatrix via_sides = partial_transpose(
            partial_transpose(rho.matrix(), Dims{2, 2}, Side::A), Dims{2, 2}, Side::B);
        CHECK(max_entry_distance(via_sides, rho.matrix().transpose()) < 1e-15);
    }
    SUBCASE("PPT on side A iff PPT on side B") {
        for (int t = 0; t < 30; ++t) {
            const DensityMatrix rho = random_density(Dims{2, 3}, 2 + t % 5, rng);
            const double a = min_eigenvalue(partial_transpose(rho.matrix(), Dims{2, 3}, Side::A));
            const double b = min_eigenvalue(partial_transpose(rho.matrix(), Dims{2, 3}, Side::B));
            CHECK((a >= -1e-9) == (b >= -1e-9));
        }
    }
}

TEST_CASE("is_ppt on named families") {
    CHECK(is_ppt(maximally_mixed(Dims{3, 4})).ppt);
    const PptResult w = is_ppt(werner_2x2(0.5));
    CHECK_FALSE(w.ppt);
    CHECK(w.min_eigenvalue == doctest::Approx(-1.0 / 8.0).epsilon(1e-12));
    Rng rng(55);
    CHECK(is_ppt(random_separable(Dims{2, 3}, 5, rng)).ppt);
}

TEST_CASE("max subtractable weight") {
    Rng rng(202);
    SUBCASE("a product state subtracts itself entirely") {
        const ProductVector pv = random_product_vector(Dims{2, 2}, rng);
        const DensityMatrix rho =
            DensityMatrix::normalized(Dims{2, 2}, projector(pv.joint()));
        const auto res = max_subtractable_weight(rho, pv, false);
        CHECK(res.in_range);
        CHECK(res.degenerate);
        CHECK(res.lambda_max == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("nothing can be subtracted from a pure entangled state") {
        const DensityMatrix rho = maximally_entangled(2).to_density();
        for (int t = 0; t < 5; ++t) {
            const auto res =
                max_subtractable_weight(rho, random_product_vector(Dims{2, 2}, rng), false);
            CHECK_FALSE(res.in_range);
            CHECK(res.lambda_max == 0.0);
        }
    }
    SUBCASE("inverse formula agrees with the bisection oracle on full-rank states") {
        for (int t = 0; t < 15; ++t) {
            const DensityMatrix rho = random_density(Dims{2, 2}, 4, rng);
            const ProductVector pv = random_product_vector(Dims{2, 2}, rng);
            const auto res = max_subtractable_weight(rho, pv, false);
            const double oracle = bisect_max_weight(rho.matrix(), pv.joint(), 1e-13);
            CHECK(res.lambda_max == doctest::Approx(oracle).epsilon(1e-9));
            REQUIRE(res.remainder);
            CHECK(min_eigenvalue(res.remainder->matrix()) >= -1e-9);
        }
    }
    SUBCASE("ppt-constrained weight also keeps the partial transpose positive") {
        for (int t = 0; t < 10; ++t) {
            const DensityMatrix rho = random_separable(Dims{2, 2}, 4, rng);
            const ProductVector pv = random_product_vector(Dims{2, 2}, rng);
            const auto res = max_subtractable_weight(rho, pv, true);
            if (res.lambda_max == 0.0 || res.degenerate) continue;
            REQUIRE(res.remainder);
            const ComplexMatrix pt =
                partial_transpose(res.remainder->matrix(), Dims{2, 2});
            CHECK(min_eigenvalue(pt) >= -1e-8);
        }
    }
}

TEST_CASE("best separable approximation reaches 1 on PPT 2x2 inputs") {
    Rng rng(303);
    int ppt_count = 0;
    int trial = 0;
    while (ppt_count < 12 && trial < 400) {
        ++trial;
        const DensityMatrix rho = random_density(Dims{2, 2}, 4, rng);
        if (!is_ppt(rho).ppt) continue;
        ++ppt_count;
        const Decomposition dec = best_separable_approximation(rho, true, 20000, 11 + trial);
        CHECK(dec.lambda >= 1.0 - 1e-6);
        CHECK((dec.reassemble(Dims{2, 2}) - rho.matrix()).frobenius_norm() <= 1e-8);
    }
    CHECK(ppt_count == 12);
}

TEST_CASE("best separable approximation on explicit separable mixtures") {
    Rng rng(304);
    for (const Dims d : {Dims{2, 2}, Dims{2, 3}}) {
        for (int t = 0; t < 4; ++t) {
            const DensityMatrix rho = random_separable(d, d.total(), rng);
            const Decomposition dec = best_separable_approximation(rho, true, 20000, 7 + t);
            CHECK(dec.lambda >= 1.0 - 1e-6);
            CHECK((dec.reassemble(d) - rho.matrix()).frobenius_norm() <= 1e-8);
            double total = 0.0;
            for (const auto& term : dec.separable_part) {
                CHECK(term.weight > 0.0);
                total += term.weight;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("best separable approximation of a pure entangled state is trivial") {
    const DensityMatrix rho = maximally_entangled(2).to_density();
    const Decomposition dec = best_separable_approximation(rho, false, 4000, 3);
    CHECK(dec.lambda <= 1e-9);
    REQUIRE(dec.edge_part);
    CHECK(max_entry_distance(dec.edge_part->matrix(), rho.matrix()) < 1e-10);
}

TEST_CASE("entangled weight of werner states grows with p") {
    Rng unused(0);
    double prev = -1.0;
    for (double p : {0.4, 0.55, 0.7, 0.85, 1.0}) {
        const DensityMatrix rho = werner_2x2(p);
        const Decomposition dec = best_separable_approximation(rho, false, 12000, 21);
        const double entangled_weight = 1.0 - dec.lambda;
        CHECK(entangled_weight >= prev - 1e-6);
        prev = entangled_weight;

        // Soundness of every greedy step against the bisection oracle.
        ComplexMatrix running = rho.matrix();
        for (const auto& term : dec.separable_part) {
            const double w = term.weight * dec.lambda;
            const double allowed = bisect_max_weight(running, term.pv.joint(), 1e-9);
            CHECK(w <= allowed + 1e-7);
            ComplexMatrix p_term = projector(term.pv.joint());
            p_term *= w;
            running -= p_term;
        }
        CHECK(min_eigenvalue(running) >= -1e-9);
    }
}

TEST_CASE("bsa lambda is invariant under local unitaries on 2x2") {
    Rng rng(404);
    const DensityMatrix rho = werner_2x2(0.75);
    const Decomposition base = best_separable_approximation(rho, false, 12000, 5);
    for (int t = 0; t < 3; ++t) {
        const DensityMatrix moved =
            apply_local_unitary(rho, random_unitary(2, rng), random_unitary(2, rng));
        const Decomposition dec = best_separable_approximation(moved, false, 12000, 5 + t);
        CHECK(std::abs(dec.lambda - base.lambda) < 1e-4);
    }
}

TEST_CASE("classify_low_dim matches the Peres-Horodecki criterion") {
    SUBCASE("separable werner state") {
        const auto verdict = classify_low_dim(werner_2x2(0.2));
        CHECK(verdict.kind == VerdictKind::Separable);
        REQUIRE(verdict.certificate);
        CHECK(verdict.certificate->lambda >= 1.0 - 1e-6);
    }
    SUBCASE("entangled werner state") {
        const auto verdict = classify_low_dim(werner_2x2(0.9));
        CHECK(verdict.kind == VerdictKind::Entangled);
        REQUIRE(verdict.nppt_evidence);
        CHECK(verdict.nppt_evidence->min_eigenvalue < -1e-3);
    }
    SUBCASE("2x3 maximally mixed is separable") {
        const auto verdict = classify_low_dim(maximally_mixed(Dims{2, 3}));
        CHECK(verdict.kind == VerdictKind::Separable);
    }
    SUBCASE("out-of-scope dimensions are rejected") {
        CHECK_THROWS_AS(classify_low_dim(maximally_mixed(Dims{3, 3})), DimensionOutOfScope);
    }
}

TEST_CASE("low rank constructive separability") {
    Rng rng(505);
    SUBCASE("mixtures of at most N products in 2xN are recovered") {
        for (const Dims d : {Dims{2, 3}, Dims{2, 4}}) {
            for (std::size_t k = 2; k <= d.n; ++k) {
                const DensityMatrix rho = random_separable(d, k, rng);
                const auto verdict = low_rank_separability(rho, 17);
                REQUIRE(verdict.kind == VerdictKind::Separable);
                REQUIRE(verdict.certificate);
                CHECK((verdict.certificate->reassemble(d) - rho.matrix()).frobenius_norm() <=
                      1e-8);
            }
        }
    }
    SUBCASE("full-rank 3x3 PPT state stays undecided") {
        const auto verdict = low_rank_separability(maximally_mixed(Dims{3, 3}), 3);
        CHECK(verdict.kind == VerdictKind::PptUndecided);
    }
    SUBCASE("rank-3 PPT states are never labeled entangled") {
        for (int t = 0; t < 6; ++t) {
            const DensityMatrix rho = random_separable(Dims{3, 3}, 3, rng);
            const auto verdict = low_rank_separability(rho, 19 + t);
            CHECK(verdict.kind != VerdictKind::Entangled);
        }
    }
    SUBCASE("NPPT input is rejected") {
        CHECK_THROWS_AS(low_rank_separability(werner_2x2(0.9), 1), NotPpt);
    }
}

TEST_CASE("edge state search") {
    Rng rng(606);
    SUBCASE("full-rank separable state is not an edge state") {
        const auto res = is_edge_state(random_separable(Dims{2, 2}, 6, rng), 100, 1);
        CHECK_FALSE(res.is_edge);
        REQUIRE(res.found);
    }
    SUBCASE("maximally mixed is not an edge state") {
        const auto res = is_edge_state(maximally_mixed(Dims{3, 3}), 100, 1);
        CHECK_FALSE(res.is_edge);
    }
    SUBCASE("tiles state is reported as an edge state") {
        const auto res = is_edge_state(tiles_upb_state(), 2000, 1);
        CHECK(res.is_edge);
    }
    SUBCASE("bsa on the tiles state keeps the whole state as edge part") {
        const Decomposition dec = best_separable_approximation(tiles_upb_state(), true, 4000, 9);
        CHECK(dec.lambda <= 1e-7);
        REQUIRE(dec.edge_part);
    }
    SUBCASE("NPPT input is rejected") {
        CHECK_THROWS_AS(is_edge_state(werner_2x2(0.9), 10, 1), NotPpt);
    }
}
