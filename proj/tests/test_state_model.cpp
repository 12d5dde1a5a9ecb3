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

TEST_CASE("density matrix invariants are enforced") {
    SUBCASE("non-hermitian rejected") {
        ComplexMatrix m = ComplexMatrix::identity(4);
        m *= 0.25;
        m(0, 1) = 0.1;
        CHECK_THROWS_AS(DensityMatrix(Dims{2, 2}, m), InvariantViolation);
    }
    SUBCASE("wrong trace rejected") {
        CHECK_THROWS_AS(DensityMatrix(Dims{2, 2}, ComplexMatrix::identity(4)),
                        InvariantViolation);
    }
    SUBCASE("negative eigenvalue rejected") {
        ComplexMatrix m(4, 4);
        m(0, 0) = 1.5;
        m(1, 1) = -0.5;
        CHECK_THROWS_AS(DensityMatrix(Dims{2, 2}, m), InvariantViolation);
    }
    SUBCASE("sampled states pass") {
        Rng rng(2);
        for (int t = 0; t < 20; ++t) {
            const DensityMatrix rho = random_density(Dims{2, 3}, 1 + t % 6, rng);
            CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-12);
            CHECK(rho.rank() == 1 + t % 6);
        }
    }
}

TEST_CASE("maximally entangled state") {
    const PureState psi = maximally_entangled(2);
    CHECK(std::abs(psi.amplitudes()[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(psi.amplitudes()[3] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(psi.amplitudes()[1]) == 0.0);

    SUBCASE("schmidt rank equals M") {
        for (std::size_t m : {2, 3, 4})
            CHECK(schmidt_decomposition(maximally_entangled(m)).rank() == m);
    }
    SUBCASE("partial transpose minimum eigenvalue is -1/M") {
        for (std::size_t m : {2, 3, 4, 5}) {
            const DensityMatrix rho = maximally_entangled(m).to_density();
            const ComplexMatrix pt = partial_transpose(rho.matrix(), rho.dims());
            CHECK(min_eigenvalue(pt) == doctest::Approx(-1.0 / double(m)).epsilon(1e-10));
        }
    }
}

TEST_CASE("symmetric-antisymmetric family") {
    SUBCASE("maximally mixed point") {
        for (std::size_t d : {2, 3}) {
            const double lambda = double(d - 1) / double(2 * d);
            const DensityMatrix rho = sym_antisym_family(d, lambda);
            CHECK(max_entry_distance(rho.matrix(), maximally_mixed(Dims{d, d}).matrix()) <
                  1e-14);
            CHECK(is_ppt(rho).ppt);
        }
    }
    SUBCASE("pure antisymmetric point in d=2 is the singlet") {
        const DensityMatrix rho = sym_antisym_family(2, 1.0);
        CHECK(rho.rank() == 1);
        CHECK(is_ppt(rho).min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));
    }
    SUBCASE("NPPT threshold in d=3 sits at lambda = 1/2") {
        // Scan and bisect the sign change of the minimal PT eigenvalue.
        double lo = 0.3, hi = 0.8;
        auto min_eig = [](double lam) {
            const DensityMatrix rho = sym_antisym_family(3, lam);
            return is_ppt(rho).min_eigenvalue;
        };
        REQUIRE(min_eig(lo) > 0.0);
        REQUIRE(min_eig(hi) < 0.0);
        for (int it = 0; it < 40; ++it) {
            const double mid = 0.5 * (lo + hi);
            (min_eig(mid) > 0.0 ? lo : hi) = mid;
        }
        CHECK(0.5 * (lo + hi) == doctest::Approx(0.5).epsilon(1e-6));
    }
}

TEST_CASE("werner family") {
    SUBCASE("p=0 is maximally mixed") {
        CHECK(max_entry_distance(werner_2x2(0.0).matrix(),
                                 maximally_mixed(Dims{2, 2}).matrix()) < 1e-15);
    }
    SUBCASE("partial transpose spectrum matches (1-p)/4 and (1-3p)/4") {
        for (double p : {0.1, 0.3, 1.0 / 3.0, 0.5, 0.9}) {
            const auto es = hermitian_eigensystem(
                partial_transpose(werner_2x2(p).matrix(), Dims{2, 2}));
            CHECK(es.values.front() == doctest::Approx((1.0 - 3.0 * p) / 4.0).epsilon(1e-12));
            for (std::size_t k = 1; k < 4; ++k)
                CHECK(es.values[k] == doctest::Approx((1.0 + p) / 4.0).epsilon(1e-12));
        }
    }
    SUBCASE("PPT exactly below p = 1/3") {
        CHECK(is_ppt(werner_2x2(1.0 / 3.0 - 1e-6)).ppt);
        CHECK_FALSE(is_ppt(werner_2x2(1.0 / 3.0 + 1e-6)).ppt);
    }
    SUBCASE("p=1 is the pure singlet") { CHECK(werner_2x2(1.0).rank() == 1); }
}

TEST_CASE("range membership of product vectors") {
    Rng rng(5);
    SUBCASE("full-rank state contains every product vector") {
        const DensityMatrix rho = random_density(Dims{2, 2}, 4, rng);
        CHECK(range_contains_product(rho, random_product_vector(Dims{2, 2}, rng)));
    }
    SUBCASE("a product state contains itself") {
        const ProductVector pv = random_product_vector(Dims{2, 3}, rng);
        const DensityMatrix rho =
            DensityMatrix::normalized(Dims{2, 3}, projector(pv.joint()));
        CHECK(range_contains_product(rho, pv));
    }
    SUBCASE("orthogonal vector is outside a rank-1 range") {
        CVector e0 = {1.0, 0.0}, e1 = {0.0, 1.0}, f0 = {1.0, 0.0};
        const DensityMatrix rho =
            DensityMatrix::normalized(Dims{2, 2}, projector(tensor(e0, f0)));
        CHECK_FALSE(range_contains_product(rho, ProductVector{e1, f0}));
    }
}

TEST_CASE("schmidt decomposition") {
    Rng rng(8);
    SUBCASE("product state has a single unit coefficient") {
        const ProductVector pv = random_product_vector(Dims{3, 4}, rng);
        const auto sd = schmidt_decomposition(PureState(Dims{3, 4}, pv.joint()));
        CHECK(sd.coefficients[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sd.rank() == 1);
    }
    SUBCASE("maximally entangled state in d=3 has three equal coefficients") {
        const auto sd = schmidt_decomposition(maximally_entangled(3));
        for (int k = 0; k < 3; ++k)
            CHECK(sd.coefficients[k] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    }
    SUBCASE("coefficients match singular values computed through the other gram matrix") {
        for (int t = 0; t < 20; ++t) {
            const PureState psi = random_pure_state(Dims{3, 5}, rng);
            ComplexMatrix c(3, 5);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t k = 0; k < 5; ++k) c(i, k) = psi.amplitudes()[i * 5 + k];
            // Oracle route: eigenvalues of C C^dagger instead of C^dagger C.
            auto es = hermitian_eigensystem(c * c.adjoint());
            const auto sd = schmidt_decomposition(psi);
            for (std::size_t k = 0; k < 3; ++k)
                CHECK(sd.coefficients[k] ==
                      doctest::Approx(std::sqrt(std::max(0.0, es.values[2 - k])))
                          .epsilon(1e-10));
        }
    }
    SUBCASE("reconstruction within 1e-10") {
        for (int t = 0; t < 10; ++t) {
            const PureState psi = random_pure_state(Dims{2, 4}, rng);
            const auto sd = schmidt_decomposition(psi);
            CVector rec = sd.reconstruct();
            axpy(-1.0, psi.amplitudes(), rec);
            CHECK(norm(rec) < 1e-10);
        }
    }
}

TEST_CASE("partial transpose spectrum is invariant under local unitaries") {
    Rng rng(13);
    for (int t = 0; t < 25; ++t) {
        const Dims d = t % 2 ? Dims{2, 3} : Dims{2, 2};
        const DensityMatrix rho = random_density(d, d.total(), rng);
        const auto base = hermitian_eigensystem(partial_transpose(rho.matrix(), d));
        const DensityMatrix moved =
            apply_local_unitary(rho, random_unitary(d.m, rng), random_unitary(d.n, rng));
        const auto after = hermitian_eigensystem(partial_transpose(moved.matrix(), d));
        for (std::size_t k = 0; k < base.values.size(); ++k)
            CHECK(after.values[k] == doctest::Approx(base.values[k]).epsilon(1e-8));
    }
}

TEST_CASE("tiles state is PPT with rank 4") {
    const DensityMatrix rho = tiles_upb_state();
    CHECK(rho.rank() == 4);
    CHECK(is_ppt(rho).ppt);
}
