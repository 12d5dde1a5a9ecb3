#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "entkit/eigen.hpp"
#include "entkit/errors.hpp"
#include "entkit/polynomial.hpp"
#include "entkit/random.hpp"
#include "test_helpers.hpp"

using namespace entkit;
using entkit::testing::is_orthonormal;
using entkit::testing::max_entry_distance;

TEST_CASE("identity eigensystem") {
    const auto es = hermitian_eigensystem(ComplexMatrix::identity(4));
    for (double v : es.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(is_orthonormal(es.vectors, 1e-12));
}

TEST_CASE("diagonal eigenvalues are sorted ascending") {
    ComplexMatrix a(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = -1.0;
    a(2, 2) = 0.0;
    const auto es = hermitian_eigensystem(a);
    CHECK(es.values[0] == doctest::Approx(-1.0));
    CHECK(es.values[1] == doctest::Approx(0.0));
    CHECK(es.values[2] == doctest::Approx(3.0));
}

TEST_CASE("non-hermitian input is rejected") {
    ComplexMatrix a(2, 2);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eigensystem(a), NonHermitian);
}

TEST_CASE("eigen reconstruction residual on random hermitian matrices") {
    Rng rng(20240501);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t dim = 2 + trial % 11;  // 2..12
        const ComplexMatrix a = random_hermitian(dim, rng);
        const auto es = hermitian_eigensystem(a);
        REQUIRE(is_orthonormal(es.vectors, 1e-12));
        const double norm_a = std::max(a.frobenius_norm(), 1e-300);
        for (std::size_t k = 0; k < dim; ++k) {
            const CVector v = es.vectors.column(k);
            CVector res = a * v;
            axpy(-es.values[k], v, res);
            CHECK(norm(res) <= 1e-10 * norm_a);
        }
    }
}

TEST_CASE("moderate-size hermitian eigensystem stays accurate") {
    Rng rng(7);
    const ComplexMatrix a = random_hermitian(64, rng);
    const auto es = hermitian_eigensystem(a);
    ComplexMatrix rec(64, 64);
    for (std::size_t k = 0; k < 64; ++k) {
        ComplexMatrix p = outer(es.vectors.column(k), es.vectors.column(k));
        p *= es.values[k];
        rec += p;
    }
    CHECK((rec - a).frobenius_norm() <= 1e-10 * a.frobenius_norm());
}

TEST_CASE("kernel basis dimensions") {
    Rng rng(3);
    SUBCASE("rank-1 projector in dim 4 has three kernel vectors") {
        const CVector v = random_unit_vector(4, rng);
        CHECK(kernel_basis(projector(v)).size() == 3);
    }
    SUBCASE("full-rank matrix has empty kernel") {
        const ComplexMatrix g = random_ginibre(5, 5, rng);
        CHECK(kernel_basis(g * g.adjoint() + ComplexMatrix::identity(5)).empty());
    }
    SUBCASE("maximally mixed operator has empty kernel") {
        ComplexMatrix id = ComplexMatrix::identity(6);
        id *= 1.0 / 6.0;
        CHECK(kernel_basis(id).empty());
    }
}

TEST_CASE("kron basics") {
    CHECK(max_entry_distance(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(3)),
                             ComplexMatrix::identity(6)) == 0.0);

    Rng rng(11);
    const ComplexMatrix a = random_ginibre(3, 3, rng);
    const ComplexMatrix b = random_ginibre(2, 2, rng);
    CHECK(std::abs(kron(a, b).trace() - a.trace() * b.trace()) < 1e-12);

    SUBCASE("eigenvalues of a tensor product are pairwise products") {
        const ComplexMatrix ha = random_hermitian(2, rng);
        const ComplexMatrix hb = random_hermitian(2, rng);
        const auto ea = hermitian_eigensystem(ha);
        const auto eb = hermitian_eigensystem(hb);
        std::vector<double> expected;
        for (double x : ea.values)
            for (double y : eb.values) expected.push_back(x * y);
        std::sort(expected.begin(), expected.end());
        const auto et = hermitian_eigensystem(kron(ha, hb));
        for (std::size_t k = 0; k < expected.size(); ++k)
            CHECK(et.values[k] == doctest::Approx(expected[k]).epsilon(1e-10));
    }

    SUBCASE("associativity is exact by index convention") {
        // Gaussian-integer entries make both association orders rounding-free.
        auto int_matrix = [&rng](std::size_t n) {
            ComplexMatrix m(n, n);
            std::uniform_int_distribution<int> d(-4, 4);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) = cdouble(d(rng), d(rng));
            return m;
        };
        const ComplexMatrix x = int_matrix(2), y = int_matrix(3), z = int_matrix(2);
        CHECK(max_entry_distance(kron(kron(x, y), z), kron(x, kron(y, z))) == 0.0);
        const ComplexMatrix c = random_ginibre(2, 2, rng);
        CHECK(max_entry_distance(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-15);
    }
}

namespace {

ComplexMatrix canonical_block_form(const std::vector<double>& z, std::size_t n) {
    ComplexMatrix j(n, n);
    for (std::size_t k = 0; k < z.size(); ++k) {
        j(2 * k, 2 * k + 1) = z[k];
        j(2 * k + 1, 2 * k) = -z[k];
    }
    return j;
}

}  // namespace

TEST_CASE("antisymmetric block diagonalization") {
    SUBCASE("matrix already in block form is recovered") {
        const std::vector<double> z = {0.9, 0.4};
        const ComplexMatrix w = canonical_block_form(z, 5);
        const auto bd = antisymmetric_block_diagonalize(w);
        REQUIRE(bd.z.size() == 2);
        CHECK(bd.z[0] == doctest::Approx(0.9).epsilon(1e-12));
        CHECK(bd.z[1] == doctest::Approx(0.4).epsilon(1e-12));
    }
    SUBCASE("zero matrix has no blocks") {
        const auto bd = antisymmetric_block_diagonalize(ComplexMatrix(4, 4));
        CHECK(bd.z.empty());
        CHECK(is_orthonormal(bd.unitary, 1e-12));
    }
    SUBCASE("z values square to the paired eigenvalues of w w^dagger") {
        Rng rng(17);
        const ComplexMatrix w = random_antisymmetric(6, rng);
        const auto bd = antisymmetric_block_diagonalize(w);
        auto es = hermitian_eigensystem(w * w.adjoint());
        std::sort(es.values.rbegin(), es.values.rend());
        REQUIRE(bd.z.size() == 3);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(es.values[2 * k] == doctest::Approx(es.values[2 * k + 1]).epsilon(1e-9));
            CHECK(bd.z[k] * bd.z[k] == doctest::Approx(es.values[2 * k]).epsilon(1e-9));
        }
    }
    SUBCASE("reconstruction and unitarity on random inputs") {
        Rng rng(23);
        for (std::size_t dim : {2, 3, 4, 5, 6, 7, 8}) {
            const ComplexMatrix w = random_antisymmetric(dim, rng);
            const auto bd = antisymmetric_block_diagonalize(w);
            REQUIRE(is_orthonormal(bd.unitary, 1e-11));
            const ComplexMatrix rec = bd.unitary * canonical_block_form(bd.z, dim) *
                                      bd.unitary.transpose();
            CHECK((rec - w).frobenius_norm() <= 1e-10 * std::max(1.0, w.frobenius_norm()));
            const bool descending = std::is_sorted(bd.z.rbegin(), bd.z.rend());
            CHECK(descending);
        }
    }
    SUBCASE("z multiset is invariant under congruence by a unitary") {
        Rng rng(29);
        const ComplexMatrix w = random_antisymmetric(6, rng);
        const auto base = antisymmetric_block_diagonalize(w);
        for (int t = 0; t < 5; ++t) {
            const ComplexMatrix v = random_unitary(6, rng);
            const auto moved = antisymmetric_block_diagonalize(v * w * v.transpose());
            REQUIRE(moved.z.size() == base.z.size());
            for (std::size_t k = 0; k < base.z.size(); ++k)
                CHECK(moved.z[k] == doctest::Approx(base.z[k]).epsilon(1e-8));
        }
    }
    SUBCASE("symmetric input is rejected") {
        Rng rng(5);
        CHECK_THROWS_AS(antisymmetric_block_diagonalize(random_symmetric(4, rng)),
                        NotAntisymmetric);
    }
}

TEST_CASE("takagi factorization") {
    Rng rng(31);
    for (std::size_t dim : {2, 3, 4, 6}) {
        const ComplexMatrix v = random_symmetric(dim, rng);
        const auto tf = takagi_factorize(v);
        REQUIRE(is_orthonormal(tf.unitary, 1e-11));
        ComplexMatrix d(dim, dim);
        for (std::size_t k = 0; k < tf.d.size(); ++k) d(k, k) = tf.d[k];
        const ComplexMatrix rec = tf.unitary * d * tf.unitary.transpose();
        CHECK((rec - v).frobenius_norm() <= 1e-10 * std::max(1.0, v.frobenius_norm()));
    }
    SUBCASE("d multiset invariant under congruence") {
        const ComplexMatrix v = random_symmetric(4, rng);
        const auto base = takagi_factorize(v);
        const ComplexMatrix u = random_unitary(4, rng);
        const auto moved = takagi_factorize(u * v * u.transpose());
        REQUIRE(moved.d.size() == base.d.size());
        for (std::size_t k = 0; k < base.d.size(); ++k)
            CHECK(moved.d[k] == doctest::Approx(base.d[k]).epsilon(1e-8));
    }
    SUBCASE("antisymmetric input is rejected") {
        CHECK_THROWS_AS(takagi_factorize(random_antisymmetric(4, rng)), NotSymmetric);
    }
}

TEST_CASE("polynomial roots and determinant pencils") {
    // (x - 2)(x + i)(x - 1 - i): coefficients by direct expansion.
    const std::vector<cdouble> roots_in = {2.0, cdouble(0, -1), cdouble(1, 1)};
    std::vector<cdouble> coeffs = {1.0};
    for (const auto& r : roots_in) {
        std::vector<cdouble> next(coeffs.size() + 1, 0.0);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            next[k + 1] += coeffs[k];
            next[k] -= r * coeffs[k];
        }
        coeffs = next;
    }
    auto roots = polynomial_roots(coeffs);
    REQUIRE(roots.size() == 3);
    for (const auto& want : roots_in) {
        double best = 1e9;
        for (const auto& got : roots) best = std::min(best, std::abs(got - want));
        CHECK(best < 1e-10);
    }

    Rng rng(37);
    const ComplexMatrix a = random_ginibre(4, 4, rng);
    const ComplexMatrix b = random_ginibre(4, 4, rng);
    const auto pencil = determinant_pencil_coefficients(a, b);
    const cdouble x(0.3, -0.8);
    ComplexMatrix probe = b;
    probe *= x;
    probe += a;
    CHECK(std::abs(evaluate_polynomial(pencil, x) - determinant(probe)) <
          1e-9 * (1.0 + std::abs(determinant(probe))));
}
