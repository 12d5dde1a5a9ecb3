#include "entkit/random.hpp"

#include <cmath>

namespace entkit {

cdouble randn_complex(Rng& rng) {
    std::normal_distribution<double> n;
    return cdouble(n(rng), n(rng)) / std::sqrt(2.0);
}

CVector random_unit_vector(std::size_t dim, Rng& rng) {
    CVector v(dim);
    for (auto& x : v) x = randn_complex(rng);
    normalize(v);
    return v;
}

ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    ComplexMatrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) g(i, j) = randn_complex(rng);
    return g;
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    // Gram-Schmidt on a Ginibre sample with phase-fixed diagonal.
    const ComplexMatrix g = random_ginibre(dim, dim, rng);
    ComplexMatrix u(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        CVector v = g.column(j);
        for (std::size_t k = 0; k < j; ++k) {
            const CVector uk = u.column(k);
            axpy(-inner(uk, v), uk, v);
        }
        const cdouble d = inner(g.column(j), v);
        normalize(v);
        if (std::abs(d) > 0.0) {
            const cdouble phase = d / std::abs(d);
            for (auto& x : v) x *= phase;
        }
        u.set_column(j, v);
    }
    return u;
}

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
    const ComplexMatrix g = random_ginibre(dim, dim, rng);
    ComplexMatrix h = g + g.adjoint();
    h *= 0.5;
    return h;
}

ComplexMatrix random_antisymmetric(std::size_t dim, Rng& rng) {
    const ComplexMatrix g = random_ginibre(dim, dim, rng);
    ComplexMatrix w = g - g.transpose();
    w *= 0.5;
    return w;
}

ComplexMatrix random_symmetric(std::size_t dim, Rng& rng) {
    const ComplexMatrix g = random_ginibre(dim, dim, rng);
    ComplexMatrix v = g + g.transpose();
    v *= 0.5;
    return v;
}

}  // namespace entkit
