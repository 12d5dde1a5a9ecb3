// Seeded sampling helpers. Every randomized routine in the toolkit takes
// an explicit generator or seed so runs are reproducible.

#pragma once

#include <cstdint>
#include <random>

#include "entkit/complex_matrix.hpp"

namespace entkit {

using Rng = std::mt19937_64;

cdouble randn_complex(Rng& rng);
CVector random_unit_vector(std::size_t dim, Rng& rng);
ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);
ComplexMatrix random_hermitian(std::size_t dim, Rng& rng);
ComplexMatrix random_antisymmetric(std::size_t dim, Rng& rng);
ComplexMatrix random_symmetric(std::size_t dim, Rng& rng);

}  // namespace entkit
