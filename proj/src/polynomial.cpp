#include "entkit/polynomial.hpp"

#include <cmath>
#include <numbers>

namespace entkit {

std::vector<cdouble> trim_polynomial(std::vector<cdouble> coeffs, double drop_tol) {
    double cmax = 0.0;
    for (const auto& c : coeffs) cmax = std::max(cmax, std::abs(c));
    if (cmax == 0.0) return {};
    while (!coeffs.empty() && std::abs(coeffs.back()) <= drop_tol * cmax) coeffs.pop_back();
    return coeffs;
}

cdouble evaluate_polynomial(const std::vector<cdouble>& coeffs, cdouble x) {
    cdouble acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
    return acc;
}

std::vector<cdouble> polynomial_roots(const std::vector<cdouble>& coeffs, double tol,
                                      int max_iter) {
    const std::size_t deg = coeffs.empty() ? 0 : coeffs.size() - 1;
    if (deg == 0) return {};
    if (deg == 1) return {-coeffs[0] / coeffs[1]};

    // Durand-Kerner from a slightly detuned circle.
    double radius = 0.0;
    for (std::size_t k = 0; k < deg; ++k)
        radius = std::max(radius, std::pow(std::abs(coeffs[k] / coeffs[deg]),
                                           1.0 / double(deg - k)));
    radius = 1.0 + radius;
    std::vector<cdouble> roots(deg);
    for (std::size_t k = 0; k < deg; ++k) {
        const double angle =
            2.0 * std::numbers::pi * double(k) / double(deg) + 0.35;
        roots[k] = radius * cdouble(std::cos(angle), std::sin(angle));
    }

    for (int it = 0; it < max_iter; ++it) {
        double shift = 0.0;
        for (std::size_t k = 0; k < deg; ++k) {
            cdouble denom = coeffs[deg];
            for (std::size_t j = 0; j < deg; ++j)
                if (j != k) denom *= roots[k] - roots[j];
            if (std::abs(denom) == 0.0) continue;
            const cdouble delta = evaluate_polynomial(coeffs, roots[k]) / denom;
            roots[k] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < tol * std::max(1.0, radius)) break;
    }
    return roots;
}

cdouble determinant(ComplexMatrix a) {
    const std::size_t n = a.rows();
    cdouble det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (std::abs(a(pivot, col)) == 0.0) return 0.0;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const cdouble factor = a(r, col) / a(col, col);
            for (std::size_t c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
        }
    }
    return det;
}

std::vector<cdouble> determinant_pencil_coefficients(const ComplexMatrix& a,
                                                     const ComplexMatrix& b) {
    const std::size_t n = a.rows();
    const std::size_t m = n + 1;  // degree <= n, so n+1 nodes
    std::vector<cdouble> values(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double angle = 2.0 * std::numbers::pi * double(j) / double(m);
        const cdouble node(std::cos(angle), std::sin(angle));
        ComplexMatrix pencil = b;
        pencil *= node;
        pencil += a;
        values[j] = determinant(pencil);
    }
    // Nodes are the m-th roots of unity: inverse DFT gives the coefficients.
    std::vector<cdouble> coeffs(m);
    for (std::size_t k = 0; k < m; ++k) {
        cdouble acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double angle = -2.0 * std::numbers::pi * double(j * k) / double(m);
            acc += values[j] * cdouble(std::cos(angle), std::sin(angle));
        }
        coeffs[k] = acc / double(m);
    }
    return coeffs;
}

}  // namespace entkit
