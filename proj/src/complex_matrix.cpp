#include "entkit/complex_matrix.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace entkit {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<cdouble>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw std::invalid_argument("ragged initializer");
        std::size_t j = 0;
        for (const auto& x : row) m(i, j++) = x;
        ++i;
    }
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    assert(rows_ == other.rows_ && cols_ == other.cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += other.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    assert(rows_ == other.rows_ && cols_ == other.cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= other.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cdouble scalar) {
    for (auto& x : a_) x *= scalar;
    return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = std::conj(a_[k]);
    return m;
}

cdouble ComplexMatrix::trace() const {
    assert(square());
    cdouble t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : a_) s += std::norm(x);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, std::abs(x));
    return m;
}

double ComplexMatrix::hermiticity_violation() const {
    assert(square());
    double v = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            v = std::max(v, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return v;
}

double ComplexMatrix::antisymmetry_violation() const {
    assert(square());
    double v = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            v = std::max(v, std::abs((*this)(i, j) + (*this)(j, i)));
    return v;
}

double ComplexMatrix::symmetry_violation() const {
    assert(square());
    double v = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            v = std::max(v, std::abs((*this)(i, j) - (*this)(j, i)));
    return v;
}

CVector ComplexMatrix::column(std::size_t j) const {
    CVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void ComplexMatrix::set_column(std::size_t j, const CVector& v) {
    assert(v.size() == rows_);
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs += rhs;
    return lhs;
}

ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs -= rhs;
    return lhs;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    assert(lhs.cols() == rhs.rows());
    ComplexMatrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const cdouble aik = lhs(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

ComplexMatrix operator*(cdouble scalar, ComplexMatrix m) {
    m *= scalar;
    return m;
}

CVector operator*(const ComplexMatrix& m, const CVector& v) {
    assert(m.cols() == v.size());
    CVector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        cdouble s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

cdouble inner(const CVector& u, const CVector& v) {
    assert(u.size() == v.size());
    cdouble s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

double norm(const CVector& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

void normalize(CVector& v) {
    const double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
    for (auto& x : v) x /= n;
}

CVector conjugate(const CVector& v) {
    CVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::conj(v[i]);
    return out;
}

CVector scaled(const CVector& v, cdouble s) {
    CVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
    return out;
}

void axpy(cdouble a, const CVector& x, CVector& y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

CVector tensor(const CVector& e, const CVector& f) {
    CVector out(e.size() * f.size());
    std::size_t idx = 0;
    for (const auto& a : e)
        for (const auto& b : f) out[idx++] = a * b;
    return out;
}

ComplexMatrix outer(const CVector& u, const CVector& v) {
    ComplexMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
}

ComplexMatrix projector(const CVector& v) {
    const double n2 = norm(v) * norm(v);
    ComplexMatrix m = outer(v, v);
    if (n2 > 0.0) m *= 1.0 / n2;
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cdouble aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

cdouble sandwich(const CVector& u, const ComplexMatrix& a, const CVector& v) {
    return inner(u, a * v);
}

double expectation(const ComplexMatrix& a, const CVector& v) {
    return sandwich(v, a, v).real();
}

void hermitize(ComplexMatrix& m) {
    assert(m.square());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        m(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const cdouble x = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = x;
            m(j, i) = std::conj(x);
        }
    }
}

}  // namespace entkit
