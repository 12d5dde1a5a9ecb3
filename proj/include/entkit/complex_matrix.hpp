// Dense complex matrices and vectors, row-major storage.
// All operator matrices in the toolkit (states, witnesses, projectors)
// are values of this type; dimensions stay small (< ~100) by design.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace entkit {

using cdouble = std::complex<double>;
using CVector = std::vector<cdouble>;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cdouble>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cdouble& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cdouble& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<cdouble>& data() const { return a_; }
    std::vector<cdouble>& data() { return a_; }

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cdouble scalar);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    cdouble trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    // Largest deviations from the named symmetry class, in absolute terms.
    double hermiticity_violation() const;
    double antisymmetry_violation() const;
    double symmetry_violation() const;

    CVector column(std::size_t j) const;
    void set_column(std::size_t j, const CVector& v);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> a_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cdouble scalar, ComplexMatrix m);
CVector operator*(const ComplexMatrix& m, const CVector& v);

// <u|v> with conjugation on the left argument.
cdouble inner(const CVector& u, const CVector& v);
double norm(const CVector& v);
void normalize(CVector& v);
CVector conjugate(const CVector& v);
CVector scaled(const CVector& v, cdouble s);
void axpy(cdouble a, const CVector& x, CVector& y);

// Alice-major tensor product: component (i,k) of e (x) f sits at i*dim(f)+k.
CVector tensor(const CVector& e, const CVector& f);

ComplexMatrix outer(const CVector& u, const CVector& v);  // |u><v|
ComplexMatrix projector(const CVector& v);                // |v><v| / <v|v>
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// <u|A|v>
cdouble sandwich(const CVector& u, const ComplexMatrix& a, const CVector& v);
double expectation(const ComplexMatrix& a, const CVector& v);  // real part of <v|A|v>

// Replace m by (m + m^dagger)/2, for matrices Hermitian by construction
// whose entries nearly cancel.
void hermitize(ComplexMatrix& m);

}  // namespace entkit
