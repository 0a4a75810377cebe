#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "qsl/errors.hpp"

namespace qsl {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Inner product, conjugate-linear in the first argument.
Complex dot(const CVector& x, const CVector& y);

/// Euclidean norm.
double vec_norm(const CVector& x);

/// Dense complex matrix, row-major storage.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Complex(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    ComplexMatrix adjoint() const;
    Complex trace() const;

    /// Largest entry magnitude.
    double max_abs() const;
    double frobenius_norm() const;
    bool all_finite() const;

    CVector column(std::size_t j) const;
    void set_column(std::size_t j, const CVector& v);

    ComplexMatrix& operator+=(const ComplexMatrix& b);
    ComplexMatrix& operator-=(const ComplexMatrix& b);
    ComplexMatrix& operator*=(Complex s);

    friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) = default;

private:
    std::size_t rows_, cols_;
    std::vector<Complex> a_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
CVector operator*(const ComplexMatrix& a, const CVector& x);

/// Eigensystem of a Hermitian matrix.
///
/// Eigenvalues are real and sorted ascending; eigenvector k is column k of
/// `eigenvectors`.  Each eigenvector carries a deterministic phase: its
/// largest-magnitude component is real and positive (ties broken by lowest
/// index).  Within numerically degenerate eigenvalue clusters the columns are
/// re-orthonormalized, so the decomposition is reproducible bit for bit for
/// identical input.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

/// Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// The input must be Hermitian within 1e-12 * (1 + max_abs); it is replaced
/// by its Hermitian part (A + A*)/2 before iteration.  Throws NotHermitian
/// on asymmetric input and NonConvergence if the off-diagonal mass has not
/// dropped below 1e-13 * ||A||_F after 100 sweeps.
EigenDecomposition hermitian_eigen(const ComplexMatrix& a);

/// Largest |eigenvalue| of a Hermitian matrix.  Destroys its argument (used
/// as Jacobi scratch) and skips the ordering, eigenvectors, and
/// postcondition checks of hermitian_eigen; callers on hot paths (crossing
/// scans) guarantee hermiticity by construction.
double hermitian_abs_max_eigenvalue(ComplexMatrix& a);

/// Largest singular value, computed as sqrt(max eigenvalue of A*A).
double operator_norm(const ComplexMatrix& a);

/// Immutable Hermitian operator with its eigensystem computed up front.
class HermitianOperator {
public:
    explicit HermitianOperator(const ComplexMatrix& a);

    std::size_t dim() const { return matrix_.rows(); }
    const ComplexMatrix& matrix() const { return matrix_; }
    const EigenDecomposition& eigen() const { return eigen_; }

    double min_eigenvalue() const { return eigen_.eigenvalues.front(); }
    double max_eigenvalue() const { return eigen_.eigenvalues.back(); }

private:
    ComplexMatrix matrix_;
    EigenDecomposition eigen_;
};

/// Evaluate f on the spectrum: returns V diag(f(lambda)) V*.
ComplexMatrix apply_function(const HermitianOperator& h,
                             const std::function<Complex(double)>& f);

}
