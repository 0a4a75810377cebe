#include "qsl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsl {

Complex dot(const CVector& x, const CVector& y) {
    if (x.size() != y.size())
        throw DimensionMismatch("dot: vector lengths differ");
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += std::conj(x[i]) * y[i];
    return acc;
}

double vec_norm(const CVector& x) {
    double acc = 0.0;
    for (const Complex& v : x)
        acc += std::norm(v);
    return std::sqrt(acc);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = Complex(1.0, 0.0);
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(j, i) = std::conj((*this)(i, j));
    return m;
}

Complex ComplexMatrix::trace() const {
    if (rows_ != cols_)
        throw DimensionMismatch("trace: matrix not square");
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        acc += (*this)(i, i);
    return acc;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex& v : a_)
        m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double acc = 0.0;
    for (const Complex& v : a_)
        acc += std::norm(v);
    return std::sqrt(acc);
}

bool ComplexMatrix::all_finite() const {
    for (const Complex& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

CVector ComplexMatrix::column(std::size_t j) const {
    CVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        v[i] = (*this)(i, j);
    return v;
}

void ComplexMatrix::set_column(std::size_t j, const CVector& v) {
    if (v.size() != rows_)
        throw DimensionMismatch("set_column: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i)
        (*this)(i, j) = v[i];
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& b) {
    if (rows_ != b.rows_ || cols_ != b.cols_)
        throw DimensionMismatch("matrix addition: shape mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k)
        a_[k] += b.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& b) {
    if (rows_ != b.rows_ || cols_ != b.cols_)
        throw DimensionMismatch("matrix subtraction: shape mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k)
        a_[k] -= b.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (Complex& v : a_)
        v *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw DimensionMismatch("matrix product: shape mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0, 0.0))
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

CVector operator*(const ComplexMatrix& a, const CVector& x) {
    if (a.cols() != x.size())
        throw DimensionMismatch("matrix-vector product: shape mismatch");
    CVector y(a.rows(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex acc(0.0, 0.0);
        for (std::size_t j = 0; j < a.cols(); ++j)
            acc += a(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

namespace {

constexpr double kHermTolScale = 1e-12;
constexpr double kOffDiagTolScale = 1e-13;
constexpr int kMaxSweeps = 100;
constexpr double kClusterGap = 1e-10;
constexpr double kPostTol = 1e-10;

double hermitian_defect(const ComplexMatrix& a) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
    return d;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    ComplexMatrix h(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return h;
}

double offdiag_frobenius(const ComplexMatrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            acc += std::norm(a(i, j));
    return std::sqrt(2.0 * acc);
}

// One complex Jacobi rotation zeroing the (p, q) entry.  The 2x2 pivot block
// is first made real by the phase of a_pq, then rotated by the classic
// smaller-angle tangent choice; the combined unitary is accumulated into *v
// when eigenvectors are wanted.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix* v, std::size_t p, std::size_t q) {
    const std::size_t n = a.rows();
    const Complex apq = a(p, q);
    const double mag = std::abs(apq);
    const Complex phase = apq / mag;
    const Complex phase_conj = std::conj(phase);

    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * mag);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    for (std::size_t i = 0; i < n; ++i) {
        const Complex aip = a(i, p), aiq = a(i, q);
        a(i, p) = c * aip - s * phase_conj * aiq;
        a(i, q) = s * aip + c * phase_conj * aiq;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const Complex apj = a(p, j), aqj = a(q, j);
        a(p, j) = c * apj - s * phase * aqj;
        a(q, j) = s * apj + c * phase * aqj;
    }
    a(p, q) = Complex(0.0, 0.0);
    a(q, p) = Complex(0.0, 0.0);
    a(p, p) = Complex(a(p, p).real(), 0.0);
    a(q, q) = Complex(a(q, q).real(), 0.0);

    if (!v)
        return;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex vip = (*v)(i, p), viq = (*v)(i, q);
        (*v)(i, p) = c * vip - s * phase_conj * viq;
        (*v)(i, q) = s * vip + c * phase_conj * viq;
    }
}

// Largest-magnitude component real positive; ties broken by lowest index.
void fix_column_phase(ComplexMatrix& v, std::size_t j) {
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < v.rows(); ++i) {
        const double m = std::norm(v(i, j));
        if (m > best_mag) {
            best_mag = m;
            best = i;
        }
    }
    const double mag = std::sqrt(best_mag);
    if (mag == 0.0)
        return;
    const Complex rot = std::conj(v(best, j)) / mag;
    for (std::size_t i = 0; i < v.rows(); ++i)
        v(i, j) *= rot;
    v(best, j) = Complex(std::abs(v(best, j)), 0.0);
}

// Two-pass modified Gram-Schmidt over eigenvector columns [lo, hi).
void reorthonormalize_columns(ComplexMatrix& v, std::size_t lo, std::size_t hi) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = lo; j < hi; ++j) {
            CVector col = v.column(j);
            for (std::size_t k = lo; k < j; ++k) {
                CVector prev = v.column(k);
                const Complex proj = dot(prev, col);
                for (std::size_t i = 0; i < col.size(); ++i)
                    col[i] -= proj * prev[i];
            }
            const double nrm = vec_norm(col);
            for (Complex& x : col)
                x /= nrm;
            v.set_column(j, col);
        }
    }
}

}  // namespace

EigenDecomposition hermitian_eigen(const ComplexMatrix& a) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("hermitian_eigen: matrix not square");
    if (a.rows() == 0)
        throw DimensionMismatch("hermitian_eigen: empty matrix");
    if (!a.all_finite())
        throw Error("hermitian_eigen: non-finite entries");
    const double scale = a.max_abs();
    if (hermitian_defect(a) > kHermTolScale * (1.0 + scale))
        throw NotHermitian("hermitian_eigen: input is not Hermitian within tolerance");

    const std::size_t n = a.rows();
    ComplexMatrix w = hermitian_part(a);
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double tol = kOffDiagTolScale * w.frobenius_norm();
    const double skip = tol / (100.0 * static_cast<double>(n) * static_cast<double>(n) + 100.0);

    bool converged = offdiag_frobenius(w) <= tol;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(w(p, q)) > skip)
                    jacobi_rotate(w, &v, p, q);
        converged = offdiag_frobenius(w) <= tol;
    }
    if (!converged)
        throw NonConvergence("hermitian_eigen: Jacobi sweeps did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return w(i, i).real() < w(j, j).real();
    });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = w(order[k], order[k]).real();
        out.eigenvectors.set_column(k, v.column(order[k]));
    }

    // Re-orthonormalize within near-degenerate eigenvalue clusters so the
    // basis choice is reproducible.
    std::size_t lo = 0;
    while (lo < n) {
        std::size_t hi = lo + 1;
        while (hi < n && out.eigenvalues[hi] - out.eigenvalues[hi - 1] < kClusterGap)
            ++hi;
        if (hi - lo > 1)
            reorthonormalize_columns(out.eigenvectors, lo, hi);
        lo = hi;
    }
    for (std::size_t k = 0; k < n; ++k)
        fix_column_phase(out.eigenvectors, k);

    // Postcondition guard: orthonormal columns and spectral reconstruction.
    const ComplexMatrix& ev = out.eigenvectors;
    ComplexMatrix gram = ev.adjoint() * ev;
    gram -= ComplexMatrix::identity(n);
    if (gram.max_abs() > kPostTol)
        throw NonConvergence("hermitian_eigen: eigenvector orthonormality check failed");

    ComplexMatrix scaled = ev;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            scaled(i, j) *= out.eigenvalues[j];
    ComplexMatrix recon = scaled * ev.adjoint();
    recon -= hermitian_part(a);
    const double lam_max = std::max(std::abs(out.eigenvalues.front()), std::abs(out.eigenvalues.back()));
    if (recon.max_abs() > kPostTol * (1.0 + lam_max))
        throw NonConvergence("hermitian_eigen: spectral reconstruction check failed");

    return out;
}

double hermitian_abs_max_eigenvalue(ComplexMatrix& a) {
    const std::size_t n = a.rows();
    if (n == 0 || a.frobenius_norm() == 0.0)
        return 0.0;

    const double tol = kOffDiagTolScale * a.frobenius_norm();
    const double skip = tol / (100.0 * static_cast<double>(n) * static_cast<double>(n) + 100.0);

    bool converged = offdiag_frobenius(a) <= tol;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) > skip)
                    jacobi_rotate(a, nullptr, p, q);
        converged = offdiag_frobenius(a) <= tol;
    }
    if (!converged)
        throw NonConvergence("hermitian_abs_max_eigenvalue: Jacobi sweeps did not converge");

    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        best = std::max(best, std::abs(a(i, i).real()));
    return best;
}

double operator_norm(const ComplexMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0)
        return 0.0;
    if (a.max_abs() == 0.0)
        return 0.0;
    const ComplexMatrix gram = a.adjoint() * a;
    EigenDecomposition ed = hermitian_eigen(gram);
    return std::sqrt(std::max(0.0, ed.eigenvalues.back()));
}

HermitianOperator::HermitianOperator(const ComplexMatrix& a) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("HermitianOperator: matrix not square");
    if (a.rows() == 0)
        throw DimensionMismatch("HermitianOperator: empty matrix");
    if (!a.all_finite())
        throw Error("HermitianOperator: non-finite entries");
    if (hermitian_defect(a) > kHermTolScale * (1.0 + a.max_abs()))
        throw NotHermitian("HermitianOperator: input is not Hermitian within tolerance");
    matrix_ = hermitian_part(a);
    eigen_ = hermitian_eigen(matrix_);
}

ComplexMatrix apply_function(const HermitianOperator& h,
                             const std::function<Complex(double)>& f) {
    const std::size_t n = h.dim();
    const ComplexMatrix& v = h.eigen().eigenvectors;
    ComplexMatrix scaled = v;
    for (std::size_t j = 0; j < n; ++j) {
        const Complex fj = f(h.eigen().eigenvalues[j]);
        for (std::size_t i = 0; i < n; ++i)
            scaled(i, j) *= fj;
    }
    return scaled * v.adjoint();
}

}
