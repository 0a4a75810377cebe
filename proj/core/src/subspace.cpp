#include "qsl/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace qsl {

namespace {

constexpr double kDiscardTol = 1e-10;
constexpr double kProjectorTol = 1e-10;
constexpr double kTraceTol = 1e-8;
constexpr double kClampSlack = 1e-8;

// Clamp to [lo, hi], warning on stderr if the excursion exceeds the slack
// that ordinary roundoff can explain.
double clamp_with_warning(double x, double lo, double hi, const char* what) {
    if (x > hi + kClampSlack || x < lo - kClampSlack)
        std::cerr << "qsl: " << what << " = " << x << " clamped to [" << lo << ", " << hi
                  << "]\n";
    return std::min(hi, std::max(lo, x));
}

bool lexicographically_less(const ComplexMatrix& a, const ComplexMatrix& b) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex x = a(i, j), y = b(i, j);
            if (x.real() != y.real())
                return x.real() < y.real();
            if (x.imag() != y.imag())
                return x.imag() < y.imag();
        }
    return false;
}

}  // namespace

SubspaceBasis::SubspaceBasis(std::size_t dim, ComplexMatrix vectors)
    : dim_(dim), vectors_(std::move(vectors)) {}

SubspaceBasis SubspaceBasis::from_span(const std::vector<CVector>& span) {
    if (span.empty())
        throw EmptySpan("from_span: no spanning vectors given");
    const std::size_t dim = span.front().size();
    if (dim == 0)
        throw DimensionMismatch("from_span: zero-dimensional vectors");

    std::vector<CVector> accepted;
    for (const CVector& v : span) {
        if (v.size() != dim)
            throw DimensionMismatch("from_span: vectors of mixed length");
        const double input_norm = vec_norm(v);
        CVector r = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const CVector& u : accepted) {
                const Complex proj = dot(u, r);
                for (std::size_t i = 0; i < dim; ++i)
                    r[i] -= proj * u[i];
            }
        const double res = vec_norm(r);
        if (res < kDiscardTol * (input_norm + 1.0))
            continue;
        for (Complex& x : r)
            x /= res;
        accepted.push_back(std::move(r));
    }

    ComplexMatrix cols(dim, accepted.size());
    for (std::size_t j = 0; j < accepted.size(); ++j)
        cols.set_column(j, accepted[j]);
    return SubspaceBasis(dim, std::move(cols));
}

SubspaceBasis SubspaceBasis::from_orthonormal(const ComplexMatrix& columns) {
    if (columns.rows() == 0)
        throw DimensionMismatch("from_orthonormal: zero-dimensional ambient space");
    ComplexMatrix gram = columns.adjoint() * columns;
    gram -= ComplexMatrix::identity(columns.cols());
    if (gram.max_abs() > kProjectorTol)
        throw Error("from_orthonormal: columns are not orthonormal");
    return SubspaceBasis(columns.rows(), columns);
}

OrthogonalProjector::OrthogonalProjector(const ComplexMatrix& m) : matrix_(m) {
    if (m.rows() != m.cols())
        throw NotProjector("projector: matrix not square");
    if (m.rows() == 0)
        throw NotProjector("projector: empty matrix");
    if (!m.all_finite())
        throw NotProjector("projector: non-finite entries");

    ComplexMatrix herm_defect = m - m.adjoint();
    if (herm_defect.max_abs() > kProjectorTol)
        throw NotProjector("projector: not Hermitian within tolerance");
    ComplexMatrix idem_defect = m * m - m;
    if (idem_defect.max_abs() > kProjectorTol)
        throw NotProjector("projector: not idempotent within tolerance");

    const Complex tr = m.trace();
    const double rank_real = tr.real();
    const double rounded = std::round(rank_real);
    if (std::abs(rank_real - rounded) > kTraceTol || std::abs(tr.imag()) > kTraceTol ||
        rounded < -0.5 || rounded > static_cast<double>(m.rows()) + 0.5)
        throw NotProjector("projector: trace is not a valid integer rank");
    rank_ = static_cast<std::size_t>(rounded);
}

OrthogonalProjector OrthogonalProjector::from_basis(const SubspaceBasis& basis) {
    const ComplexMatrix& b = basis.vectors();
    ComplexMatrix p(basis.dim(), basis.dim());
    if (basis.rank() > 0)
        p = b * b.adjoint();
    return OrthogonalProjector(p);
}

SubspaceBasis OrthogonalProjector::range_basis() const {
    if (rank_ == 0)
        return SubspaceBasis::from_orthonormal(ComplexMatrix(dim(), 0));
    std::vector<CVector> cols;
    cols.reserve(dim());
    for (std::size_t j = 0; j < dim(); ++j)
        cols.push_back(matrix_.column(j));
    SubspaceBasis basis = SubspaceBasis::from_span(cols);
    if (basis.rank() != rank_)
        throw NotProjector("range_basis: column span rank disagrees with trace rank");
    return basis;
}

OrthogonalProjector project_onto_span(const std::vector<CVector>& span) {
    return OrthogonalProjector::from_basis(SubspaceBasis::from_span(span));
}

OrthogonalProjector complement(const OrthogonalProjector& p) {
    ComplexMatrix m = ComplexMatrix::identity(p.dim());
    m -= p.matrix();
    return OrthogonalProjector(m);
}

double gap_distance(const OrthogonalProjector& q, const OrthogonalProjector& r) {
    if (q.dim() != r.dim())
        throw DimensionMismatch("gap_distance: ambient dimensions differ");
    // Unequal ranks force a unit vector of the larger range orthogonal to the
    // smaller one, so the gap is exactly 1; returning it directly keeps the
    // knife-edge cases (triangle inequality, asin near 1) exact.
    if (q.rank() != r.rank())
        return 1.0;
    // Canonical argument order makes the result exactly symmetric.
    const ComplexMatrix* a = &q.matrix();
    const ComplexMatrix* b = &r.matrix();
    if (lexicographically_less(*b, *a))
        std::swap(a, b);
    ComplexMatrix d = *a - *b;
    if (d.max_abs() == 0.0)
        return 0.0;
    EigenDecomposition ed = hermitian_eigen(d);
    const double lam = std::max(std::abs(ed.eigenvalues.front()), std::abs(ed.eigenvalues.back()));
    return clamp_with_warning(lam, 0.0, 1.0, "projector gap");
}

double maximal_angle(const OrthogonalProjector& q, const OrthogonalProjector& r) {
    return std::asin(gap_distance(q, r));
}

double relative_angle(const OrthogonalProjector& q, const OrthogonalProjector& r) {
    if (q.dim() != r.dim())
        throw DimensionMismatch("relative_angle: ambient dimensions differ");
    if (q.rank() == 0)
        throw EmptySubspace("relative_angle: first subspace is {0}");
    // A dimension count already settles this case: range(R) meets the
    // orthogonal complement of range(Q) in a nonzero vector.
    if (q.rank() < r.rank())
        return std::asin(1.0);
    ComplexMatrix qperp = ComplexMatrix::identity(q.dim());
    qperp -= q.matrix();
    const double s = operator_norm(qperp * r.matrix());
    return std::asin(clamp_with_warning(s, 0.0, 1.0, "relative angle sine"));
}

}
