#pragma once

#include <cstddef>
#include <vector>

#include "qsl/linalg.hpp"

namespace qsl {

/// Orthonormal spanning set of a subspace, stored as matrix columns.
class SubspaceBasis {
public:
    /// Orthonormalize a spanning list with two-pass modified Gram-Schmidt.
    /// Vectors whose residual after projection falls below
    /// 1e-10 * (input norm + 1) are discarded as dependent, so the rank of
    /// the result can be smaller than the list length.  Throws EmptySpan on
    /// an empty list.
    static SubspaceBasis from_span(const std::vector<CVector>& span);

    /// Wrap columns that are already orthonormal (validated).
    static SubspaceBasis from_orthonormal(const ComplexMatrix& columns);

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return vectors_.cols(); }

    /// dim x rank matrix with orthonormal columns.
    const ComplexMatrix& vectors() const { return vectors_; }

private:
    SubspaceBasis(std::size_t dim, ComplexMatrix vectors);
    std::size_t dim_;
    ComplexMatrix vectors_;
};

/// Validated orthogonal projector: Hermitian, idempotent, integer trace.
class OrthogonalProjector {
public:
    /// Validates Hermitian-idempotency within 1e-10 and an integer trace
    /// within 1e-8; throws NotProjector otherwise.
    explicit OrthogonalProjector(const ComplexMatrix& m);

    static OrthogonalProjector from_basis(const SubspaceBasis& basis);

    std::size_t dim() const { return matrix_.rows(); }
    std::size_t rank() const { return rank_; }
    const ComplexMatrix& matrix() const { return matrix_; }

    /// Deterministic orthonormal basis of the range.
    SubspaceBasis range_basis() const;

private:
    ComplexMatrix matrix_;
    std::size_t rank_;
};

/// Projector onto the span of the given vectors.
OrthogonalProjector project_onto_span(const std::vector<CVector>& span);

/// Projector onto the orthogonal complement.
OrthogonalProjector complement(const OrthogonalProjector& p);

/// Operator-norm distance ||Q - R|| between two projectors, in [0, 1].
/// Computed from the eigenvalues of the Hermitian difference; exactly
/// symmetric in its arguments.
double gap_distance(const OrthogonalProjector& q, const OrthogonalProjector& r);

/// Maximal angle between two subspaces: arcsin ||Q - R||.  A metric on the
/// set of subspaces of a fixed ambient space.
double maximal_angle(const OrthogonalProjector& q, const OrthogonalProjector& r);

/// One-sided angle arcsin ||(I - Q) R||, measuring how far range(R) sticks
/// out of range(Q).  Not symmetric.  Requires rank(Q) >= 1.
double relative_angle(const OrthogonalProjector& q, const OrthogonalProjector& r);

}
