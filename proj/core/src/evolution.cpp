#include "qsl/evolution.hpp"

#include <cmath>

namespace qsl {

namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kUnitVectorTol = 1e-10;

double spectral_norm(const HermitianOperator& h) {
    return std::max(std::abs(h.min_eigenvalue()), std::abs(h.max_eigenvalue()));
}

}  // namespace

UnitaryPropagator::UnitaryPropagator(HermitianOperator h) : h_(std::move(h)) {}

ComplexMatrix UnitaryPropagator::at(double t) const {
    ComplexMatrix u = apply_function(h_, [t](double lam) {
        return std::exp(Complex(0.0, -lam * t));
    });
    ComplexMatrix defect = u.adjoint() * u;
    defect -= ComplexMatrix::identity(u.rows());
    if (defect.max_abs() > kUnitaryTol)
        throw NonConvergence("UnitaryPropagator: U(t) failed the unitarity check");
    return u;
}

CVector evolve_state(const HermitianOperator& h, const CVector& psi0, double t) {
    if (psi0.size() != h.dim())
        throw DimensionMismatch("evolve_state: state length does not match operator");
    if (std::abs(vec_norm(psi0) - 1.0) > kUnitVectorTol)
        throw NonUnitInput("evolve_state: state is not normalized");
    if (t == 0.0) return psi0;  // exact, not a round-trip through the eigenbasis

    const ComplexMatrix& v = h.eigen().eigenvectors;
    CVector amps = v.adjoint() * psi0;
    for (std::size_t k = 0; k < amps.size(); ++k)
        amps[k] *= std::exp(Complex(0.0, -h.eigen().eigenvalues[k] * t));
    return v * amps;
}

ProjectionPath::ProjectionPath(HermitianOperator h, OrthogonalProjector p0)
    : propagator_(std::move(h)), p0_(std::move(p0)) {
    if (propagator_.hamiltonian().dim() != p0_.dim())
        throw DimensionMismatch("ProjectionPath: operator and projector dimensions differ");
}

OrthogonalProjector ProjectionPath::at(double t) const {
    if (t == 0.0) return p0_;  // exact, not a round-trip through the eigenbasis
    const ComplexMatrix u = propagator_.at(t);
    OrthogonalProjector pt(u * p0_.matrix() * u.adjoint());
    if (pt.rank() != p0_.rank())
        throw NotProjector("ProjectionPath: rank changed along the path");
    return pt;
}

ComplexMatrix commutator(const HermitianOperator& h, const OrthogonalProjector& p) {
    if (h.dim() != p.dim())
        throw DimensionMismatch("commutator: dimensions differ");
    return h.matrix() * p.matrix() - p.matrix() * h.matrix();
}

BlockDecomposition block_decompose(const HermitianOperator& h, const OrthogonalProjector& p) {
    if (h.dim() != p.dim())
        throw DimensionMismatch("block_decompose: dimensions differ");
    if (p.rank() == 0 || p.rank() == p.dim())
        throw TrivialSubspace("block_decompose: subspace must be proper and nonzero");

    SubspaceBasis wp = p.range_basis();
    SubspaceBasis wq = complement(p).range_basis();
    const ComplexMatrix& bp = wp.vectors();
    const ComplexMatrix& bq = wq.vectors();
    const ComplexMatrix hbp = h.matrix() * bp;
    const ComplexMatrix hbq = h.matrix() * bq;
    ComplexMatrix p_block = bp.adjoint() * hbp;
    ComplexMatrix q_block = bq.adjoint() * hbq;
    ComplexMatrix coupling_pq = bp.adjoint() * hbq;
    ComplexMatrix coupling_qp = bq.adjoint() * hbp;

    return BlockDecomposition{
        std::move(wp),          std::move(wq),          std::move(p_block),
        std::move(q_block),     std::move(coupling_pq), std::move(coupling_qp),
    };
}

double derivative_check(const ProjectionPath& path, double t, double h) {
    if (!(h > 0.0))
        throw Error("derivative_check: step must be positive");
    const ComplexMatrix plus = path.at(t + h).matrix();
    const ComplexMatrix minus = path.at(t - h).matrix();
    ComplexMatrix defect = Complex(1.0 / (2.0 * h), 0.0) * (plus - minus);
    defect += Complex(0.0, 1.0) * commutator(path.hamiltonian(), path.at(t));
    return operator_norm(defect);
}

double derivative_check(const ProjectionPath& path, double t) {
    const double h = 1e-4 / (1.0 + spectral_norm(path.hamiltonian()));
    return derivative_check(path, t, h);
}

}
