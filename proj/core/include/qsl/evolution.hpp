#pragma once

#include "qsl/linalg.hpp"
#include "qsl/subspace.hpp"

namespace qsl {

/// Time-evolution unitaries U(t) = exp(-i H t), built on the eigensystem of
/// the generating Hamiltonian.
class UnitaryPropagator {
public:
    explicit UnitaryPropagator(HermitianOperator h);

    const HermitianOperator& hamiltonian() const { return h_; }

    /// U(t); every evaluation is checked unitary within 1e-10.
    ComplexMatrix at(double t) const;

private:
    HermitianOperator h_;
};

/// Schroedinger evolution of a state: psi(t) = U(t) psi0.
/// The input must be normalized within 1e-10.
CVector evolve_state(const HermitianOperator& h, const CVector& psi0, double t);

/// Orbit of a subspace under the propagator: P_t = U(t) P_0 U(t)*.
class ProjectionPath {
public:
    ProjectionPath(HermitianOperator h, OrthogonalProjector p0);

    const HermitianOperator& hamiltonian() const { return propagator_.hamiltonian(); }
    const UnitaryPropagator& propagator() const { return propagator_; }
    const OrthogonalProjector& initial() const { return p0_; }

    /// P_t, revalidated as a projector; rank is conserved along the path.
    OrthogonalProjector at(double t) const;

private:
    UnitaryPropagator propagator_;
    OrthogonalProjector p0_;
};

/// Commutator [H, P] = HP - PH.
ComplexMatrix commutator(const HermitianOperator& h, const OrthogonalProjector& p);

/// H compressed to range(P) + range(P)^perp coordinates.  With W_p, W_q
/// orthonormal bases of the two ranges, the blocks are
///   p_block = W_p* H W_p,  q_block = W_q* H W_q,
///   coupling_pq = W_p* H W_q,  coupling_qp = W_q* H W_p,
/// and coupling_qp equals coupling_pq* up to roundoff.
struct BlockDecomposition {
    SubspaceBasis basis_p;
    SubspaceBasis basis_q;
    ComplexMatrix p_block;
    ComplexMatrix q_block;
    ComplexMatrix coupling_pq;
    ComplexMatrix coupling_qp;
};

/// Requires 1 <= rank(P) <= dim-1; throws TrivialSubspace otherwise.
BlockDecomposition block_decompose(const HermitianOperator& h, const OrthogonalProjector& p);

/// Defect of the equation of motion at time t:
/// || (P_{t+h} - P_{t-h}) / (2h) + i [H, P_t] ||.
/// Second-order accurate in h, so it shrinks like h^2.
double derivative_check(const ProjectionPath& path, double t, double h);

/// Same with the default step h = 1e-4 / (1 + ||H||).
double derivative_check(const ProjectionPath& path, double t);

}
