#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsl/evolution.hpp"
#include "qsl/linalg.hpp"
#include "qsl/rng.hpp"
#include "qsl/subspace.hpp"

namespace qsl {

/// A named (Hamiltonian, initial subspace) pair ready for analysis.
struct Instance {
    std::string id;
    HermitianOperator hamiltonian;
    OrthogonalProjector projector;
};

/// Two distinct energy levels E1, E2 with the initial subspace spanned by
/// (e1 + e2)/sqrt(2).  Everything about this system is known in closed form,
/// which makes it the sharpness witness for all three bounds: the maximal
/// angle grows exactly linearly at speed |E2 - E1| / 2 until it tops out.
class TwoLevelScenario {
public:
    TwoLevelScenario(double e1, double e2);

    double e1() const { return e1_; }
    double e2() const { return e2_; }

    HermitianOperator hamiltonian() const;
    OrthogonalProjector initial_projector() const;
    Instance instance() const;

    /// |E2 - E1| / 2, the exact commutator speed.
    double exact_speed() const;

    /// Closed-form evolved projector: entries 1/2 on the diagonal and
    /// (1/2) e^{+-i (E2 - E1) tau} off it.
    ComplexMatrix analytic_projection(double tau) const;

    /// ||P_t - P_s|| = |sin((E2 - E1)(t - s)/2)|.
    double analytic_gap(double s, double t) const;

    /// Maximal angle between P_s and P_t; equals the linear law
    /// (|E2 - E1|/2)|t - s| while that is at most pi/2, then folds back.
    double analytic_angle(double s, double t) const;

private:
    double e1_, e2_;
};

/// two-level factory; throws DegenerateLevels when e1 == e2.
TwoLevelScenario two_level(double e1, double e2);

enum class EnsembleKind {
    gue,                    // Hermitian part of a Ginibre matrix
    diagonal_plus_coupling  // sorted Uniform[0,1] diagonal + 0.1-scaled Gaussian coupling
};

/// Random instance family.  Instance i draws from substream i of `seed`;
/// inside an instance the Hamiltonian entries are drawn first (row-major),
/// then the subspace vectors (vector by vector, component by component).
struct EnsembleSpec {
    std::size_t dim = 2;
    std::size_t rank = 1;
    EnsembleKind kind = EnsembleKind::gue;
    std::uint64_t seed = 0;
    std::size_t count = 1;
};

/// Deterministic sample of `spec.count` instances.
std::vector<Instance> sample_ensemble(const EnsembleSpec& spec);

/// Projector onto the span of the selected eigenvectors of H (indices into
/// the ascending spectrum).  Such a subspace commutes with H, so its
/// evolution is frozen.  When the selection covers whole near-degenerate
/// clusters the result does not depend on the basis chosen inside them.
OrthogonalProjector spectral_projector_case(const HermitianOperator& h,
                                            const std::vector<std::size_t>& indices);

/// Draw a Hermitian matrix of the given ensemble kind from an Rng stream.
ComplexMatrix sample_hamiltonian(std::size_t dim, EnsembleKind kind, Rng& rng);

/// Draw a rank-r random subspace: Gaussian vectors, orthonormalized.
SubspaceBasis sample_subspace(std::size_t dim, std::size_t rank, Rng& rng);

}
