#include "qsl/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qsl {

TwoLevelScenario::TwoLevelScenario(double e1, double e2) : e1_(e1), e2_(e2) {
    if (!(std::isfinite(e1) && std::isfinite(e2)))
        throw Error("two_level: energies must be finite");
    if (e1 == e2)
        throw DegenerateLevels("two_level: energy levels coincide");
}

HermitianOperator TwoLevelScenario::hamiltonian() const {
    ComplexMatrix h(2, 2);
    h(0, 0) = e1_;
    h(1, 1) = e2_;
    return HermitianOperator(h);
}

OrthogonalProjector TwoLevelScenario::initial_projector() const {
    ComplexMatrix p(2, 2);
    p(0, 0) = p(0, 1) = p(1, 0) = p(1, 1) = 0.5;
    return OrthogonalProjector(p);
}

Instance TwoLevelScenario::instance() const {
    return Instance{"two_level_0", hamiltonian(), initial_projector()};
}

double TwoLevelScenario::exact_speed() const {
    return 0.5 * std::abs(e2_ - e1_);
}

ComplexMatrix TwoLevelScenario::analytic_projection(double tau) const {
    const double delta = e2_ - e1_;
    ComplexMatrix p(2, 2);
    p(0, 0) = p(1, 1) = 0.5;
    p(0, 1) = 0.5 * std::exp(Complex(0.0, delta * tau));
    p(1, 0) = 0.5 * std::exp(Complex(0.0, -delta * tau));
    return p;
}

double TwoLevelScenario::analytic_gap(double s, double t) const {
    return std::abs(std::sin(0.5 * (e2_ - e1_) * (t - s)));
}

double TwoLevelScenario::analytic_angle(double s, double t) const {
    return std::asin(analytic_gap(s, t));
}

TwoLevelScenario two_level(double e1, double e2) {
    return TwoLevelScenario(e1, e2);
}

ComplexMatrix sample_hamiltonian(std::size_t dim, EnsembleKind kind, Rng& rng) {
    ComplexMatrix h(dim, dim);
    switch (kind) {
        case EnsembleKind::gue: {
            ComplexMatrix a(dim, dim);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    a(i, j) = rng.standard_complex_gaussian();
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
            break;
        }
        case EnsembleKind::diagonal_plus_coupling: {
            std::vector<double> diag(dim);
            for (double& d : diag)
                d = rng.uniform01();
            std::sort(diag.begin(), diag.end());
            for (std::size_t i = 0; i < dim; ++i)
                h(i, i) = diag[i];
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = i + 1; j < dim; ++j) {
                    const Complex c = 0.1 * rng.standard_complex_gaussian();
                    h(i, j) = c;
                    h(j, i) = std::conj(c);
                }
            break;
        }
    }
    return h;
}

SubspaceBasis sample_subspace(std::size_t dim, std::size_t rank, Rng& rng) {
    if (rank == 0 || rank > dim)
        throw Error("sample_subspace: rank must lie in [1, dim]");
    std::vector<CVector> span;
    // Gaussian vectors are independent with probability one; the loop
    // only continues past `rank` draws if one was numerically dependent.
    for (int attempts = 0; attempts < 64; ++attempts) {
        CVector v(dim);
        for (Complex& x : v)
            x = rng.standard_complex_gaussian();
        span.push_back(std::move(v));
        SubspaceBasis basis = SubspaceBasis::from_span(span);
        if (basis.rank() == rank)
            return basis;
        if (basis.rank() < span.size())
            span.pop_back();
    }
    throw NonConvergence("sample_subspace: could not reach requested rank");
}

std::vector<Instance> sample_ensemble(const EnsembleSpec& spec) {
    if (spec.dim < 2)
        throw Error("sample_ensemble: dim must be at least 2");
    if (spec.rank == 0 || spec.rank >= spec.dim)
        throw Error("sample_ensemble: rank must lie in [1, dim - 1]");
    if (spec.count == 0)
        throw Error("sample_ensemble: count must be positive");

    const char* prefix =
        spec.kind == EnsembleKind::gue ? "gue" : "diagonal_plus_coupling";
    std::vector<Instance> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        Rng rng = Rng::stream(spec.seed, i);
        HermitianOperator h(sample_hamiltonian(spec.dim, spec.kind, rng));
        SubspaceBasis basis = sample_subspace(spec.dim, spec.rank, rng);
        out.push_back(Instance{prefix + std::string("_") + std::to_string(i), std::move(h),
                               OrthogonalProjector::from_basis(basis)});
    }
    return out;
}

OrthogonalProjector spectral_projector_case(const HermitianOperator& h,
                                            const std::vector<std::size_t>& indices) {
    if (indices.empty())
        throw EmptySpan("spectral_projector_case: no eigenvalue indices given");
    std::set<std::size_t> seen;
    for (std::size_t idx : indices) {
        if (idx >= h.dim())
            throw IndexOutOfRange("spectral_projector_case: eigenvalue index out of range");
        if (!seen.insert(idx).second)
            throw Error("spectral_projector_case: duplicate eigenvalue index");
    }
    const ComplexMatrix& v = h.eigen().eigenvectors;
    ComplexMatrix p(h.dim(), h.dim());
    for (std::size_t idx : indices) {
        const CVector col = v.column(idx);
        for (std::size_t i = 0; i < h.dim(); ++i)
            for (std::size_t j = 0; j < h.dim(); ++j)
                p(i, j) += col[i] * std::conj(col[j]);
    }
    return OrthogonalProjector(p);
}

}
