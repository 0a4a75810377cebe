#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qsl/evolution.hpp"
#include "qsl/linalg.hpp"
#include "qsl/rng.hpp"
#include "qsl/scenarios.hpp"
#include "test_support.hpp"

using qsl::Complex;
using qsl::ComplexMatrix;
using qsl::CVector;
using qsl::HermitianOperator;
using qsl::OrthogonalProjector;
using qsl::ProjectionPath;
using qsl::UnitaryPropagator;

namespace {

const double kPi = std::acos(-1.0);

double spectral_norm(const HermitianOperator& h) {
    return std::max(std::abs(h.min_eigenvalue()), std::abs(h.max_eigenvalue()));
}

}  // namespace

TEST_SUITE("evolution") {

    TEST_CASE("time zero returns the inputs exactly") {
        qsl::Rng rng(100);
        const HermitianOperator h(support::random_hermitian(4, rng));
        const auto p0 = support::random_projector(4, 2, rng);

        const CVector psi0 = support::random_unit_vector(4, rng);
        CHECK(qsl::evolve_state(h, psi0, 0.0) == psi0);

        const ProjectionPath path(h, p0);
        CHECK(path.at(0.0).matrix() == p0.matrix());
    }

    TEST_CASE("propagator of a diagonal Hamiltonian is the diagonal phase matrix") {
        ComplexMatrix d(2, 2);
        d(1, 1) = 1.0;
        const UnitaryPropagator u{HermitianOperator(d)};
        const double t = 1.37;
        const ComplexMatrix ut = u.at(t);
        CHECK(std::abs(ut(0, 0) - Complex(1, 0)) < 1e-14);
        CHECK(std::abs(ut(1, 1) - std::exp(Complex(0, -t))) < 1e-14);
        CHECK(std::abs(ut(0, 1)) < 1e-15);
        CHECK(std::abs(ut(1, 0)) < 1e-15);
    }

    TEST_CASE("group law, unitarity, and inverse by conjugation") {
        qsl::Rng rng(321);
        const HermitianOperator h(support::random_hermitian(5, rng));
        const UnitaryPropagator u(h);
        for (double s : {-1.3, 0.4, 2.0}) {
            for (double t : {-0.7, 0.9}) {
                const ComplexMatrix both = u.at(s + t);
                const ComplexMatrix composed = u.at(s) * u.at(t);
                REQUIRE(support::max_entry_distance(both, composed) < 1e-10);
            }
            ComplexMatrix defect = u.at(s).adjoint() * u.at(s);
            defect -= ComplexMatrix::identity(5);
            REQUIRE(defect.max_abs() < 1e-12);
            REQUIRE(support::max_entry_distance(u.at(-s), u.at(s).adjoint()) < 1e-12);
        }
    }

    TEST_CASE("two-level state reaches the orthogonal complement at t = pi/gap") {
        const auto scenario = qsl::two_level(0.0, 1.0);
        const HermitianOperator h = scenario.hamiltonian();
        const CVector psi0{Complex(1 / std::sqrt(2.0), 0), Complex(1 / std::sqrt(2.0), 0)};
        const CVector psit = qsl::evolve_state(h, psi0, kPi);
        CHECK(std::abs(qsl::dot(psi0, psit)) < 1e-10);
    }

    TEST_CASE("state evolution preserves the norm and validates input") {
        qsl::Rng rng(55);
        const HermitianOperator h(support::random_hermitian(6, rng));
        const CVector psi0 = support::random_unit_vector(6, rng);
        const CVector psit = qsl::evolve_state(h, psi0, 3.7);
        CHECK(std::abs(qsl::vec_norm(psit) - 1.0) < 1e-12);

        CVector unnormalized(6, Complex(1.0, 0.0));
        CHECK_THROWS_AS(qsl::evolve_state(h, unnormalized, 1.0), qsl::NonUnitInput);
        CHECK_THROWS_AS(qsl::evolve_state(h, CVector{Complex(1, 0)}, 1.0),
                        qsl::DimensionMismatch);
    }

    TEST_CASE("rank is conserved along the path") {
        qsl::Rng rng(606);
        const HermitianOperator h(support::random_hermitian(6, rng));
        const auto p0 = support::random_projector(6, 2, rng);
        const ProjectionPath path(h, p0);
        for (double t : {0.1, 0.9, 4.2, 17.0}) REQUIRE(path.at(t).rank() == 2);
    }

    TEST_CASE("a spectral subspace does not move") {
        qsl::Rng rng(777);
        const HermitianOperator h(support::random_hermitian(5, rng));
        const auto p0 = qsl::spectral_projector_case(h, {0, 2});
        const ProjectionPath path(h, p0);
        for (double t : {0.3, 1.7, 8.0})
            REQUIRE(support::max_entry_distance(path.at(t).matrix(), p0.matrix()) < 1e-12);
    }

    TEST_CASE("commutator is skew-adjoint and block off-diagonal in the adapted frame") {
        qsl::Rng rng(0xC0117);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = 3 + static_cast<std::size_t>(trial % 5);
            const HermitianOperator h(support::random_hermitian(n, rng));
            const auto p = support::random_projector(n, 1 + trial % (n - 1), rng);
            const ComplexMatrix c = qsl::commutator(h, p);

            REQUIRE(support::max_entry_distance(c.adjoint(), Complex(-1, 0) * c) < 1e-14);

            const ComplexMatrix wp = p.range_basis().vectors();
            const ComplexMatrix wq = qsl::complement(p).range_basis().vectors();
            const double scale = 1.0 + spectral_norm(h);
            REQUIRE((wp.adjoint() * c * wp).max_abs() <= 1e-10 * scale);
            REQUIRE((wq.adjoint() * c * wq).max_abs() <= 1e-10 * scale);
        }
    }

    TEST_CASE("commutator norm is constant along the evolution") {
        qsl::Rng rng(31);
        const HermitianOperator h(support::random_hermitian(5, rng));
        const auto p0 = support::random_projector(5, 2, rng);
        const ProjectionPath path(h, p0);
        const double v0 = qsl::operator_norm(qsl::commutator(h, p0));
        const double horizon = 10.0 / spectral_norm(h);
        for (int k = 1; k <= 8; ++k) {
            const double t = horizon * static_cast<double>(k) / 8.0;
            const double vt = qsl::operator_norm(qsl::commutator(h, path.at(t)));
            REQUIRE(std::abs(vt - v0) <= 1e-10);
        }
    }

    TEST_CASE("block decomposition of a diagonal Hamiltonian at a coordinate plane") {
        ComplexMatrix d(2, 2);
        d(0, 0) = 3.0;
        d(1, 1) = 5.0;
        const auto p = qsl::project_onto_span({CVector{1.0, 0.0}});
        const auto blocks = qsl::block_decompose(HermitianOperator(d), p);
        CHECK(blocks.p_block.rows() == 1);
        CHECK(std::abs(blocks.p_block(0, 0) - Complex(3, 0)) < 1e-14);
        CHECK(std::abs(blocks.q_block(0, 0) - Complex(5, 0)) < 1e-14);
        CHECK(blocks.coupling_pq.max_abs() < 1e-14);
        CHECK(blocks.coupling_qp.max_abs() < 1e-14);
    }

    TEST_CASE("two-level coupling block is |E2-E1|/2 in magnitude") {
        const auto scenario = qsl::two_level(0.0, 1.0);
        const auto blocks =
            qsl::block_decompose(scenario.hamiltonian(), scenario.initial_projector());
        CHECK(blocks.coupling_pq.rows() == 1);
        CHECK(blocks.coupling_pq.cols() == 1);
        CHECK(std::abs(std::abs(blocks.coupling_pq(0, 0)) - 0.5) < 1e-12);
    }

    TEST_CASE("blocks reassemble the Hamiltonian and couple adjointly") {
        qsl::Rng rng(0x5EED);
        const HermitianOperator h(support::random_hermitian(6, rng));
        const auto p = support::random_projector(6, 2, rng);
        const auto blocks = qsl::block_decompose(h, p);

        CHECK(support::max_entry_distance(blocks.coupling_qp, blocks.coupling_pq.adjoint()) <
              1e-13);

        // Reassembly oracle: W [[hpp, b], [b*, hqq]] W* with W = [Wp Wq].
        const std::size_t r = 2, n = 6;
        ComplexMatrix w(n, n), inner(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < r; ++j) w(i, j) = blocks.basis_p.vectors()(i, j);
            for (std::size_t j = r; j < n; ++j) w(i, j) = blocks.basis_q.vectors()(i, j - r);
        }
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) inner(i, j) = blocks.p_block(i, j);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = r; j < n; ++j) inner(i, j) = blocks.coupling_pq(i, j - r);
        for (std::size_t i = r; i < n; ++i)
            for (std::size_t j = 0; j < r; ++j) inner(i, j) = blocks.coupling_qp(i - r, j);
        for (std::size_t i = r; i < n; ++i)
            for (std::size_t j = r; j < n; ++j) inner(i, j) = blocks.q_block(i - r, j - r);

        const ComplexMatrix rebuilt =
            oracle::naive_product(oracle::naive_product(w, inner), w.adjoint());
        CHECK(support::max_entry_distance(rebuilt, h.matrix()) <= 1e-10);
    }

    TEST_CASE("block decomposition rejects trivial subspaces") {
        qsl::Rng rng(3);
        const HermitianOperator h(support::random_hermitian(3, rng));
        CHECK_THROWS_AS(qsl::block_decompose(h, OrthogonalProjector(ComplexMatrix(3, 3))),
                        qsl::TrivialSubspace);
        CHECK_THROWS_AS(
            qsl::block_decompose(h, OrthogonalProjector(ComplexMatrix::identity(3))),
            qsl::TrivialSubspace);
    }

    TEST_CASE("central-difference defect shrinks by ~4x per halving") {
        qsl::Rng rng(0xDEF);
        const HermitianOperator h(support::random_hermitian(5, rng));
        const auto p0 = support::random_projector(5, 2, rng);
        const ProjectionPath path(h, p0);

        const double t = 0.4;
        double step = 1e-2 / (1.0 + spectral_norm(h));
        double prev = qsl::derivative_check(path, t, step);
        for (int halving = 0; halving < 3; ++halving) {
            step *= 0.5;
            const double next = qsl::derivative_check(path, t, step);
            const double ratio = prev / next;
            REQUIRE(ratio >= 3.5);
            REQUIRE(ratio <= 4.5);
            prev = next;
        }
    }

    TEST_CASE("two-level defect obeys the quadratic envelope") {
        const auto scenario = qsl::two_level(0.0, 1.0);
        const ProjectionPath path(scenario.hamiltonian(), scenario.initial_projector());
        const double h = 1e-4;
        // Third time-derivative of the path is bounded by ~||H||^3 = 1, so
        // C = 1 with a safety factor of 10 covers the h^2 truncation term.
        CHECK(qsl::derivative_check(path, 0.9, h) <= 10.0 * h * h);
        CHECK(qsl::derivative_check(path, 0.9) < 1e-7);
        CHECK_THROWS_AS(qsl::derivative_check(path, 0.9, 0.0), qsl::Error);
    }
}
