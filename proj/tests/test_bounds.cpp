#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qsl/bounds.hpp"
#include "qsl/evolution.hpp"
#include "qsl/linalg.hpp"
#include "qsl/rng.hpp"
#include "qsl/scenarios.hpp"
#include "qsl/subspace.hpp"
#include "test_support.hpp"

using qsl::Complex;
using qsl::ComplexMatrix;
using qsl::CrossingStatus;
using qsl::CVector;
using qsl::HermitianOperator;
using qsl::OrthogonalProjector;

namespace {

const double kPi = std::acos(-1.0);

double spectral_norm(const HermitianOperator& h) {
    return std::max(std::abs(h.min_eigenvalue()), std::abs(h.max_eigenvalue()));
}

}  // namespace

TEST_SUITE("bounds") {

    TEST_CASE("commutator speed equals the coupling-block norm and its SVD oracle") {
        qsl::Rng rng(0x5A);
        const HermitianOperator h(support::random_hermitian(6, rng));
        const auto p = support::random_projector(6, 2, rng);

        const double v = qsl::commutator_speed(h, p);
        const auto blocks = qsl::block_decompose(h, p);
        CHECK(std::abs(v - qsl::operator_norm(blocks.coupling_pq)) < 1e-12);
        CHECK(std::abs(v - oracle::power_norm(blocks.coupling_pq)) < 1e-9);
    }

    TEST_CASE("spectral subspaces have vanishing speed") {
        qsl::Rng rng(0x5B);
        const HermitianOperator h(support::random_hermitian(5, rng));
        CHECK(qsl::commutator_speed(h, qsl::spectral_projector_case(h, {1, 3})) <= 1e-10);
    }

    TEST_CASE("energy variance: eigenvector, known superposition, validation") {
        qsl::Rng rng(0x5C);
        const HermitianOperator h(support::random_hermitian(5, rng));
        const CVector ground = h.eigen().eigenvectors.column(0);
        CHECK(qsl::energy_variance(h, ground) <= 1e-12);

        ComplexMatrix d(2, 2);
        d(1, 1) = 1.0;
        const HermitianOperator diag01(d);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        const CVector cat{Complex(inv_sqrt2, 0), Complex(inv_sqrt2, 0)};
        CHECK(std::abs(qsl::energy_variance(diag01, cat) - 0.25) < 1e-14);

        CHECK_THROWS_AS(qsl::energy_variance(diag01, CVector{Complex(1, 0), Complex(1, 0)}),
                        qsl::NonUnitInput);
    }

    TEST_CASE("variance is invariant under spectrum shifts") {
        qsl::Rng rng(0x5D);
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t n = 3 + static_cast<std::size_t>(trial % 5);
            const HermitianOperator h(support::random_hermitian(n, rng));
            const CVector x = support::random_unit_vector(n, rng);
            const double var = qsl::energy_variance(h, x);
            const double hnorm = spectral_norm(h);
            const double tol = 1e-9 * (1.0 + hnorm * hnorm);

            // Real shift through the public API.
            const double creal = hnorm * (2.0 * rng.uniform01() - 1.0);
            ComplexMatrix shifted = h.matrix();
            for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= creal;
            REQUIRE(std::abs(qsl::energy_variance(HermitianOperator(shifted), x) - var) <= tol);

            // Complex shift via the quadratic form ||(H-c)x||^2 - |<x,(H-c)x>|^2.
            const double phase = 2.0 * kPi * rng.uniform01();
            const Complex c = hnorm * rng.uniform01() * Complex(std::cos(phase), std::sin(phase));
            CVector hx = h.matrix() * x;
            for (std::size_t i = 0; i < n; ++i) hx[i] -= c * x[i];
            double norm_sq = 0.0;
            for (const Complex& z : hx) norm_sq += std::norm(z);
            const double var_shifted = norm_sq - std::norm(qsl::dot(x, hx));
            REQUIRE(std::abs(var_shifted - var) <= tol);
        }
    }

    TEST_CASE("rank-1 dispersion is the state's energy variance") {
        qsl::Rng rng(0x60);
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t n = 2 + static_cast<std::size_t>(trial % 6);
            const HermitianOperator h(support::random_hermitian(n, rng));
            const CVector psi = support::random_unit_vector(n, rng);
            const auto p = qsl::project_onto_span({psi});
            const auto result = qsl::subspace_dispersion(h, p);
            const double direct = qsl::energy_variance(h, psi);
            REQUIRE(std::abs(result.value * result.value - direct) <=
                    1e-10 * (1.0 + direct));
        }
    }

    TEST_CASE("rank-2 dispersion matches the dense grid oracle") {
        qsl::Rng rng(0x61);
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t n = 4 + static_cast<std::size_t>(trial % 3);
            const HermitianOperator h(support::random_hermitian(n, rng));
            const auto p = support::random_projector(n, 2, rng);

            const auto result = qsl::subspace_dispersion(h, p);

            // Compress to the 2-dim coordinates the oracle sweeps.
            const ComplexMatrix w = p.range_basis().vectors();
            const ComplexMatrix hw = h.matrix() * w;
            const ComplexMatrix g2 = w.adjoint() * hw;
            const ComplexMatrix a2 = hw.adjoint() * hw;
            const double grid = oracle::grid_dispersion_max(a2, g2);

            REQUIRE(std::abs(result.value * result.value - grid) <= 1e-6);
        }
    }

    TEST_CASE("dispersion maximizer is a unit vector of the subspace achieving the value") {
        qsl::Rng rng(0x62);
        const HermitianOperator h(support::random_hermitian(6, rng));
        const auto p = support::random_projector(6, 3, rng);
        const auto result = qsl::subspace_dispersion(h, p);

        CHECK(std::abs(qsl::vec_norm(result.maximizer) - 1.0) < 1e-12);
        CVector proj = p.matrix() * result.maximizer;
        for (std::size_t i = 0; i < 6; ++i) proj[i] -= result.maximizer[i];
        CHECK(qsl::vec_norm(proj) < 1e-10);
        CHECK(std::abs(qsl::energy_variance(h, result.maximizer) -
                       result.value * result.value) < 1e-9);
    }

    TEST_CASE("spectral width reads the spectrum endpoints and ignores real shifts") {
        ComplexMatrix d(2, 2);
        d(1, 1) = 1.0;
        const auto width01 = qsl::spectral_width(HermitianOperator(d));
        CHECK(width01.e_min == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(width01.e_max == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(width01.width() == doctest::Approx(1.0).epsilon(1e-14));

        qsl::Rng rng(0x63);
        const HermitianOperator h(support::random_hermitian(5, rng));
        const auto base = qsl::spectral_width(h);
        CHECK(base.e_min == h.min_eigenvalue());
        CHECK(base.e_max == h.max_eigenvalue());

        ComplexMatrix shifted = h.matrix();
        for (std::size_t i = 0; i < 5; ++i) shifted(i, i) += 2.75;
        const auto moved = qsl::spectral_width(HermitianOperator(shifted));
        CHECK(std::abs(moved.width() - base.width()) <= 1e-12 * (1.0 + base.width()));
    }

    TEST_CASE("mean energy above ground: ground state gives zero, cat state gives 1/2") {
        ComplexMatrix d(2, 2);
        d(1, 1) = 1.0;
        const HermitianOperator h(d);
        const CVector ground{Complex(1, 0), Complex(0, 0)};
        CHECK(qsl::margolus_levitin_delta(h, ground) <= 1e-12);

        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        const CVector cat{Complex(inv_sqrt2, 0), Complex(inv_sqrt2, 0)};
        CHECK(std::abs(qsl::margolus_levitin_delta(h, cat) - 0.5) < 1e-14);
    }

    TEST_CASE("two-level crossings land on theta / speed") {
        const auto scenario = qsl::two_level(0.0, 1.0);
        const HermitianOperator h = scenario.hamiltonian();
        const auto p = scenario.initial_projector();

        const auto quarter = qsl::first_crossing_time(h, p, kPi / 4, 10.0);
        REQUIRE(quarter.status == CrossingStatus::reached);
        CHECK(std::abs(quarter.value - kPi / 2) < 1e-6);
        CHECK(quarter.value == quarter.bracket_hi);
        CHECK(quarter.bracket_hi - quarter.bracket_lo <= 1e-10 * 11.0 + 1e-15);

        // The right-angle target is tangential: the angle curve touches
        // pi/2 with zero slope, which the scan's peak refinement must catch.
        const auto full = qsl::first_crossing_time(h, p, kPi / 2, 8.0);
        REQUIRE(full.status == CrossingStatus::reached);
        CHECK(std::abs(full.value - kPi) < 1e-6);
    }

    TEST_CASE("crossing times are monotone in the target angle") {
        qsl::Rng rng(0x64);
        const HermitianOperator h(support::random_hermitian(6, rng));
        const auto p = support::random_projector(6, 2, rng);
        double prev = 0.0;
        for (double theta : {kPi / 8, kPi / 4, 3 * kPi / 8}) {
            const auto hit = qsl::first_crossing_time(h, p, theta, 50.0);
            REQUIRE(hit.status == CrossingStatus::reached);
            REQUIRE(hit.value >= prev);
            prev = hit.value;
        }
    }

    TEST_CASE("frozen subspaces report reducing; short horizons report no_crossing") {
        qsl::Rng rng(0x65);
        const HermitianOperator h(support::random_hermitian(5, rng));
        const auto frozen = qsl::spectral_projector_case(h, {0, 3});
        for (double theta : {kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2}) {
            const auto hit = qsl::first_crossing_time(h, frozen, theta, 5.0);
            REQUIRE(hit.status == CrossingStatus::reducing);
            REQUIRE(std::isinf(hit.value));
        }

        const auto scenario = qsl::two_level(0.0, 1.0);
        const auto miss = qsl::first_crossing_time(scenario.hamiltonian(),
                                                   scenario.initial_projector(), kPi / 2, 0.1);
        CHECK(miss.status == CrossingStatus::no_crossing);
        CHECK(std::isinf(miss.value));
    }

    TEST_CASE("crossing input validation") {
        const auto scenario = qsl::two_level(0.0, 1.0);
        const HermitianOperator h = scenario.hamiltonian();
        const auto p = scenario.initial_projector();
        CHECK_THROWS_AS(qsl::first_crossing_time(h, p, 0.0, 1.0), qsl::InvalidTheta);
        CHECK_THROWS_AS(qsl::first_crossing_time(h, p, 2.0, 1.0), qsl::InvalidTheta);
        CHECK_THROWS_AS(qsl::first_crossing_time(h, p, -0.5, 1.0), qsl::InvalidTheta);
        CHECK_THROWS_AS(qsl::first_crossing_time(h, p, kPi / 4, 0.0), qsl::Error);
    }

    TEST_CASE("a slack-covered target counts as met at t = 0") {
        const auto scenario = qsl::two_level(0.0, 1.0);
        qsl::CrossingOptions opts;
        opts.sine_tol = 1e-3;
        const auto hit = qsl::first_crossing_time(scenario.hamiltonian(),
                                                  scenario.initial_projector(), 1e-4, 5.0, opts);
        CHECK(hit.status == CrossingStatus::reached);
        CHECK(hit.value == 0.0);
    }

    TEST_CASE("angle trace follows the linear two-level law and lands on t_max") {
        const auto scenario = qsl::two_level(0.0, 2.0);  // speed 1
        const auto trace = qsl::angle_trace(scenario.hamiltonian(),
                                            scenario.initial_projector(), 1.2, 1e-2);
        CHECK(trace.lipschitz == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(trace.times.size() == trace.angles.size());
        CHECK(trace.times.front() == 0.0);
        CHECK(trace.times.back() == doctest::Approx(1.2).epsilon(1e-12));
        for (std::size_t k = 0; k < trace.times.size(); ++k)
            REQUIRE(std::abs(trace.angles[k] - scenario.analytic_angle(0.0, trace.times[k])) <=
                    1e-9);
        for (std::size_t k = 1; k < trace.angles.size(); ++k)
            REQUIRE(std::abs(trace.angles[k] - trace.angles[k - 1]) <= 1e-2 + 1e-9);
    }

    TEST_CASE("trace of a frozen subspace is identically zero") {
        qsl::Rng rng(0x67);
        const HermitianOperator h(support::random_hermitian(4, rng));
        const auto frozen = qsl::spectral_projector_case(h, {1});
        const auto trace = qsl::angle_trace(h, frozen, 3.0, 1e-2);
        for (double a : trace.angles) REQUIRE(a <= 1e-7);
    }

    TEST_CASE("trace samples agree with the public angle route") {
        qsl::Rng rng(0x68);
        const HermitianOperator h(support::random_hermitian(7, rng));
        const auto p = support::random_projector(7, 3, rng);
        const auto trace = qsl::angle_trace(h, p, 0.8, 5e-3);
        const qsl::ProjectionPath path(h, p);
        for (std::size_t k = 0; k < trace.times.size(); k += trace.times.size() / 10 + 1) {
            const double direct = qsl::maximal_angle(path.at(trace.times[k]), p);
            // asin amplifies roundoff without bound as the angle approaches
            // pi/2, so the routes are compared where both are well posed: in
            // the sine domain.
            REQUIRE(std::abs(std::sin(trace.angles[k]) - std::sin(direct)) <= 1e-12);
        }
    }

    TEST_CASE("trace input validation") {
        const auto scenario = qsl::two_level(0.0, 1.0);
        const HermitianOperator h = scenario.hamiltonian();
        const auto p = scenario.initial_projector();
        CHECK_THROWS_AS(qsl::angle_trace(h, p, 0.0, 1e-3), qsl::Error);
        CHECK_THROWS_AS(qsl::angle_trace(h, p, 1.0, 0.5), qsl::Error);
        CHECK_THROWS_AS(qsl::angle_trace(h, p, 1.0, 1e-10), qsl::Error);
    }

    TEST_CASE("two-level reports saturate all three bounds at every target angle") {
        const auto scenario = qsl::two_level(0.0, 1.0);
        const HermitianOperator h = scenario.hamiltonian();
        const auto p = scenario.initial_projector();
        for (double theta : {kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2}) {
            const auto rep = qsl::bound_report(h, p, theta, 8.0);
            REQUIRE(rep.measured.status == CrossingStatus::reached);
            REQUIRE(std::abs(rep.saturation_commutator - 1.0) <= 1e-8);
            REQUIRE(std::abs(rep.saturation_dispersion - 1.0) <= 1e-8);
            REQUIRE(std::abs(rep.saturation_spectral - 1.0) <= 1e-8);
        }
    }

    TEST_CASE("bound chain and angle Lipschitz law on seeded tuples") {
        qsl::Rng rng(0xC4A1);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);
            const std::size_t r = 1 + static_cast<std::size_t>(trial) % (n - 1 ? n - 1 : 1);
            const HermitianOperator h(support::random_hermitian(n, rng));
            const auto p = support::random_projector(n, std::max<std::size_t>(r, 1), rng);

            const double v = qsl::commutator_speed(h, p);
            const double disp = qsl::subspace_dispersion(h, p).value;
            const double width = qsl::spectral_width(h).width();
            REQUIRE(v <= disp + 1e-8);
            REQUIRE(disp <= 0.5 * width + 1e-8);

            const qsl::ProjectionPath path(h, p);
            const double s = 2.0 * rng.uniform01(), t = 2.0 * rng.uniform01();
            const auto ps = path.at(s), pt = path.at(t);
            const double gap = qsl::gap_distance(ps, pt);
            const double angle = qsl::maximal_angle(ps, pt);
            REQUIRE(gap <= v * std::abs(t - s) + 1e-9);
            REQUIRE(angle <= v * std::abs(t - s) + 1e-9);
            REQUIRE(angle <= disp * std::abs(t - s) + 1e-6);
            if (gap > 1e-12) REQUIRE(angle > gap);
        }
    }

    TEST_CASE("deep subspace crossing: measured time respects the speed bound") {
        qsl::Rng rng(0x829);
        const HermitianOperator h(support::random_hermitian(8, rng));
        const auto p = support::random_projector(8, 3, rng);
        const auto rep = qsl::bound_report(h, p, kPi / 6, 40.0);
        REQUIRE(rep.measured.status == CrossingStatus::reached);
        CHECK(rep.saturation_commutator >= 1.0 - 1e-8);
        CHECK(rep.measured.value >= rep.bound_commutator - 1e-8);
        CHECK(rep.bound_commutator >= rep.bound_dispersion - 1e-12);
    }

    TEST_CASE("rank-1 crossings respect the variance floor at every angle") {
        qsl::Rng rng(0x66);
        int reached = 0;
        for (int trial = 0; trial < 15; ++trial) {
            const std::size_t n = 3 + static_cast<std::size_t>(trial % 4);
            const HermitianOperator h(support::random_hermitian(n, rng));
            const CVector psi = support::random_unit_vector(n, rng);
            const auto p = qsl::project_onto_span({psi});
            const double sigma = std::sqrt(qsl::energy_variance(h, psi));
            if (sigma <= 0.0) continue;
            for (double theta : {kPi / 8, kPi / 4}) {
                const auto hit = qsl::first_crossing_time(h, p, theta, 60.0);
                if (hit.status != CrossingStatus::reached) continue;
                ++reached;
                REQUIRE(hit.value >= theta / sigma - 1e-8);
            }
        }
        CHECK(reached > 10);  // the check must not pass vacuously
    }

    TEST_CASE("engineered rank-1 instances truly orthogonalize and clear both classical floors") {
        qsl::Rng rng(0xF1E);
        for (int trial = 0; trial < 5; ++trial) {
            const auto inst = support::orthogonalizing_instance(4 + trial % 4, rng);
            const auto rep =
                qsl::bound_report(inst.hamiltonian, inst.projector, kPi / 2, inst.t_star + 0.5);
            REQUIRE(rep.measured.status == CrossingStatus::reached);

            const double sigma = std::sqrt(qsl::energy_variance(inst.hamiltonian, inst.psi0));
            const double mean = qsl::margolus_levitin_delta(inst.hamiltonian, inst.psi0);
            REQUIRE(rep.measured.value >= kPi / (2.0 * sigma) - 1e-8);
            REQUIRE(rep.measured.value >= kPi / (2.0 * mean) - 1e-8);
            REQUIRE(rep.measured.value <= inst.t_zero + 1e-6);
            REQUIRE(rep.ml_delta.has_value());
            REQUIRE(std::abs(*rep.ml_delta - mean) <= 1e-9 * (1.0 + mean));
        }
    }

    TEST_CASE("identity Hamiltonian: spectral bound reported unbounded without faults") {
        ComplexMatrix two_id = ComplexMatrix::identity(3);
        two_id *= Complex(2.0, 0.0);
        const HermitianOperator h(two_id);
        qsl::Rng rng(0x69);
        const auto p = support::random_projector(3, 1, rng);
        const auto rep = qsl::bound_report(h, p, kPi / 4, 5.0);
        CHECK(rep.measured.status == CrossingStatus::reducing);
        CHECK(std::isinf(rep.bound_spectral));
        CHECK(std::isinf(rep.bound_commutator));
        CHECK(std::isnan(rep.saturation_spectral));
    }

    TEST_CASE("report rejects invalid targets and horizons") {
        const auto scenario = qsl::two_level(0.0, 1.0);
        CHECK_THROWS_AS(qsl::bound_report(scenario.hamiltonian(), scenario.initial_projector(),
                                          2.0, 5.0),
                        qsl::InvalidTheta);
        CHECK_THROWS_AS(qsl::bound_report(scenario.hamiltonian(), scenario.initial_projector(),
                                          kPi / 4, -1.0),
                        qsl::Error);
    }
}
