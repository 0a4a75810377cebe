// The oracles get their own sanity suite: every cross-check in the other
// suites is only as good as these reference computations, so they are pinned
// to closed forms first.

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qsl/linalg.hpp"

using qsl::Complex;
using qsl::ComplexMatrix;

namespace {

ComplexMatrix diag3(double a, double b, double c) {
    ComplexMatrix m(3, 3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}

}  // namespace

TEST_SUITE("oracles") {

    TEST_CASE("characteristic polynomial of diag(1,2,3) is (x-1)(x-2)(x-3)") {
        const auto c = oracle::characteristic_polynomial(diag3(1.0, 2.0, 3.0));
        REQUIRE(c.size() == 4);
        CHECK(std::abs(static_cast<double>(c[0]) - (-6.0)) < 1e-14);
        CHECK(std::abs(static_cast<double>(c[1]) - 11.0) < 1e-14);
        CHECK(std::abs(static_cast<double>(c[2]) - (-6.0)) < 1e-14);
        CHECK(static_cast<double>(c[3]) == 1.0);
    }

    TEST_CASE("Sturm bisection recovers a diagonal spectrum") {
        ComplexMatrix m(4, 4);
        m(0, 0) = -0.75;
        m(1, 1) = -0.1;
        m(2, 2) = 0.3;
        m(3, 3) = 2.2;
        const auto roots = oracle::sturm_spectrum(m);
        REQUIRE(roots.size() == 4);
        const double expected[4] = {-0.75, -0.1, 0.3, 2.2};
        for (int k = 0; k < 4; ++k) CHECK(std::abs(roots[k] - expected[k]) < 1e-12);
    }

    TEST_CASE("Sturm bisection matches the 2x2 closed form") {
        ComplexMatrix m(2, 2);
        m(0, 0) = 1.5;
        m(1, 1) = -0.2;
        m(0, 1) = Complex(0.3, -0.7);
        m(1, 0) = Complex(0.3, 0.7);
        const auto [lo, hi] = oracle::eigenvalues_2x2(m);
        const auto roots = oracle::sturm_spectrum(m);
        REQUIRE(roots.size() == 2);
        CHECK(std::abs(roots[0] - lo) < 1e-12);
        CHECK(std::abs(roots[1] - hi) < 1e-12);
    }

    TEST_CASE("power iteration: diagonal matrix and a Pythagorean row") {
        CHECK(std::abs(oracle::power_norm(diag3(3.0, -7.0, 2.0)) - 7.0) < 1e-12);

        ComplexMatrix row(1, 2);
        row(0, 0) = 3.0;
        row(0, 1) = 4.0;
        CHECK(std::abs(oracle::power_norm(row) - 5.0) < 1e-12);
    }

    TEST_CASE("schoolbook product matches a hand computation") {
        ComplexMatrix a(2, 2), b(2, 2);
        a(0, 0) = Complex(1, 1);
        a(0, 1) = 2.0;
        a(1, 0) = Complex(0, -1);
        a(1, 1) = 1.0;
        b(0, 0) = 1.0;
        b(0, 1) = Complex(0, 2);
        b(1, 0) = 3.0;
        b(1, 1) = -1.0;
        const ComplexMatrix c = oracle::naive_product(a, b);
        CHECK(std::abs(c(0, 0) - Complex(7, 1)) < 1e-15);
        CHECK(std::abs(c(0, 1) - Complex(-4, 2)) < 1e-15);
        CHECK(std::abs(c(1, 0) - Complex(3, -1)) < 1e-15);
        CHECK(std::abs(c(1, 1) - Complex(1, 0)) < 1e-15);
    }

    TEST_CASE("grid search solves two dispersion problems with known answers") {
        // H = diag(0,1) on all of C^2: q = s^2 - s^4, maximized at 1/4.
        ComplexMatrix g(2, 2), a(2, 2);
        g(1, 1) = 1.0;
        a(1, 1) = 1.0;  // H^2 = H here
        CHECK(std::abs(oracle::grid_dispersion_max(a, g) - 0.25) < 1e-9);

        // H = [[0, i], [-i, 0]]: H^2 = I, so q = 1 - <x,Hx>^2 with maximum 1.
        ComplexMatrix h(2, 2);
        h(0, 1) = Complex(0, 1);
        h(1, 0) = Complex(0, -1);
        const ComplexMatrix h2 = oracle::naive_product(h, h);
        CHECK(std::abs(oracle::grid_dispersion_max(h2, h) - 1.0) < 1e-9);
    }
}
