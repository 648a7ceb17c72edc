#include "gaugecalc/algebra.hpp"
#include "gaugecalc/random_fields.hpp"

#include <doctest.h>

#include <numbers>
#include <stdexcept>

using namespace gaugecalc;

namespace {
const double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
}  // namespace

TEST_CASE("Pauli bracket table") {
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
            Mat expected = zero_matrix(2);
            for (int c = 1; c <= 3; ++c) expected += pauli::structure_constant(a, b, c) * pauli::e(c).matrix();
            CHECK(max_abs(bracket(pauli::e(a).matrix(), pauli::e(b).matrix()) - expected) == 0.0);
        }
    CHECK(max_abs(bracket(pauli::e(1).matrix(), pauli::e(2).matrix()) + 2.0 * pauli::e(3).matrix()) == 0.0);
    CHECK(max_abs(bracket(pauli::e(3).matrix(), pauli::e(1).matrix()) + 2.0 * pauli::e(2).matrix()) == 0.0);
}

TEST_CASE("basis elements are anti-Hermitian and traceless") {
    for (int a = 1; a <= 3; ++a) {
        CHECK(is_anti_hermitian(pauli::e(a).matrix(), 0.0));
        CHECK(std::abs(pauli::e(a).matrix().trace()) == 0.0);
    }
}

TEST_CASE("inner product values") {
    CHECK(inner(pauli::e(1), pauli::e(1)) == doctest::Approx(2.0));
    CHECK(inner(pauli::e(1), pauli::e(2)) == 0.0);
    CHECK(inner(AlgebraElement::zero(2), pauli::e(3)) == 0.0);
    auto c = pauli::coordinates(0.5 * pauli::e(1).matrix() - 3.0 * pauli::e(3).matrix());
    CHECK(c[0] == doctest::Approx(0.5));
    CHECK(c[1] == doctest::Approx(0.0));
    CHECK(c[2] == doctest::Approx(-3.0));
}

TEST_CASE("bracket with itself vanishes") {
    Rng rng(1);
    Mat a = random_algebra(rng, 3);
    CHECK(max_abs(bracket(a, a)) == 0.0);
}

TEST_CASE("size mismatch and non anti-Hermitian input are rejected") {
    CHECK_THROWS_AS(bracket(zero_matrix(2), zero_matrix(3)), std::invalid_argument);
    CHECK_THROWS_AS(inner(zero_matrix(2), zero_matrix(3)), std::invalid_argument);
    CHECK_THROWS_AS(AlgebraElement(pauli::sigma(1)), std::invalid_argument);
    Mat almost = pauli::e(2).matrix();
    almost(0, 0) += 1e-9;
    CHECK_THROWS_AS(AlgebraElement{almost}, std::invalid_argument);
}

TEST_CASE("matrix exponential closed forms") {
    CHECK(max_abs(mat_exp(zero_matrix(3)) - identity_matrix(3)) == 0.0);
    // exp(-i pi sigma_1) = cos(pi) Id - i sin(pi) sigma_1
    Mat minus_id = -identity_matrix(2);
    CHECK(max_abs(mat_exp(-pi * I * pauli::sigma(1)) - minus_id) < 1e-14);
    CHECK(max_abs(mat_exp(I * pi * pauli::sigma(3)) - minus_id) < 1e-14);
    Mat quarter = mat_exp(I * pi * 0.25 * pauli::sigma(3));
    CHECK(std::abs(quarter(0, 0) - std::exp(I * pi * 0.25)) < 1e-15);
    CHECK(std::abs(quarter(1, 1) - std::exp(-I * pi * 0.25)) < 1e-15);
}

TEST_CASE("algebra invariants on random elements") {
    Rng rng(2024);
    for (int m : {2, 3}) {
        for (int trial = 0; trial < 50; ++trial) {
            Mat a = random_algebra(rng, m), b = random_algebra(rng, m), c = random_algebra(rng, m);
            // ad-invariance of the metric
            CHECK(std::abs(inner(bracket(c, a), b) + inner(a, bracket(c, b))) < 1e-10);
            Mat jacobi = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
            CHECK(max_abs(jacobi) < 1e-10);
            CHECK(max_abs(mat_exp(a) * mat_exp(Mat(-a)) - identity_matrix(m)) < 1e-10);
            CHECK(unitarity_defect(mat_exp(Mat(3.0 * a))) < 1e-12);
            CHECK(is_anti_hermitian(bracket(a, b)));
            CHECK(inner(a, a) > 0.0);
            CHECK(inner(a, b) == doctest::Approx(inner(b, a)));
        }
    }
}
