#include "gaugecalc/holonomy.hpp"
#include "gaugecalc/random_fields.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace gaugecalc;

namespace {

const double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

Mat e(int a) { return pauli::e(a).matrix(); }

TorusPotential constant_dx(const Mat& p) {
    const int m = static_cast<int>(p.rows());
    return TorusPotential(m, [p](double, double) { return p; }, [m](double, double) { return zero_matrix(m); });
}

// smooth periodic non-abelian potential
TorusPotential wavy() {
    return TorusPotential(
        2, [](double x, double y) { return Mat(std::sin(2 * pi * y) * e(1) + 0.5 * std::cos(2 * pi * x) * e(3)); },
        [](double x, double y) { return Mat(std::cos(2 * pi * (x + y)) * e(2) - 0.3 * e(1)); });
}

}  // namespace

TEST_CASE("path factories") {
    auto c = circle(0.0, 1.0, 2);
    CHECK(c.closed);
    CHECK(c.winding == 2);
    CHECK(std::abs(c.start() - 1.0) < 1e-15);
    auto gx = torus_generator(0);
    CHECK(gx.closed);
    CHECK(gx.winding_x == 1);
    CHECK_NOTHROW(validate_path(gx));
    auto s = segment(0.0, cplx(0.5, 0.0));
    CHECK_FALSE(s.closed);
    auto cat = concatenate(circle(0.0, 1.0, 1), circle(0.0, 1.0, 1));
    CHECK(cat.closed);
    CHECK(cat.winding == 2);
    CHECK(std::abs(cat.position(0.75) - c.position(0.75)) < 1e-14);
    CHECK_THROWS_AS(concatenate(s, circle(3.0, 1.0)), std::invalid_argument);
    auto r = reversed(circle(0.0, 1.0, 1));
    CHECK(r.winding == -1);
    CHECK(std::abs(r.position(0.25) - cplx(0.0, -1.0)) < 1e-14);

    ParametricPath fake = s;
    fake.closed = true;
    CHECK_THROWS_AS(validate_path(fake), std::invalid_argument);
}

TEST_CASE("parallel transport examples") {
    CHECK(max_abs(Mat(parallel_transport(TorusPotential::zero(2), torus_generator(0), 1000) - identity_matrix(2))) == 0.0);

    // E = pi dx (x) e1 around the x-generator: exp(-pi i sigma1) = -Id
    Mat g = parallel_transport(constant_dx(pi * e(1)), torus_generator(0), 1000);
    CHECK(max_abs(Mat(g + identity_matrix(2))) < 1e-8);

    Mat s = parallel_transport(MeromorphicPotential::aharonov_bohm(0.5), circle(0.0, 1.0, 1), 1000);
    CHECK(std::abs(s(0, 0) + 1.0) < 1e-8);

    CHECK_THROWS_AS(parallel_transport(TorusPotential::zero(2), torus_generator(0), 99), std::invalid_argument);
    CHECK_THROWS_AS(parallel_transport(TorusPotential::zero(2), circle(0.0, 1.0), 100), std::invalid_argument);
}

TEST_CASE("pole proximity and non-finite samples are rejected") {
    auto ab = MeromorphicPotential::aharonov_bohm(0.3);
    // the segment through the origin hits the pole exactly at a midpoint sample
    CHECK_THROWS_AS(parallel_transport(ab, segment(cplx(-1.0, 0.0), cplx(1.0, 0.0)), 100), std::domain_error);
    CHECK_THROWS_AS(parallel_transport(ab, circle(0.0, 5e-7), 100), std::domain_error);
    try {
        parallel_transport(ab, circle(0.0, 5e-7), 100);
    } catch (const std::domain_error& err) {
        CHECK(std::string(err.what()).find("pole at (0, 0)") != std::string::npos);
    }
    MeromorphicPotential bad(1, [](cplx) { return Mat::Constant(1, 1, std::nan("")); }, {});
    CHECK_THROWS_AS(parallel_transport(bad, circle(0.0, 1.0), 100), std::domain_error);

    MeromorphicPotential second_order(1, [](cplx z) { return Mat::Constant(1, 1, 1.0 / (z * z)); }, {{0.0, 2}});
    CHECK(second_order.has_higher_order_poles());
    CHECK_FALSE(ab.has_higher_order_poles());
}

TEST_CASE("transport is fourth order") {
    // constant coefficient oracle exp(-4 pi e1)
    auto pot = constant_dx(4 * pi * e(1));
    const Mat exact = mat_exp(Mat(-4 * pi * e(1)));
    double prev = 0.0;
    for (int steps : {100, 200, 400}) {
        const double err = max_abs(Mat(parallel_transport(pot, torus_generator(0), steps) - exact));
        if (prev > 0.0) CHECK(prev / err >= 14.0);
        prev = err;
    }
}

TEST_CASE("unitarity and reversal") {
    auto pot = wavy();
    for (const auto& path : {torus_generator(0), torus_generator(1), torus_loop(1, 2, cplx(0.1, 0.3)),
                             circle(cplx(0.5, 0.5), 0.2, 1, PathDomain::torus)}) {
        Mat g = parallel_transport(pot, path, 1000);
        CHECK(unitarity_defect(g) <= 1e-8);
        Mat back = parallel_transport(pot, reversed(path), 1000);
        CHECK(max_abs(Mat(back * g - identity_matrix(2))) <= 1e-8);
    }
    auto ac = aharonov_casher_potential(0.3);
    Mat g = parallel_transport(ac, circle(0.0, 1.0, 1), 1000);
    Mat back = parallel_transport(ac, reversed(circle(0.0, 1.0, 1)), 1000);
    CHECK(max_abs(Mat(back * g - identity_matrix(2))) <= 1e-8);
}

TEST_CASE("Wilson loops") {
    CHECK(std::abs(wilson_loop(TorusPotential::zero(2), torus_generator(0), 1000).trace - 2.0) < 1e-15);
    CHECK(std::abs(wilson_loop(constant_dx(pi * e(1)), torus_generator(0), 1000).trace + 2.0) < 1e-8);
    CHECK_THROWS_AS(wilson_loop(TorusPotential::zero(2), segment(0.0, cplx(0.3, 0.0), PathDomain::torus), 1000),
                    std::invalid_argument);

    // grid connection: constant coefficients interpolate exactly
    TorusGrid grid(16);
    Connection c(LieForm::sample(1, grid, 2, ValueClass::antihermitian,
                                 {[](double, double) { return Mat(pi * e(1)); },
                                  [](double, double) { return zero_matrix(2); }}));
    CHECK(std::abs(wilson_loop(c, torus_generator(0), 1000).trace + 2.0) < 1e-8);
}

TEST_CASE("Wilson loop trace is gauge invariant") {
    auto pot = wavy();
    auto g = [](double x, double y) {
        return mat_exp(Mat(0.7 * std::sin(2 * pi * x) * e(2) + 0.4 * std::cos(2 * pi * y) * e(3)));
    };
    auto moved = pot.gauge_transformed(g);
    for (const auto& path : {torus_generator(0, 1, cplx(0.2, 0.1)), torus_generator(1, 1, cplx(0.3, 0.6)),
                             torus_loop(1, 1, cplx(0.05, 0.4))}) {
        const cplx a = wilson_loop(pot, path, 2000).trace;
        const cplx b = wilson_loop(moved, path, 2000).trace;
        CHECK(std::abs(a - b) <= 1e-6);
    }
}

TEST_CASE("Aharonov-Bohm monodromy") {
    CHECK(std::abs(aharonov_bohm_monodromy(0.0, 1).monodromy - 1.0) < 1e-12);
    auto half = aharonov_bohm_monodromy(0.5, 1);
    CHECK(std::abs(half.monodromy + 1.0) <= 1e-8);
    CHECK(std::abs(half.flux + pi) < 1e-15);
    CHECK(half.steps == 1000);

    auto r = aharonov_bohm_monodromy(0.37, 2);
    CHECK(r.steps == 2000);
    CHECK(std::abs(r.monodromy - cplx(std::cos(1.48 * pi), std::sin(1.48 * pi))) <= 1e-8);
    for (double k : {0.5, 0.37, -1.2})
        for (int n : {1, 2, -1}) CHECK(aharonov_bohm_monodromy(k, n).error <= 1e-8);
    // complex k: |e^{2 pi i k}| != 1
    auto cx = aharonov_bohm_monodromy(cplx(0.2, 0.1), 1);
    CHECK(cx.error <= 1e-8);
}

TEST_CASE("Wong evolution") {
    // constant A = e3 along a unit-speed segment, I0 = e1
    TorusPotential a3(2, [](double, double) { return e(3); }, [](double, double) { return zero_matrix(2); });
    auto w = wong_evolve(a3, segment(0.0, 1.0, PathDomain::torus), e(1), 1000);
    double err = 0.0;
    for (std::size_t i = 0; i < w.t.size(); ++i) {
        const double t = w.t[i];
        err = std::max(err, max_abs(Mat(w.spin[i] - (std::cos(2 * t) * e(1) + std::sin(2 * t) * e(2)))));
    }
    CHECK(err <= 1e-8);
    CHECK(w.max_norm_drift <= 1e-9);
    CHECK(w.max_ad_mismatch <= 1e-7);

    auto still = wong_evolve(TorusPotential::zero(2), torus_generator(0), e(2), 100);
    CHECK(max_abs(Mat(still.spin.back() - e(2))) == 0.0);

    // flat potential, contractible loop: trivial shift
    auto flat = wong_evolve(constant_dx(pi * e(1)), circle(cplx(0.5, 0.5), 0.2, 1, PathDomain::torus), e(2), 1000);
    CHECK(max_abs(Mat(flat.spin.back() - e(2))) <= 1e-7);

    auto general = wong_evolve(wavy(), torus_loop(1, 1), e(1) + 0.5 * e(3), 1000);
    CHECK(general.max_norm_drift <= 1e-9);
    CHECK(general.max_ad_mismatch <= 1e-7);

    CHECK_THROWS_AS(wong_evolve(a3, torus_generator(0), pauli::sigma(1), 100), std::invalid_argument);
}

TEST_CASE("Aharonov-Casher phase") {
    CHECK(max_abs(Mat(aharonov_casher_phase(0.0) - identity_matrix(2))) < 1e-15);
    CHECK(max_abs(Mat(aharonov_casher_phase(1.0) + identity_matrix(2))) < 1e-14);
    Mat q = aharonov_casher_phase(0.25);
    CHECK(std::abs(q(0, 0) - std::exp(I * pi / 4.0)) < 1e-14);
    CHECK(std::abs(q(1, 1) - std::exp(-I * pi / 4.0)) < 1e-14);
    CHECK(std::abs(q(0, 1)) < 1e-15);
    for (double lambda : {0.0, 0.25, 1.0, -0.6}) {
        Mat g = parallel_transport(aharonov_casher_potential(lambda), circle(0.0, 1.0, 1), 1000);
        CHECK(max_abs(Mat(g - aharonov_casher_phase(lambda))) <= 1e-8);
    }
}

TEST_CASE("monodromy representation") {
    const double k = 0.37;
    auto ab = MeromorphicPotential::aharonov_bohm(k);
    auto rec = monodromy_representation(ab, {circle(0.0, 1.0, 1), circle(0.0, 1.0, 2)}, 2000);
    REQUIRE(rec.matrices.size() == 2);
    CHECK(std::abs(rec.matrices[0](0, 0) - std::exp(2 * pi * I * k)) <= 1e-8);
    CHECK(std::abs(rec.matrices[1](0, 0) - std::exp(4 * pi * I * k)) <= 1e-8);
    CHECK(std::abs(rec.matrices[0](0, 0) * rec.matrices[0](0, 0) - rec.matrices[1](0, 0)) <= 1e-8);
    CHECK(rec.pairs_checked == 4);
    CHECK(rec.max_homomorphism_defect <= 1e-6);

    auto zero = MeromorphicPotential(2, [](cplx) { return zero_matrix(2); }, {});
    for (const auto& m : monodromy_representation(zero, {circle(0.0, 1.0, 1)}, 100).matrices)
        CHECK(max_abs(Mat(m - identity_matrix(2))) == 0.0);

    auto diag = MeromorphicPotential::diagonal_pole({0.2, -0.45});
    Mat d = monodromy_representation(diag, {circle(0.0, 1.0, 1)}, 1000).matrices[0];
    CHECK(std::abs(d(0, 0) - std::exp(2 * pi * I * 0.2)) <= 1e-8);
    CHECK(std::abs(d(1, 1) - std::exp(2 * pi * I * -0.45)) <= 1e-8);
    CHECK(std::abs(d(0, 1)) <= 1e-12);

    // non-commuting two-pole potential: concatenation still multiplies
    auto two = MeromorphicPotential(
        2, [](cplx z) { return Mat(0.3 * pauli::sigma(1) / (z - 1.0) + 0.2 * pauli::sigma(3) / (z + 1.0)); },
        {{1.0, 1}, {-1.0, 1}});
    auto around_a = circle(1.0, 1.0, 1);                 // starts at 2, encloses 1
    auto shifted = concatenate(segment(2.0, 0.5), concatenate(circle(-1.0, 1.5, 1), segment(0.5, 2.0)));
    auto r2 = monodromy_representation(two, {around_a, shifted}, 2000);
    CHECK(r2.pairs_checked == 4);
    CHECK(r2.max_homomorphism_defect <= 1e-6);

    CHECK_THROWS_AS(monodromy_representation(ab, {segment(1.0, 2.0)}, 100), std::invalid_argument);
    CHECK_THROWS_AS(monodromy_representation(ab, {circle(0.5, 0.5)}, 100), std::domain_error);
}
