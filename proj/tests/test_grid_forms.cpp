#include "gaugecalc/grid_forms.hpp"
#include "gaugecalc/random_fields.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace gaugecalc;

namespace {

const double pi = std::numbers::pi;

Mat e(int a) { return pauli::e(a).matrix(); }

Mat scalar(double v) {
    Mat s(1, 1);
    s(0, 0) = v;
    return s;
}

LieForm::Sampler constant(const Mat& v) {
    return [v](double, double) { return v; };
}

LieForm::Sampler zero2() { return constant(zero_matrix(2)); }

// sin(2 pi x) dy (x) e1
LieForm sin_dy(const TorusGrid& g) {
    return LieForm::sample(1, g, 2, ValueClass::antihermitian,
                           {zero2(), [](double x, double) { return Mat(std::sin(2 * pi * x) * e(1)); }});
}

double max_node_error_of_d_sin(int n) {
    TorusGrid g(n);
    LieForm k = ext_d(sin_dy(g));
    double err = 0.0;
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            Mat exact = 2 * pi * std::cos(2 * pi * g.x(j)) * e(1);
            err = std::max(err, max_abs(k.at(0, j, l) - exact));
        }
    return err;
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(TorusGrid(7), std::invalid_argument);
    CHECK_NOTHROW(TorusGrid(8));
    TorusGrid g(8);
    CHECK(g.index(-1, 8) == g.index(7, 0));
    CHECK_THROWS_AS(LieForm(3, g, 2), std::invalid_argument);
    CHECK(LieForm(1, g, 2).component_count() == 2);
    CHECK(LieForm(2, g, 2).component_count() == 1);
}

TEST_CASE("anti-Hermitian tag is checked") {
    TorusGrid g(8);
    CHECK_THROWS_AS(LieForm::sample(0, g, 2, ValueClass::antihermitian, {constant(pauli::sigma(1))}),
                    std::invalid_argument);
    auto f = LieForm::sample(0, g, 2, ValueClass::antihermitian, {constant(e(2))});
    CHECK(f.value_class() == ValueClass::antihermitian);
}

TEST_CASE("exterior derivative examples") {
    TorusGrid g(32);
    auto c = LieForm::sample(0, g, 2, ValueClass::antihermitian, {constant(e(3))});
    CHECK(ext_d(c).max_abs() == 0.0);

    // O(h^2): the biased stencil's leading error is h^2 f'''/3
    const double bound = std::pow(2 * pi, 3) / 3.0 * g.h() * g.h() * 1.01;
    CHECK(max_node_error_of_d_sin(32) < bound);

    CHECK_THROWS_AS(ext_d(LieForm(2, g, 2)), std::invalid_argument);
}

TEST_CASE("d of d vanishes for random fields") {
    Rng rng(5);
    for (auto scheme : {DifferenceScheme::biased, DifferenceScheme::central}) {
        TorusGrid g(64, scheme);
        for (int trial = 0; trial < 5; ++trial) {
            auto f = random_smooth_form(rng, 0, g, 2, ValueClass::general, 2);
            // the two mixed differences cancel up to rounding of terms of size |D_x D_y f|
            double scale = 0.0;
            for (const Mat& v : partial(g, partial(g, f.component(0), 0), 1)) scale = std::max(scale, max_abs(v));
            CHECK(ext_d(ext_d(f)).max_abs() < 1e-12 * scale);
            CHECK(ext_d_dual(ext_d_dual(f)).max_abs() < 1e-12 * scale);
        }
    }
}

TEST_CASE("second-order convergence of d") {
    double e32 = max_node_error_of_d_sin(32), e64 = max_node_error_of_d_sin(64), e128 = max_node_error_of_d_sin(128);
    CHECK(e32 / e64 >= 3.6);
    CHECK(e32 / e64 <= 4.4);
    CHECK(e64 / e128 >= 3.6);
    CHECK(e64 / e128 <= 4.4);
}

TEST_CASE("hodge star") {
    TorusGrid g(16);
    Rng rng(11);
    auto f = random_smooth_form(rng, 1, g, 2);
    auto sf = hodge_star(f);
    for (int i = 0; i < g.size(); ++i) {
        CHECK(max_abs(sf.component(1)[i] - f.component(0)[i]) == 0.0);  // *dx = dy
        CHECK(max_abs(sf.component(0)[i] + f.component(1)[i]) == 0.0);  // *dy = -dx
    }
    for (int k = 0; k <= 2; ++k) {
        auto w = random_smooth_form(rng, k, g, 2);
        auto back = hodge_star(hodge_star(w));
        const double sign = k == 1 ? -1.0 : 1.0;
        CHECK((back - sign * w).max_abs() == 0.0);
    }
    auto vol = LieForm::sample(2, g, 2, ValueClass::antihermitian, {constant(e(3))});
    auto one = hodge_star(vol);
    CHECK(one.degree() == 0);
    CHECK((one - LieForm::sample(0, g, 2, ValueClass::antihermitian, {constant(e(3))})).max_abs() == 0.0);
}

TEST_CASE("wedge_compose examples") {
    TorusGrid g(16);
    auto ee = LieForm::sample(1, g, 2, ValueClass::antihermitian,
                              {[](double x, double) { return Mat(std::sin(2 * pi * x) * e(1)); },
                               [](double, double y) { return Mat(std::sin(2 * pi * y) * e(2)); }});
    auto w = wedge_compose(ee, ee);
    REQUIRE(w.degree() == 2);
    CHECK(w.value_class() == ValueClass::general);
    double err = 0.0;
    for (int j = 0; j < g.n(); ++j)
        for (int l = 0; l < g.n(); ++l) {
            Mat expected = -2.0 * std::sin(2 * pi * g.x(j)) * std::sin(2 * pi * g.y(l)) * e(3);
            err = std::max(err, max_abs(w.at(0, j, l) - expected));
        }
    CHECK(err < 1e-14);

    Rng rng(3);
    auto alpha = random_scalar_form(rng, 1, g);
    auto a1 = LieForm::scalar_times(alpha, e(1), ValueClass::antihermitian);
    CHECK(wedge_compose(a1, a1).max_abs() == 0.0);

    auto f = random_smooth_form(rng, 0, g, 2);
    auto omega = random_smooth_form(rng, 2, g, 2);
    auto fw = wedge_compose(f, omega);
    for (int i = 0; i < g.size(); ++i) CHECK(max_abs(fw.component(0)[i] - f.component(0)[i] * omega.component(0)[i]) == 0.0);

    CHECK_THROWS_AS(wedge_compose(omega, a1), std::invalid_argument);
}

TEST_CASE("sharp and interior") {
    TorusGrid g(8);
    auto dx = LieForm::sample(1, g, 1, ValueClass::general, {constant(scalar(1.0)), constant(scalar(0.0))});
    auto v = sharp(dx);
    CHECK(v.vx[5] == 1.0);
    CHECK(v.vy[5] == 0.0);
    auto ab = LieForm::sample(1, g, 1, ValueClass::general, {constant(scalar(0.3)), constant(scalar(-2.0))});
    auto vab = sharp(ab);
    CHECK(vab.vx[0] == 0.3);
    CHECK(vab.vy[0] == -2.0);
    auto z = sharp(LieForm(1, g, 1));
    CHECK(z.vx[3] == 0.0);
    CHECK_THROWS_AS(sharp(LieForm(1, g, 2)), std::invalid_argument);

    // i_{(a,b)}(h dx^dy) = h (a dy - b dx)
    auto hw = LieForm::sample(2, g, 2, ValueClass::antihermitian,
                              {[](double x, double y) { return Mat((1.0 + x * y) * e(2)); }});
    auto c = interior(vab, hw);
    for (int j = 0; j < g.n(); ++j)
        for (int l = 0; l < g.n(); ++l) {
            Mat h = hw.at(0, j, l);
            CHECK(max_abs(c.at(0, j, l) - (2.0 * h)) < 1e-15);
            CHECK(max_abs(c.at(1, j, l) - (0.3 * h)) < 1e-15);
        }
    CHECK(interior(vab, interior(vab, hw)).max_abs() < 1e-15);
    CHECK_THROWS_AS(interior(vab, LieForm(0, g, 2)), std::invalid_argument);
}

TEST_CASE("l2 inner product values") {
    TorusGrid g(32);
    auto dx1 = LieForm::sample(1, g, 2, ValueClass::antihermitian, {constant(e(1)), zero2()});
    auto dy1 = LieForm::sample(1, g, 2, ValueClass::antihermitian, {zero2(), constant(e(1))});
    CHECK(l2_inner(dx1, dx1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(l2_inner(dx1, dy1) == 0.0);
    auto s = LieForm::sample(1, g, 2, ValueClass::antihermitian,
                             {[](double x, double) { return Mat(std::sin(2 * pi * x) * e(1)); }, zero2()});
    CHECK(std::abs(l2_inner(s, s) - 1.0) < 1e-10);
    CHECK_THROWS_AS(l2_inner(dx1, LieForm(1, TorusGrid(16), 2)), std::invalid_argument);
}

TEST_CASE("interior product is adjoint to wedging a scalar 1-form") {
    Rng rng(17);
    TorusGrid g(32);
    for (int trial = 0; trial < 10; ++trial) {
        auto lambda = random_scalar_form(rng, 1, g);
        for (int k = 0; k <= 1; ++k) {
            auto xi = random_smooth_form(rng, k, g, 2);
            auto zeta = random_smooth_form(rng, k + 1, g, 2);
            double lhs = l2_inner(wedge_compose(lambda, xi), zeta);
            double rhs = l2_inner(xi, interior(sharp(lambda), zeta));
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("summation by parts with the dual stencil") {
    Rng rng(23);
    for (auto scheme : {DifferenceScheme::biased, DifferenceScheme::central}) {
        TorusGrid g(32, scheme);
        for (int trial = 0; trial < 5; ++trial) {
            auto f = random_smooth_form(rng, 0, g, 2, ValueClass::general, 3);
            auto w = random_smooth_form(rng, 1, g, 2, ValueClass::general, 3);
            auto delta_w = -hodge_star(ext_d_dual(hodge_star(w)));
            CHECK(std::abs(l2_inner(ext_d(f), w) - l2_inner(f, delta_w)) < 1e-12);
            auto r = random_smooth_form(rng, 2, g, 2, ValueClass::general, 3);
            auto delta_r = -hodge_star(ext_d_dual(hodge_star(r)));
            CHECK(std::abs(l2_inner(ext_d(w), r) - l2_inner(w, delta_r)) < 1e-12);
        }
    }
    // with central differences the dual stencil is the stencil itself
    TorusGrid gc(16, DifferenceScheme::central);
    auto f = random_smooth_form(rng, 1, gc, 2);
    CHECK((ext_d(f) - ext_d_dual(f)).max_abs() == 0.0);
}

TEST_CASE("hodge star is an isometry") {
    Rng rng(29);
    TorusGrid g(32);
    for (int k = 0; k <= 2; ++k) {
        auto a = random_smooth_form(rng, k, g, 2), b = random_smooth_form(rng, k, g, 2);
        CHECK(std::abs(l2_inner(hodge_star(a), hodge_star(b)) - l2_inner(a, b)) < 1e-12);
    }
}

TEST_CASE("central differences annihilate the checkerboard on even grids") {
    TorusGrid central(16, DifferenceScheme::central), biased(16);
    auto checker = [](const TorusGrid& g) {
        LieForm f(0, g, 1);
        for (int j = 0; j < g.n(); ++j)
            for (int l = 0; l < g.n(); ++l) f.at(0, j, l)(0, 0) = (j + l) % 2 == 0 ? 1.0 : -1.0;
        return f;
    };
    CHECK(ext_d(checker(central)).max_abs() == 0.0);
    CHECK(ext_d(checker(biased)).max_abs() > 1.0);
}

TEST_CASE("LieForm record round trip is bit exact") {
    Rng rng(31);
    TorusGrid g(8, DifferenceScheme::central);
    for (int k = 0; k <= 2; ++k) {
        auto f = random_smooth_form(rng, k, g, 2, k == 1 ? ValueClass::antihermitian : ValueClass::general, 2, 3.7);
        auto text = to_json(f).dump();
        auto back = lie_form_from_json(nlohmann::json::parse(text));
        REQUIRE(back.same_shape(f));
        CHECK(back.value_class() == f.value_class());
        CHECK(back.grid().scheme() == DifferenceScheme::central);
        CHECK((back - f).max_abs() == 0.0);
        CHECK(to_json(back).dump() == text);
    }
    auto bad = to_json(LieForm(1, TorusGrid(8), 2));
    bad["components"][0].erase(0);
    CHECK_THROWS_AS(lie_form_from_json(bad), std::invalid_argument);
    bad = to_json(LieForm(1, TorusGrid(8), 2));
    bad.erase("m");
    CHECK_THROWS_AS(lie_form_from_json(bad), std::invalid_argument);
}
