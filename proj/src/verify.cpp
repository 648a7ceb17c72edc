#include "gaugecalc/verify.hpp"

#include "gaugecalc/curves.hpp"
#include "gaugecalc/holonomy.hpp"
#include "gaugecalc/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gaugecalc {

namespace {

constexpr double pi = std::numbers::pi;

Mat e(int a) { return pauli::e(a).matrix(); }

class Collector {
public:
    explicit Collector(std::string suite) : suite_(std::move(suite)) {}
    void at_most(std::string name, double value, double tol) { out_.push_back({suite_, std::move(name), value, 0.0, tol}); }
    void within(std::string name, double value, double lo, double hi) {
        out_.push_back({suite_, std::move(name), value, lo, hi});
    }
    std::vector<CheckResult> take() { return std::move(out_); }

private:
    std::string suite_;
    std::vector<CheckResult> out_;
};

LieForm constant_one_form(const TorusGrid& g, const Mat& p, const Mat& q) {
    return LieForm::sample(1, g, static_cast<int>(p.rows()), ValueClass::antihermitian,
                           {[p](double, double) { return p; }, [q](double, double) { return q; }});
}

double d_sin_error(int n) {
    TorusGrid g(n);
    LieForm f = LieForm::sample(1, g, 2, ValueClass::antihermitian,
                                {[](double, double) { return zero_matrix(2); },
                                 [](double x, double) { return Mat(std::sin(2 * pi * x) * e(1)); }});
    LieForm k = ext_d(f);
    double err = 0.0;
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
            err = std::max(err, max_abs(Mat(k.at(0, j, l) - 2 * pi * std::cos(2 * pi * g.x(j)) * e(1))));
    return err;
}

}  // namespace

std::vector<CheckResult> verify_algebra(const SuiteOptions& opt) {
    Collector c("algebra");
    double table = 0.0;
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
            Mat expected = zero_matrix(2);
            for (int k = 1; k <= 3; ++k) expected += pauli::structure_constant(a, b, k) * e(k);
            table = std::max(table, max_abs(Mat(bracket(e(a), e(b)) - expected)));
        }
    c.at_most("structure constants [e_a,e_b] = -2 eps_abc e_c", table, 0.0);

    Rng rng(opt.seed);
    double ad = 0.0, jacobi = 0.0, unit = 0.0;
    for (int m : {2, 3}) {
        for (int trial = 0; trial < 20; ++trial) {
            Mat x = random_algebra(rng, m), y = random_algebra(rng, m), z = random_algebra(rng, m);
            ad = std::max(ad, std::abs(inner(bracket(x, y), z) + inner(y, bracket(x, z))));
            jacobi = std::max(jacobi, max_abs(Mat(bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) +
                                                  bracket(z, bracket(x, y)))));
            unit = std::max(unit, unitarity_defect(mat_exp(x)));
        }
    }
    c.at_most("ad-invariance of the inner product", ad, 1e-12);
    c.at_most("Jacobi identity", jacobi, 1e-12);
    c.at_most("exp of anti-Hermitian is unitary", unit, 1e-12);
    c.at_most("exp(-i pi sigma_1) = -Id", max_abs(Mat(mat_exp(Mat(-pi * e(1))) + identity_matrix(2))), 1e-12);
    return c.take();
}

std::vector<CheckResult> verify_grid_forms(const SuiteOptions& opt) {
    Collector c("grid_forms");
    Rng rng(opt.seed + 1);
    TorusGrid g(opt.grid);
    double dd = 0.0, iso = 0.0, iota = 0.0, sbp = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        LieForm f = random_smooth_form(rng, 0, g, 2, ValueClass::general, 2);
        double scale = 0.0;
        for (const Mat& v : partial(g, partial(g, f.component(0), 0), 1)) scale = std::max(scale, max_abs(v));
        dd = std::max(dd, ext_d(ext_d(f)).max_abs() / scale);
        for (int k = 0; k <= 2; ++k) {
            LieForm a = random_smooth_form(rng, k, g, 2), b = random_smooth_form(rng, k, g, 2);
            iso = std::max(iso, std::abs(l2_inner(hodge_star(a), hodge_star(b)) - l2_inner(a, b)));
        }
        LieForm lambda = random_scalar_form(rng, 1, g);
        for (int k = 0; k <= 1; ++k) {
            LieForm xi = random_smooth_form(rng, k, g, 2), zeta = random_smooth_form(rng, k + 1, g, 2);
            iota = std::max(iota, std::abs(l2_inner(wedge_compose(lambda, xi), zeta) -
                                           l2_inner(xi, interior(sharp(lambda), zeta))));
        }
        LieForm f0 = random_smooth_form(rng, 0, g, 2), w = random_smooth_form(rng, 1, g, 2);
        LieForm delta = -hodge_star(ext_d_dual(hodge_star(w)));
        sbp = std::max(sbp, std::abs(l2_inner(ext_d(f0), w) - l2_inner(f0, delta)));
    }
    c.at_most("d d f = 0 (relative to |D_x D_y f|)", dd, 1e-12);
    c.at_most("hodge star isometry", iso, 1e-12);
    c.at_most("wedge / interior pairing", iota, 1e-10);
    c.at_most("summation by parts", sbp, 1e-12);
    const double e32 = d_sin_error(32), e64 = d_sin_error(64), e128 = d_sin_error(128);
    c.within("convergence ratio of d, N 32/64", e32 / e64, 3.6, 4.4);
    c.within("convergence ratio of d, N 64/128", e64 / e128, 3.6, 4.4);
    return c.take();
}

std::vector<CheckResult> verify_gauge(const SuiteOptions& opt) {
    Collector c("gauge");
    Rng rng(opt.seed + 2);
    TorusGrid g(opt.grid);
    double adj = 0.0, edag = 0.0, split = 0.0, paths = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        Connection conn(random_smooth_form(rng, 1, g, 2, ValueClass::antihermitian, 2));
        for (int k = 0; k <= 1; ++k) {
            LieForm eta = random_smooth_form(rng, k, g, 2), omega = random_smooth_form(rng, k + 1, g, 2);
            adj = std::max(adj, std::abs(l2_inner(covariant_d(conn, eta), omega) -
                                         l2_inner(eta, codifferential(conn, omega))));
        }
        LieForm b = random_smooth_form(rng, 1, g, 2), w = random_smooth_form(rng, 2, g, 2);
        edag = std::max(edag, std::abs(l2_inner(wedge_action(conn.potential(), b), w) -
                                       l2_inner(b, e_dagger(conn.potential(), w))));
        LieForm e2 = random_smooth_form(rng, 1, g, 2, ValueClass::antihermitian, 2);
        LieForm lhs = curvature(Connection(conn.potential() + e2)) - curvature(conn);
        LieForm rhs = ext_d(e2) + wedge_compose(conn.potential(), e2) + wedge_compose(e2, conn.potential()) +
                      wedge_compose(e2, e2);
        split = std::max(split, (lhs - rhs).max_abs());
        LieForm r1 = ym_residual(conn);
        paths = std::max(paths, l2_norm(r1 - covariant_ym_residual(conn)) / (1.0 + l2_norm(r1)));
    }
    c.at_most("covariant d / codifferential adjointness", adj, 1e-10);
    c.at_most("wedge action / E-dagger adjointness", edag, 1e-10);
    c.at_most("curvature of a sum decomposes", split, 1e-10);
    c.at_most("flat-base and covariant residuals agree", paths, 1e-10);

    double zero_res = l2_norm(ym_residual(Connection::trivial(g, 2)));
    zero_res = std::max(zero_res, l2_norm(ym_residual(Connection(constant_one_form(g, pi * e(1), zero_matrix(2))))));
    for (double lambda : {0.5, 1.0, 2.0})
        zero_res = std::max(zero_res, l2_norm(ym_residual(Connection(
                                          constant_one_form(g, Mat(pi * (e(1) + lambda * e(2))), zero_matrix(2))))));
    c.at_most("Yang-Mills residual on closed commuting potentials", zero_res, 1e-10);

    double variation = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        LieForm ep = random_smooth_form(rng, 1, g, 2, ValueClass::antihermitian, 2);
        LieForm b = random_smooth_form(rng, 1, g, 2, ValueClass::antihermitian, 2);
        const double eps = 1e-5;
        const double fd =
            (ym_functional(Connection(ep + eps * b)) - ym_functional(Connection(ep - eps * b))) / (2 * eps);
        Connection conn(ep);
        const double exact = 2.0 * l2_inner(covariant_d(conn, b), curvature(conn));
        variation = std::max(variation, std::abs(fd - exact) / std::abs(exact));
    }
    c.at_most("first variation matches 2 <nabla B, K> (relative)", variation, 1e-6);

    TorusGrid g16(16);
    const int expected[2][3] = {{1, 2, 1}, {4, 8, 4}};
    for (int m : {1, 2})
        for (int k = 0; k <= 2; ++k)
            c.at_most("harmonic kernel dim, m=" + std::to_string(m) + " k=" + std::to_string(k),
                      std::abs(harmonic_kernel_dim(Connection::trivial(g16, m), k) - expected[m - 1][k]), 0.0);
    return c.take();
}

std::vector<CheckResult> verify_curves(const SuiteOptions& opt) {
    Collector c("curves");
    Rng rng(opt.seed + 3);
    TorusGrid g(opt.grid);
    const Connection base = Connection::trivial(g, 2);

    LieForm a = random_smooth_form(rng, 1, g, 2, ValueClass::antihermitian, 2);
    LieForm b = random_smooth_form(rng, 1, g, 2, ValueClass::antihermitian, 2);
    auto jets = extract_jets(ConnectionCurve(g, 2, [a, b](double t) { return t * a + (t * t) * b; }));
    c.at_most("jet stencil exact on t A + t^2 B (E1)", (jets.e1 - a).max_abs(), 1e-12);
    c.at_most("jet stencil exact on t A + t^2 B (E2)", (jets.e2 - b).max_abs(), 1e-9);

    const std::vector<double> ts{0.0, 0.25, 0.5, 0.75, 1.0};
    LieForm px = constant_one_form(g, pi * e(1), zero_matrix(2)), py = constant_one_form(g, zero_matrix(2), pi * e(1));
    auto flat = check_flat_curve(ConnectionCurve(g, 2, [px, py](double t) { return t * px + (t * t) * py; }), ts);
    c.at_most("flat curve is flat at all samples",
              *std::max_element(flat.curvature_l2.begin(), flat.curvature_l2.end()), kFlatnessTol);
    c.at_most("flat curve C_E", flat.c_e, kCeTol);

    Mat u = random_algebra(rng, 2), v = random_algebra(rng, 2);
    LieForm a1 = LieForm::sample(0, g, 2, ValueClass::antihermitian, {[u, v](double, double y) {
                                     return Mat(std::sin(2 * pi * y) * u + std::cos(4 * pi * y) * v);
                                 }});
    LieForm a2 = random_smooth_form(rng, 0, g, 2);
    auto orbit = check_ym_curve(extract_jets(gauge_orbit_curve(a1, a2)), base);
    c.at_most("gauge orbit: harmonic projection of E1", orbit.harmonic_projection_e1, 1e-6);
    c.at_most("gauge orbit: C_E", orbit.c_e, kCeTol);

    auto ym = check_ym_curve(extract_jets(ConnectionCurve(g, 2, [px](double t) { return t * px; })), base);
    c.at_most("constant-coefficient curve: |nabla E1|", ym.nabla_e1, 1e-8);

    double agree = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        LieForm alpha = random_scalar_form(rng, 1, g);
        LieForm beta = wedge_compose(random_scalar_form(rng, 0, g), alpha);
        LieForm gamma = wedge_compose(random_scalar_form(rng, 0, g), alpha);
        agree = std::max(agree, su2_ym_conditions(su2_potential(alpha, beta, gamma).connection).general_discrepancy);
    }
    c.at_most("su2 ansatz residual agrees with the general residual", agree, 1e-8);

    double stokes = 0.0;
    for (int trial = 0; trial < 5; ++trial)
        stokes = std::max(stokes, std::abs(component_means(ext_d(random_scalar_form(rng, 1, g, 3, 2.0)))[0](0, 0)));
    c.at_most("integral of d alpha vanishes", stokes, 1e-12);
    return c.take();
}

std::vector<CheckResult> verify_holonomy(const SuiteOptions& opt) {
    Collector c("holonomy");
    const int steps = opt.steps;
    TorusPotential px(2, [](double, double) { return Mat(pi * e(1)); }, [](double, double) { return zero_matrix(2); });
    c.at_most("E = pi dx e1 around x gives -Id",
              max_abs(Mat(parallel_transport(px, torus_generator(0), steps) + identity_matrix(2))), 1e-8);

    TorusPotential fast(2, [](double, double) { return Mat(4 * pi * e(1)); }, [](double, double) { return zero_matrix(2); });
    const Mat exact = mat_exp(Mat(-4 * pi * e(1)));
    const double e100 = max_abs(Mat(parallel_transport(fast, torus_generator(0), 100) - exact));
    const double e200 = max_abs(Mat(parallel_transport(fast, torus_generator(0), 200) - exact));
    c.within("transport error ratio on doubling steps", e100 / e200, 14.0, std::numeric_limits<double>::infinity());

    Rng rng(opt.seed + 4);
    Mat p0 = random_algebra(rng, 2), p1 = random_algebra(rng, 2), q0 = random_algebra(rng, 2);
    TorusPotential wavy(
        2, [p0, p1](double x, double y) { return Mat(std::sin(2 * pi * y) * p0 + std::cos(2 * pi * x) * p1); },
        [q0](double x, double y) { return Mat(std::cos(2 * pi * (x + y)) * q0); });
    const auto loop = torus_loop(1, 1, cplx(0.1, 0.2));
    const Mat g = parallel_transport(wavy, loop, steps);
    c.at_most("unitarity of transport", unitarity_defect(g), 1e-8);
    c.at_most("reversed path gives the inverse",
              max_abs(Mat(parallel_transport(wavy, reversed(loop), steps) * g - identity_matrix(2))), 1e-8);
    auto moved = wavy.gauge_transformed(
        [](double x, double y) { return mat_exp(Mat(0.7 * std::sin(2 * pi * x) * e(2) + 0.4 * std::cos(2 * pi * y) * e(3))); });
    c.at_most("Wilson loop trace gauge invariance",
              std::abs(wilson_loop(wavy, loop, 2 * steps).trace - wilson_loop(moved, loop, 2 * steps).trace), 1e-6);

    double ab = 0.0;
    for (double k : {0.5, 0.37, -1.2})
        for (int n : {1, 2, -1}) ab = std::max(ab, aharonov_bohm_monodromy(k, n).error);
    c.at_most("Aharonov-Bohm monodromy e^{2 pi i k n}", ab, 1e-8);

    auto rep = monodromy_representation(MeromorphicPotential::aharonov_bohm(0.37),
                                        {circle(0.0, 1.0, 1), circle(0.0, 1.0, 2)}, 2 * steps);
    c.at_most("loop concatenation homomorphism", rep.max_homomorphism_defect, 1e-6);

    double ac = 0.0;
    for (double lambda : {0.0, 0.25, 1.0})
        ac = std::max(ac, max_abs(Mat(parallel_transport(aharonov_casher_potential(lambda), circle(0.0, 1.0), steps) -
                                      aharonov_casher_phase(lambda))));
    c.at_most("Aharonov-Casher transport reproduces exp(i pi Lambda sigma_3)", ac, 1e-8);

    TorusPotential a3(2, [](double, double) { return e(3); }, [](double, double) { return zero_matrix(2); });
    auto w = wong_evolve(a3, segment(0.0, 1.0, PathDomain::torus), e(1), steps);
    double oracle = 0.0;
    for (std::size_t i = 0; i < w.t.size(); ++i)
        oracle = std::max(oracle, max_abs(Mat(w.spin[i] - (std::cos(2 * w.t[i]) * e(1) + std::sin(2 * w.t[i]) * e(2)))));
    c.at_most("Wong constant-A oracle", oracle, 1e-8);
    auto wg = wong_evolve(wavy, loop, e(1) + 0.5 * e(3), steps);
    c.at_most("Wong norm conservation", std::max(w.max_norm_drift, wg.max_norm_drift), 1e-9);
    c.at_most("Wong Ad-consistency with transport", std::max(w.max_ad_mismatch, wg.max_ad_mismatch), 1e-7);
    auto contractible = wong_evolve(px, circle(cplx(0.5, 0.5), 0.2, 1, PathDomain::torus), e(2), steps);
    c.at_most("Wong trivial shift on a contractible loop", max_abs(Mat(contractible.spin.back() - e(2))), 1e-7);
    return c.take();
}

std::vector<CheckResult> run_verify_suite(const SuiteOptions& opt) {
    std::vector<CheckResult> all;
    for (auto suite : {verify_algebra, verify_grid_forms, verify_gauge, verify_curves, verify_holonomy}) {
        auto part = suite(opt);
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

}  // namespace gaugecalc
