#include "gaugecalc/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gaugecalc {

namespace {

constexpr double pi = std::numbers::pi;

void require_scalar_one_form(const LieForm& f, const char* what) {
    if (f.degree() != 1 || f.rank() != 1)
        throw std::invalid_argument(std::string("su2_potential: ") + what + " must be a scalar 1-form");
}

// w-component of a scalar 2-form as a scalar 0-form
LieForm as_function(const LieForm& two_form) {
    LieForm f(0, two_form.grid(), 1);
    f.component(0) = two_form.component(0);
    return f;
}

LieForm as_area_form(const LieForm& function) {
    LieForm f(2, function.grid(), 1);
    f.component(0) = function.component(0);
    return f;
}

void real_stats(const LieForm& f, double& mean, double& lo, double& hi) {
    const auto& v = f.component(0);
    double sum = 0.0;
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const Mat& m : v) {
        const double x = m(0, 0).real();
        sum += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    mean = sum / static_cast<double>(v.size());
}

}  // namespace

ConnectionCurve::ConnectionCurve(TorusGrid grid, int rank, Sampler sampler, std::vector<double> sample_times)
    : grid_(grid), rank_(rank), sampler_(std::move(sampler)), times_(std::move(sample_times)) {
    for (double t : times_)
        if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("ConnectionCurve: sample times must lie in [0, 1]");
    if (!std::is_sorted(times_.begin(), times_.end()))
        throw std::invalid_argument("ConnectionCurve: sample times must be ordered");
    if (potential(0.0).max_abs() > 1e-12)
        throw std::invalid_argument("ConnectionCurve: E(0) must be the zero potential");
}

LieForm ConnectionCurve::potential(double t) const {
    LieForm e = sampler_(t);
    if (e.degree() != 1 || !(e.grid() == grid_) || e.rank() != rank_)
        throw std::invalid_argument("ConnectionCurve: sampler returned a form of the wrong shape");
    return e.as_antihermitian();
}

PerturbationJets extract_jets(const ConnectionCurve& curve, double t_small) {
    if (!(t_small >= 1e-6))
        throw std::invalid_argument("extract_jets: t_small below 1e-6 is degenerate at double precision");
    if (t_small > 0.1) throw std::invalid_argument("extract_jets: t_small must be at most 0.1");
    // polynomial fit through E(0) = 0 and E(k t), k = 1..5: exact on quintic curves
    static constexpr double w1[5] = {5.0, -5.0, 10.0 / 3.0, -5.0 / 4.0, 1.0 / 5.0};
    static constexpr double w2[5] = {-77.0 / 12.0, 107.0 / 12.0, -13.0 / 2.0, 61.0 / 24.0, -5.0 / 12.0};
    LieForm e1(1, curve.grid(), curve.rank(), ValueClass::antihermitian);
    LieForm e2 = e1;
    for (int k = 0; k < 5; ++k) {
        const LieForm s = curve.potential((k + 1) * t_small);
        e1 += (w1[k] / t_small) * s;
        e2 += (w2[k] / (t_small * t_small)) * s;
    }
    e1 = e1.as_antihermitian();
    e2 = e2.as_antihermitian();
    LieForm c_e = ext_d(e2) + wedge_compose(e1, e1);
    return {std::move(e1), std::move(e2), std::move(c_e)};
}

YmCurveCheck check_ym_curve(const PerturbationJets& jets, const Connection& base) {
    if (l2_norm(curvature(base)) > kFlatnessTol) throw std::invalid_argument("check_ym_curve: base connection is not flat");
    YmCurveCheck r;
    r.nabla_e1 = l2_norm(covariant_d(base, jets.e1));
    r.delta_e1 = l2_norm(codifferential(base, jets.e1));
    r.delta_c_e = l2_norm(codifferential(base, jets.c_e));
    r.c_e = l2_norm(jets.c_e);
    r.harmonic_projection_e1 = harmonic_projection_norm(base, jets.e1);
    return r;
}

FlatCurveCheck check_flat_curve(const ConnectionCurve& curve, const std::vector<double>& sample_ts, double tol,
                                double flat_threshold) {
    FlatCurveCheck r;
    for (double t : sample_ts) {
        const double k = l2_norm(curvature(curve.connection(t)));
        r.t.push_back(t);
        r.curvature_l2.push_back(k);
        if (!(k <= flat_threshold)) r.flat = false;
    }
    r.c_e = l2_norm(extract_jets(curve).c_e);
    r.c_e_within_tol = !r.flat || r.c_e <= tol;
    return r;
}

ConnectionCurve gauge_orbit_curve(const LieForm& a1, const LieForm& a2) {
    if (a1.degree() != 0 || a2.degree() != 0 || !a1.same_shape(a2))
        throw std::invalid_argument("gauge_orbit_curve: A1 and A2 must be 0-forms of the same shape");
    LieForm p = a1.as_antihermitian(), q = a2.as_antihermitian();
    const TorusGrid grid = p.grid();
    const int m = p.rank();
    return ConnectionCurve(grid, m, [p, q, grid, m](double t) {
        return gauge_transform(Connection::trivial(grid, m), gauge_exp(t * p + (t * t) * q)).potential();
    });
}

Su2Potential su2_potential(const LieForm& alpha, const LieForm& beta, const LieForm& gamma) {
    require_scalar_one_form(alpha, "alpha");
    require_scalar_one_form(beta, "beta");
    require_scalar_one_form(gamma, "gamma");
    if (!(alpha.grid() == beta.grid()) || !(alpha.grid() == gamma.grid()))
        throw std::invalid_argument("su2_potential: forms live on different grids");
    const ValueClass ah = ValueClass::antihermitian;
    LieForm e = LieForm::scalar_times(alpha, pauli::e(1).matrix(), ah) +
                LieForm::scalar_times(beta, pauli::e(2).matrix(), ah) +
                LieForm::scalar_times(gamma, pauli::e(3).matrix(), ah);
    return {Connection(e.as_antihermitian()), as_function(ext_d(alpha)), as_function(ext_d(beta)),
            as_function(ext_d(gamma))};
}

std::vector<LieForm> su2_coefficients(const Connection& c) {
    if (c.rank() != 2) throw std::invalid_argument("su2_coefficients: potential is not 2 x 2");
    const LieForm& e = c.potential();
    std::vector<LieForm> out(3, LieForm(1, c.grid(), 1));
    for (int comp = 0; comp < 2; ++comp)
        for (int i = 0; i < c.grid().size(); ++i) {
            const Mat& v = e.component(comp)[i];
            const auto x = pauli::coordinates(v);
            Mat rebuilt = zero_matrix(2);
            for (int a = 0; a < 3; ++a) {
                out[a].component(comp)[i](0, 0) = x[a];
                rebuilt += x[a] * pauli::e(a + 1).matrix();
            }
            if (max_abs(Mat(v - rebuilt)) > 1e-12 * (1.0 + max_abs(v)))
                throw std::invalid_argument("su2_ym_conditions: potential has a component outside span{e1, e2, e3}");
        }
    return out;
}

Su2Conditions su2_ym_conditions(const Connection& c) {
    const auto coeff = su2_coefficients(c);
    std::vector<LieForm> h;
    for (const auto& a : coeff) h.push_back(as_function(ext_d(a)));
    std::vector<VectorField> v;
    for (const auto& a : coeff) v.push_back(sharp(a));

    Su2Conditions r;
    const LieForm general = ym_residual(c);
    for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3, g = (a + 2) % 3;
        // the codifferential pairs with the dual stencil, so *dh uses it too
        const LieForm star_dh = hodge_star(ext_d_dual(h[a]));
        const LieForm bracket_term = interior(v[g], as_area_form(h[b])) - interior(v[b], as_area_form(h[g]));
        const LieForm derived = star_dh + 2.0 * bracket_term;
        r.residual[a] = l2_norm(derived);
        r.literal_residual[a] = l2_norm(star_dh - 2.0 * bracket_term);
        r.wedge[a] = l2_norm(wedge_compose(coeff[b], coeff[g]));
        real_stats(h[a], r.h_mean[a], r.h_min[a], r.h_max[a]);
        // ym_residual has e_a-coefficient -derived
        for (int comp = 0; comp < 2; ++comp)
            for (int i = 0; i < c.grid().size(); ++i) {
                const double ga = pauli::coordinates(general.component(comp)[i])[a];
                r.general_discrepancy =
                    std::max(r.general_discrepancy, std::abs(ga + derived.component(comp)[i](0, 0).real()));
            }
    }
    r.wedge_free = std::max({r.wedge[0], r.wedge[1], r.wedge[2]}) <= kWedgeFreeTol;
    return r;
}

namespace {

struct FamilyForm {
    std::function<double(double, double)> p, q;  // alpha = p dx + q dy
};

FamilyForm family_form(TorusFamily family) {
    if (family == TorusFamily::smooth) return {[](double, double) { return pi; }, [](double, double) { return 0.0; }};
    return {[](double, double y) { return std::cos(pi * y); }, [](double x, double) { return std::sin(pi * x); }};
}

Mat family_direction(double lambda, double t) {
    return Mat(pauli::e(1).matrix() + lambda * (1.0 - t) * pauli::e(2).matrix());
}

}  // namespace

ConnectionCurve torus_family_curve(TorusFamily family, double lambda, const TorusGrid& grid) {
    const FamilyForm f = family_form(family);
    const LieForm alpha = LieForm::sample(1, grid, 1, ValueClass::general,
                                          {[f](double x, double y) { return Mat::Constant(1, 1, f.p(x, y)); },
                                           [f](double x, double y) { return Mat::Constant(1, 1, f.q(x, y)); }});
    return ConnectionCurve(grid, 2, [alpha, lambda](double t) {
        return LieForm::scalar_times(alpha, Mat(t * family_direction(lambda, t)), ValueClass::antihermitian);
    });
}

ClaimReport torus_family_report(TorusFamily family, double lambda, const std::vector<double>& ts, int grid_nodes,
                                int steps) {
    for (double t : ts)
        if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("torus_family_report: sample times must lie in [0, 1]");
    const TorusGrid grid(grid_nodes);
    const ConnectionCurve curve = torus_family_curve(family, lambda, grid);
    const FamilyForm f = family_form(family);

    ClaimReport rep;
    rep.family = family;
    rep.lambda = lambda;
    rep.grid = grid_nodes;
    rep.steps = steps;
    rep.seam_jump = std::abs(f.p(0.0, 0.0) - f.p(0.0, 1.0));

    const int n = grid.n();
    for (double t : ts) {
        const Connection c = curve.connection(t);
        const FieldReport fr = field_report(c);
        TorusRecord rec;
        rec.t = t;
        rec.curvature_l2 = fr.curvature_l2;
        rec.residual_l2 = fr.residual_l2;
        rec.covariant_residual_l2 = fr.covariant_residual_l2;
        rec.ym_value = fr.ym_value;
        rec.flat = fr.flat;
        const LieForm k = curvature(c);
        double near = 0.0, total = 0.0;
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                const double w = k.at(0, j, l).squaredNorm();
                total += w;
                if (l >= n - 2 || l <= 1) near += w;
            }
        rec.seam_fraction = total > 0.0 ? near / total : 0.0;
        rec.su2 = su2_ym_conditions(c);
        rep.records.push_back(rec);
    }

    // endpoint connections, transported with the closed-form coefficients
    for (double t : {0.0, 1.0}) {
        const Mat dir = t * family_direction(lambda, t);
        TorusPotential pot(2, [f, dir](double x, double y) { return Mat(f.p(x, y) * dir); },
                           [f, dir](double x, double y) { return Mat(f.q(x, y) * dir); });
        for (int axis : {0, 1}) rep.holonomies.push_back({t, axis, parallel_transport(pot, torus_generator(axis), steps)});
    }

    rep.jets = check_ym_curve(extract_jets(curve), Connection::trivial(grid, 2));
    return rep;
}

std::string to_string(TorusFamily family) { return family == TorusFamily::seamed ? "seamed" : "smooth"; }

nlohmann::json to_json(const YmCurveCheck& r) {
    return {{"nabla_e1", r.nabla_e1},   {"delta_e1", r.delta_e1}, {"delta_c_e", r.delta_c_e},
            {"nabla_c_e", r.nabla_c_e}, {"c_e", r.c_e},           {"harmonic_projection_e1", r.harmonic_projection_e1}};
}

nlohmann::json to_json(const Su2Conditions& r) {
    auto triple = [](const double* v) { return nlohmann::json{v[0], v[1], v[2]}; };
    return {{"residual", triple(r.residual)},
            {"literal_sign_residual", triple(r.literal_residual)},
            {"wedge", triple(r.wedge)},
            {"wedge_free", r.wedge_free},
            {"general_discrepancy", r.general_discrepancy},
            {"h_mean", triple(r.h_mean)},
            {"h_min", triple(r.h_min)},
            {"h_max", triple(r.h_max)}};
}

nlohmann::json to_json(const ClaimReport& r) {
    auto records = nlohmann::json::array();
    for (const auto& rec : r.records)
        records.push_back({{"t", rec.t},
                           {"curvature_l2", rec.curvature_l2},
                           {"residual_l2", rec.residual_l2},
                           {"covariant_residual_l2", rec.covariant_residual_l2},
                           {"ym_value", rec.ym_value},
                           {"flat", rec.flat},
                           {"seam_fraction", rec.seam_fraction},
                           {"su2", to_json(rec.su2)}});
    auto hol = nlohmann::json::array();
    for (const auto& h : r.holonomies)
        hol.push_back({{"t", h.t}, {"axis", h.axis == 0 ? "x" : "y"}, {"matrix", matrix_to_json(h.matrix)},
                       {"trace", {h.matrix.trace().real(), h.matrix.trace().imag()}}});
    return {{"family", to_string(r.family)}, {"lambda", r.lambda}, {"grid", r.grid},         {"steps", r.steps},
            {"seam_jump", r.seam_jump},      {"records", records},  {"holonomies", hol}, {"jets", to_json(r.jets)}};
}

}  // namespace gaugecalc
