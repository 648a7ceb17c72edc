#include "gaugecalc/gauge.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gaugecalc {

Connection::Connection(LieForm potential) : potential_(std::move(potential)) {
    if (potential_.degree() != 1)
        throw std::invalid_argument("Connection: potential must be a 1-form, got degree " +
                                    std::to_string(potential_.degree()));
    potential_ = potential_.as_antihermitian();
}

Connection Connection::trivial(const TorusGrid& grid, int rank) {
    return Connection(LieForm(1, grid, rank, ValueClass::antihermitian));
}

namespace {

void require_compatible(const Connection& c, const LieForm& form, const char* op) {
    if (!(form.grid() == c.grid()) || form.rank() != c.rank())
        throw std::invalid_argument(std::string(op) + ": form grid/rank does not match the connection");
}

// E^D - (-1)^k D^E, pointwise.
LieForm bracket_terms(const LieForm& e, const LieForm& form) {
    LieForm out = wedge_compose(e, form);
    if (form.degree() % 2 == 0) out -= wedge_compose(form, e);
    else out += wedge_compose(form, e);
    return out;
}

LieForm covariant_d_with(const Connection& c, const LieForm& form, LieForm (*d)(const LieForm&)) {
    if (form.degree() > 1)
        throw std::invalid_argument("covariant_d: degree-2 input has no covariant derivative on a surface");
    require_compatible(c, form, "covariant_d");
    LieForm out = d(form);
    out += bracket_terms(c.potential(), form);
    return form.value_class() == ValueClass::antihermitian ? out.as_antihermitian() : out;
}

}  // namespace

LieForm curvature(const Connection& c) {
    LieForm k = ext_d(c.potential());
    k += wedge_compose(c.potential(), c.potential());
    return k.as_antihermitian();
}

LieForm covariant_d(const Connection& c, const LieForm& form) { return covariant_d_with(c, form, &ext_d); }

LieForm codifferential(const Connection& c, const LieForm& form) {
    if (form.degree() < 1) throw std::invalid_argument("codifferential: 0-forms have no codifferential");
    require_compatible(c, form, "codifferential");
    return -hodge_star(covariant_d_with(c, hodge_star(form), &ext_d_dual));
}

LieForm wedge_action(const LieForm& potential, const LieForm& one_form) {
    if (potential.degree() != 1 || one_form.degree() != 1)
        throw std::invalid_argument("wedge_action: expects two 1-forms");
    return wedge_compose(potential, one_form) + wedge_compose(one_form, potential);
}

LieForm e_dagger(const LieForm& potential, const LieForm& two_form) {
    if (potential.degree() != 1) throw std::invalid_argument("e_dagger: potential must be a 1-form");
    if (two_form.degree() != 2) throw std::invalid_argument("e_dagger: argument must be a 2-form");
    if (!potential.same_shape(LieForm(1, two_form.grid(), two_form.rank())))
        throw std::invalid_argument("e_dagger: grid/rank mismatch");
    const TorusGrid& g = potential.grid();
    LieForm out(1, g, potential.rank(), ValueClass::general);
    for (int i = 0; i < g.size(); ++i) {
        const Mat& r = two_form.component(0)[i];
        // i_{(P,Q)}(R w) (x) [R, .]: dx gets -[R, Q], dy gets [R, P]
        out.component(0)[i] = -bracket(r, potential.component(1)[i]);
        out.component(1)[i] = bracket(r, potential.component(0)[i]);
    }
    if (potential.value_class() == ValueClass::antihermitian &&
        two_form.value_class() == ValueClass::antihermitian)
        return out.as_antihermitian();
    return out;
}

double ym_functional(const Connection& c) {
    LieForm k = curvature(c);
    return l2_inner(k, k);
}

LieForm ym_residual(const Connection& c) {
    const Connection flat = Connection::trivial(c.grid(), c.rank());
    const LieForm& e = c.potential();
    const LieForm de = ext_d(e);
    const LieForm ee = wedge_compose(e, e).as_antihermitian();
    LieForm out = codifferential(flat, de);
    out += codifferential(flat, ee);
    out += e_dagger(e, de);
    out += e_dagger(e, ee);
    return out;
}

LieForm covariant_ym_residual(const Connection& c) { return codifferential(c, curvature(c)); }

GaugeField gauge_exp(const LieForm& generator) {
    if (generator.degree() != 0) throw std::invalid_argument("gauge_exp: generator must be a 0-form");
    GaugeField g;
    g.reserve(generator.grid().size());
    for (const auto& a : generator.component(0)) g.push_back(mat_exp(a));
    return g;
}

Connection gauge_transform(const Connection& c, const GaugeField& g) {
    const TorusGrid& grid = c.grid();
    if (static_cast<int>(g.size()) != grid.size())
        throw std::invalid_argument("gauge_transform: gauge field has " + std::to_string(g.size()) +
                                    " nodes, grid has " + std::to_string(grid.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i].rows() != c.rank() || g[i].cols() != c.rank())
            throw std::invalid_argument("gauge_transform: gauge matrix has the wrong size");
        double defect = unitarity_defect(g[i]);
        if (!(defect <= 1e-10))
            throw std::invalid_argument("gauge_transform: G is not unitary at node " + std::to_string(i) +
                                        " (|G^H G - I| = " + std::to_string(defect) + ")");
    }
    LieForm g0(0, grid, c.rank());
    g0.component(0) = g;
    const LieForm dg = ext_d(g0);

    LieForm out(1, grid, c.rank(), ValueClass::general);
    for (int comp = 0; comp < 2; ++comp) {
        for (int i = 0; i < grid.size(); ++i) {
            const Mat& gi = g[i];
            const Mat gi_inv = gi.adjoint();
            const Mat pure = dg.component(comp)[i] * gi_inv;
            // anti-Hermitian part of (dG) G^-1; the discrete d is not a derivation,
            // so (dG) G^-1 itself is anti-Hermitian only to O(h^2)
            out.component(comp)[i] = gi * c.potential().component(comp)[i] * gi_inv -
                                     0.5 * (pure - pure.adjoint());
        }
    }
    return Connection(out);
}

LieForm laplacian_apply(const Connection& c, const LieForm& form) {
    switch (form.degree()) {
        case 0: return codifferential(c, covariant_d(c, form));
        case 1: return codifferential(c, covariant_d(c, form)) + covariant_d(c, codifferential(c, form));
        case 2: return covariant_d(c, codifferential(c, form));
        default: throw std::invalid_argument("laplacian_apply: bad degree");
    }
}

namespace {

// Orthonormal basis of u(m) under Re tr(A B^H).
std::vector<Mat> unitary_algebra_basis(int m) {
    std::vector<Mat> basis;
    const double s = 1.0 / std::sqrt(2.0);
    for (int r = 0; r < m; ++r) {
        Mat d = zero_matrix(m);
        d(r, r) = cplx(0.0, 1.0);
        basis.push_back(d);
        for (int q = r + 1; q < m; ++q) {
            Mat a = zero_matrix(m);
            a(r, q) = s;
            a(q, r) = -s;
            basis.push_back(a);
            Mat b = zero_matrix(m);
            b(r, q) = cplx(0.0, s);
            b(q, r) = cplx(0.0, s);
            basis.push_back(b);
        }
    }
    return basis;
}

void require_flat(const Connection& c) {
    const double k = l2_norm(curvature(c));
    if (!(k < kFlatnessTol))
        throw std::invalid_argument("harmonic_kernel_dim: connection is not flat (||K|| = " + std::to_string(k) +
                                    ", needs < " + std::to_string(kFlatnessTol) + ")");
}

struct Flattening {
    std::vector<Mat> basis;
    int components;
    int nodes;
    int dim() const { return components * nodes * static_cast<int>(basis.size()); }
};

Eigen::VectorXd flatten(const Flattening& f, const LieForm& form) {
    Eigen::VectorXd v(f.dim());
    int k = 0;
    for (int c = 0; c < f.components; ++c)
        for (int i = 0; i < f.nodes; ++i)
            for (const auto& b : f.basis) v(k++) = inner(form.component(c)[i], b);
    return v;
}

Eigen::MatrixXd assemble_laplacian(const Connection& c, int degree, Flattening& f) {
    f = Flattening{unitary_algebra_basis(c.rank()), components_for_degree(degree), c.grid().size()};
    const int dim = f.dim();
    Eigen::MatrixXd lap(dim, dim);
    LieForm unit(degree, c.grid(), c.rank(), ValueClass::antihermitian);
    int col = 0;
    for (int comp = 0; comp < f.components; ++comp) {
        for (int i = 0; i < f.nodes; ++i) {
            for (const auto& b : f.basis) {
                unit.component(comp)[i] = b;
                lap.col(col++) = flatten(f, laplacian_apply(c, unit));
                unit.component(comp)[i] = zero_matrix(c.rank());
            }
        }
    }
    return 0.5 * (lap + lap.transpose());
}

}  // namespace

std::vector<double> laplacian_spectrum(const Connection& c, int degree) {
    Flattening f;
    Eigen::MatrixXd lap = assemble_laplacian(c, degree, f);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("laplacian_spectrum: eigensolver failed");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

int harmonic_kernel_dim(const Connection& c, int degree, double threshold) {
    components_for_degree(degree);
    require_flat(c);
    auto spectrum = laplacian_spectrum(c, degree);
    return static_cast<int>(std::count_if(spectrum.begin(), spectrum.end(),
                                          [&](double lambda) { return lambda < threshold; }));
}

double harmonic_projection_norm(const Connection& c, const LieForm& form, double threshold) {
    require_compatible(c, form, "harmonic_projection_norm");
    const bool zero_potential = c.potential().max_abs() == 0.0;
    if (zero_potential && c.grid().scheme() == DifferenceScheme::biased) {
        // ker Delta is spanned by the constant forms; project onto the means
        double sq = 0.0;
        for (const auto& mean : component_means(form)) {
            Mat ah = 0.5 * (mean - mean.adjoint());
            sq += inner(ah, ah);
        }
        return std::sqrt(sq);
    }
    require_flat(c);
    Flattening f;
    Eigen::MatrixXd lap = assemble_laplacian(c, form.degree(), f);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success) throw std::runtime_error("harmonic_projection_norm: eigensolver failed");
    const Eigen::VectorXd v = flatten(f, form);
    double sq = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        if (solver.eigenvalues()(k) >= threshold) break;
        const double coeff = solver.eigenvectors().col(k).dot(v);
        sq += coeff * coeff;
    }
    const double h = c.grid().h();
    return std::sqrt(sq) * h;
}

FieldReport field_report(const Connection& c, double flat_threshold) {
    FieldReport r;
    const LieForm k = curvature(c);
    r.curvature_l2 = l2_norm(k);
    r.ym_value = r.curvature_l2 * r.curvature_l2;
    r.residual_l2 = l2_norm(ym_residual(c));
    r.covariant_residual_l2 = l2_norm(covariant_ym_residual(c));
    r.flat = r.curvature_l2 <= flat_threshold;
    return r;
}

nlohmann::json to_json(const Connection& c) {
    return {{"grid", {{"N", c.grid().n()}, {"scheme", to_string(c.grid().scheme())}}},
            {"m", c.rank()},
            {"potential", to_json(c.potential())}};
}

Connection connection_from_json(const nlohmann::json& record) {
    for (const char* key : {"grid", "m", "potential"})
        if (!record.contains(key)) throw std::invalid_argument(std::string("Connection record: missing field '") + key + "'");
    LieForm potential = lie_form_from_json(record.at("potential"));
    if (record.at("m").get<int>() != potential.rank() || record.at("grid").at("N").get<int>() != potential.grid().n())
        throw std::invalid_argument("Connection record: grid/m disagree with the potential record");
    return Connection(potential);
}

nlohmann::json to_json(const FieldReport& r) {
    return {{"ym_value", r.ym_value},
            {"residual_l2", r.residual_l2},
            {"covariant_residual_l2", r.covariant_residual_l2},
            {"curvature_l2", r.curvature_l2},
            {"flat", r.flat}};
}

}  // namespace gaugecalc
