#include "gaugecalc/grid_forms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gaugecalc {

TorusGrid::TorusGrid(int nodes, DifferenceScheme scheme) : n_(nodes), scheme_(scheme) {
    if (nodes < kMinNodes)
        throw std::invalid_argument("TorusGrid: N = " + std::to_string(nodes) +
                                    " is below the minimum of " + std::to_string(kMinNodes));
}

int components_for_degree(int degree) {
    switch (degree) {
        case 0: return 1;
        case 1: return 2;
        case 2: return 1;
        default: throw std::invalid_argument("form degree must be 0, 1 or 2, got " + std::to_string(degree));
    }
}

LieForm::LieForm(int degree, TorusGrid grid, int rank, ValueClass value_class)
    : degree_(degree), grid_(grid), rank_(rank), value_class_(value_class) {
    if (rank < 1 || rank > kMaxRank)
        throw std::invalid_argument("LieForm: rank must be in 1.." + std::to_string(kMaxRank));
    components_.assign(components_for_degree(degree),
                       std::vector<Mat>(grid.size(), zero_matrix(rank)));
}

LieForm LieForm::sample(int degree, const TorusGrid& grid, int rank, ValueClass value_class,
                        const std::vector<Sampler>& components) {
    LieForm out(degree, grid, rank, ValueClass::general);
    if (static_cast<int>(components.size()) != out.component_count())
        throw std::invalid_argument("LieForm::sample: degree " + std::to_string(degree) + " needs " +
                                    std::to_string(out.component_count()) + " component samplers");
    for (int c = 0; c < out.component_count(); ++c) {
        for (int j = 0; j < grid.n(); ++j) {
            for (int l = 0; l < grid.n(); ++l) {
                Mat v = components[c](grid.x(j), grid.y(l));
                if (v.rows() != rank || v.cols() != rank)
                    throw std::invalid_argument("LieForm::sample: sampler returned a matrix of the wrong size");
                out.at(c, j, l) = v;
            }
        }
    }
    return value_class == ValueClass::antihermitian ? out.as_antihermitian() : out;
}

LieForm LieForm::scalar_times(const LieForm& scalar, const Mat& coefficient, ValueClass value_class) {
    if (scalar.rank() != 1) throw std::invalid_argument("LieForm::scalar_times: expected a rank-1 scalar form");
    const int m = static_cast<int>(coefficient.rows());
    LieForm out(scalar.degree(), scalar.grid(), m, ValueClass::general);
    for (int c = 0; c < out.component_count(); ++c)
        for (int i = 0; i < scalar.grid().size(); ++i)
            out.component(c)[i] = scalar.component(c)[i](0, 0) * coefficient;
    return value_class == ValueClass::antihermitian ? out.as_antihermitian() : out;
}

double LieForm::max_anti_hermitian_defect() const {
    double out = 0.0;
    for (const auto& comp : components_)
        for (const auto& v : comp) out = std::max(out, anti_hermitian_defect(v));
    return out;
}

LieForm LieForm::as_antihermitian() const {
    double defect = max_anti_hermitian_defect();
    if (defect > kAntiHermitianTol)
        throw std::invalid_argument("LieForm: values are not anti-Hermitian (max |A + A^H| = " +
                                    std::to_string(defect) + ")");
    LieForm out = *this;
    out.value_class_ = ValueClass::antihermitian;
    return out;
}

LieForm LieForm::as_general() const {
    LieForm out = *this;
    out.value_class_ = ValueClass::general;
    return out;
}

double LieForm::max_abs() const {
    double out = 0.0;
    for (const auto& comp : components_)
        for (const auto& v : comp) out = std::max(out, gaugecalc::max_abs(v));
    return out;
}

bool LieForm::same_shape(const LieForm& other) const {
    return degree_ == other.degree_ && grid_ == other.grid_ && rank_ == other.rank_;
}

namespace {

void require_same_shape(const LieForm& a, const LieForm& b, const char* op) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(op) + ": forms differ in degree, grid or rank (degree " +
                                    std::to_string(a.degree()) + "/" + std::to_string(b.degree()) +
                                    ", N " + std::to_string(a.grid().n()) + "/" +
                                    std::to_string(b.grid().n()) + ", m " + std::to_string(a.rank()) +
                                    "/" + std::to_string(b.rank()) + ")");
}

ValueClass combine(ValueClass a, ValueClass b) {
    return a == ValueClass::antihermitian && b == ValueClass::antihermitian ? ValueClass::antihermitian
                                                                             : ValueClass::general;
}

}  // namespace

LieForm& LieForm::operator+=(const LieForm& other) {
    require_same_shape(*this, other, "LieForm +");
    for (std::size_t c = 0; c < components_.size(); ++c)
        for (std::size_t i = 0; i < components_[c].size(); ++i) components_[c][i] += other.components_[c][i];
    value_class_ = combine(value_class_, other.value_class_);
    return *this;
}

LieForm& LieForm::operator-=(const LieForm& other) {
    require_same_shape(*this, other, "LieForm -");
    for (std::size_t c = 0; c < components_.size(); ++c)
        for (std::size_t i = 0; i < components_[c].size(); ++i) components_[c][i] -= other.components_[c][i];
    value_class_ = combine(value_class_, other.value_class_);
    return *this;
}

LieForm& LieForm::operator*=(double s) {
    for (auto& comp : components_)
        for (auto& v : comp) v *= s;
    return *this;
}

LieForm operator+(LieForm a, const LieForm& b) { return a += b; }
LieForm operator-(LieForm a, const LieForm& b) { return a -= b; }
LieForm operator*(double s, LieForm a) { return a *= s; }
LieForm operator-(LieForm a) { return a *= -1.0; }

std::vector<Mat> partial(const TorusGrid& grid, const std::vector<Mat>& f, int axis) {
    const int n = grid.n();
    const double inv2h = 0.5 * n;
    std::vector<Mat> out(f.size());
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            auto at = [&](int s) -> const Mat& {
                return axis == 0 ? f[grid.index(j + s, l)] : f[grid.index(j, l + s)];
            };
            Mat v;
            if (grid.scheme() == DifferenceScheme::biased)
                v = (4.0 * at(1) - at(2) - 3.0 * at(0)) * inv2h;
            else
                v = (at(1) - at(-1)) * inv2h;
            out[grid.index(j, l)] = v;
        }
    }
    return out;
}

std::vector<Mat> partial_dual(const TorusGrid& grid, const std::vector<Mat>& f, int axis) {
    const int n = grid.n();
    const double inv2h = 0.5 * n;
    std::vector<Mat> out(f.size());
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            auto at = [&](int s) -> const Mat& {
                return axis == 0 ? f[grid.index(j + s, l)] : f[grid.index(j, l + s)];
            };
            Mat v;
            if (grid.scheme() == DifferenceScheme::biased)
                v = (3.0 * at(0) - 4.0 * at(-1) + at(-2)) * inv2h;
            else
                v = (at(1) - at(-1)) * inv2h;
            out[grid.index(j, l)] = v;
        }
    }
    return out;
}

namespace {

using PartialFn = std::vector<Mat> (*)(const TorusGrid&, const std::vector<Mat>&, int);

LieForm exterior_derivative(const LieForm& form, PartialFn d) {
    const TorusGrid& g = form.grid();
    switch (form.degree()) {
        case 0: {
            LieForm out(1, g, form.rank(), form.value_class());
            out.component(0) = d(g, form.component(0), 0);
            out.component(1) = d(g, form.component(0), 1);
            return out;
        }
        case 1: {
            LieForm out(2, g, form.rank(), form.value_class());
            auto dxq = d(g, form.component(1), 0);
            auto dyp = d(g, form.component(0), 1);
            for (int i = 0; i < g.size(); ++i) out.component(0)[i] = dxq[i] - dyp[i];
            return out;
        }
        default:
            throw std::invalid_argument("ext_d: a 2-form has no nonzero exterior derivative on a surface");
    }
}

}  // namespace

LieForm ext_d(const LieForm& form) { return exterior_derivative(form, &partial); }

LieForm ext_d_dual(const LieForm& form) { return exterior_derivative(form, &partial_dual); }

LieForm hodge_star(const LieForm& form) {
    const TorusGrid& g = form.grid();
    switch (form.degree()) {
        case 0: {
            LieForm out(2, g, form.rank(), form.value_class());
            out.component(0) = form.component(0);
            return out;
        }
        case 1: {
            // *dx = dy, *dy = -dx
            LieForm out(1, g, form.rank(), form.value_class());
            out.component(1) = form.component(0);
            for (int i = 0; i < g.size(); ++i) out.component(0)[i] = -form.component(1)[i];
            return out;
        }
        default: {
            LieForm out(0, g, form.rank(), form.value_class());
            out.component(0) = form.component(0);
            return out;
        }
    }
}

LieForm wedge_compose(const LieForm& a, const LieForm& b) {
    if (a.degree() + b.degree() > 2)
        throw std::invalid_argument("wedge_compose: degree " + std::to_string(a.degree()) + " + " +
                                    std::to_string(b.degree()) + " exceeds 2");
    if (!(a.grid() == b.grid())) throw std::invalid_argument("wedge_compose: grids differ");
    if (a.rank() != b.rank() && a.rank() != 1 && b.rank() != 1)
        throw std::invalid_argument("wedge_compose: ranks differ and neither factor is scalar");

    const TorusGrid& g = a.grid();
    const int m = std::max(a.rank(), b.rank());
    auto mul = [](const Mat& x, const Mat& y) -> Mat {
        if (x.rows() == 1 && y.rows() != 1) return x(0, 0) * y;
        if (y.rows() == 1 && x.rows() != 1) return x * y(0, 0);
        return x * y;
    };

    LieForm out(a.degree() + b.degree(), g, m, ValueClass::general);
    for (int i = 0; i < g.size(); ++i) {
        if (a.degree() == 0) {
            for (int c = 0; c < b.component_count(); ++c)
                out.component(c)[i] = mul(a.component(0)[i], b.component(c)[i]);
        } else if (b.degree() == 0) {
            for (int c = 0; c < a.component_count(); ++c)
                out.component(c)[i] = mul(a.component(c)[i], b.component(0)[i]);
        } else {
            // (P dx + Q dy) ^ (P' dx + Q' dy) = (P Q' - Q P') dx^dy
            out.component(0)[i] = mul(a.component(0)[i], b.component(1)[i]) -
                                  mul(a.component(1)[i], b.component(0)[i]);
        }
    }
    return out;
}

VectorField sharp(const LieForm& alpha) {
    if (alpha.degree() != 1) throw std::invalid_argument("sharp: expected a 1-form");
    if (alpha.rank() != 1) throw std::invalid_argument("sharp: expected scalar (rank-1) coefficients");
    VectorField v(alpha.grid());
    for (int i = 0; i < alpha.grid().size(); ++i) {
        const cplx px = alpha.component(0)[i](0, 0);
        const cplx py = alpha.component(1)[i](0, 0);
        if (px.imag() != 0.0 || py.imag() != 0.0)
            throw std::invalid_argument("sharp: coefficients must be real");
        v.vx[i] = px.real();
        v.vy[i] = py.real();
    }
    return v;
}

LieForm interior(const VectorField& v, const LieForm& form) {
    if (!(v.grid == form.grid())) throw std::invalid_argument("interior: grids differ");
    const TorusGrid& g = form.grid();
    switch (form.degree()) {
        case 1: {
            LieForm out(0, g, form.rank(), form.value_class());
            for (int i = 0; i < g.size(); ++i)
                out.component(0)[i] = v.vx[i] * form.component(0)[i] + v.vy[i] * form.component(1)[i];
            return out;
        }
        case 2: {
            // i_v (R dx^dy) = v_x R dy - v_y R dx
            LieForm out(1, g, form.rank(), form.value_class());
            for (int i = 0; i < g.size(); ++i) {
                out.component(0)[i] = -v.vy[i] * form.component(0)[i];
                out.component(1)[i] = v.vx[i] * form.component(0)[i];
            }
            return out;
        }
        default:
            throw std::invalid_argument("interior: contraction of a 0-form is undefined");
    }
}

double l2_inner(const LieForm& a, const LieForm& b) {
    require_same_shape(a, b, "l2_inner");
    double sum = 0.0;
    for (int c = 0; c < a.component_count(); ++c)
        for (int i = 0; i < a.grid().size(); ++i) sum += inner(a.component(c)[i], b.component(c)[i]);
    const double h = a.grid().h();
    return sum * h * h;
}

double l2_norm(const LieForm& form) { return std::sqrt(std::max(0.0, l2_inner(form, form))); }

std::vector<Mat> component_means(const LieForm& form) {
    std::vector<Mat> out;
    for (int c = 0; c < form.component_count(); ++c) {
        Mat sum = zero_matrix(form.rank());
        for (const auto& v : form.component(c)) sum += v;
        out.push_back(sum / static_cast<double>(form.grid().size()));
    }
    return out;
}

std::string to_string(ValueClass vc) { return vc == ValueClass::antihermitian ? "antihermitian" : "general"; }

std::string to_string(DifferenceScheme scheme) {
    return scheme == DifferenceScheme::biased ? "biased" : "central";
}

nlohmann::json to_json(const LieForm& form) {
    nlohmann::json comps = nlohmann::json::array();
    for (int c = 0; c < form.component_count(); ++c) {
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& v : form.component(c))
            for (int r = 0; r < form.rank(); ++r)
                for (int s = 0; s < form.rank(); ++s) entries.push_back({v(r, s).real(), v(r, s).imag()});
        comps.push_back(std::move(entries));
    }
    return {{"degree", form.degree()},
            {"N", form.grid().n()},
            {"m", form.rank()},
            {"value_class", to_string(form.value_class())},
            {"scheme", to_string(form.grid().scheme())},
            {"components", std::move(comps)}};
}

LieForm lie_form_from_json(const nlohmann::json& record) {
    for (const char* key : {"degree", "N", "m", "value_class", "components"})
        if (!record.contains(key)) throw std::invalid_argument(std::string("LieForm record: missing field '") + key + "'");
    DifferenceScheme scheme = DifferenceScheme::biased;
    if (record.contains("scheme")) {
        const std::string s = record.at("scheme").get<std::string>();
        if (s == "central") scheme = DifferenceScheme::central;
        else if (s != "biased") throw std::invalid_argument("LieForm record: unknown scheme '" + s + "'");
    }
    const std::string vc = record.at("value_class").get<std::string>();
    if (vc != "antihermitian" && vc != "general")
        throw std::invalid_argument("LieForm record: unknown value_class '" + vc + "'");

    TorusGrid grid(record.at("N").get<int>(), scheme);
    LieForm out(record.at("degree").get<int>(), grid, record.at("m").get<int>(), ValueClass::general);
    const auto& comps = record.at("components");
    if (!comps.is_array() || static_cast<int>(comps.size()) != out.component_count())
        throw std::invalid_argument("LieForm record: wrong number of components");
    const std::size_t per = static_cast<std::size_t>(out.rank()) * out.rank();
    for (int c = 0; c < out.component_count(); ++c) {
        const auto& entries = comps[c];
        if (!entries.is_array() || entries.size() != per * grid.size())
            throw std::invalid_argument("LieForm record: component " + std::to_string(c) + " has " +
                                        std::to_string(entries.size()) + " entries, expected " +
                                        std::to_string(per * grid.size()));
        std::size_t k = 0;
        for (auto& v : out.component(c))
            for (int r = 0; r < out.rank(); ++r)
                for (int s = 0; s < out.rank(); ++s, ++k)
                    v(r, s) = cplx(entries[k].at(0).get<double>(), entries[k].at(1).get<double>());
    }
    return vc == "antihermitian" ? out.as_antihermitian() : out;
}

}  // namespace gaugecalc
