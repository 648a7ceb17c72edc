#pragma once

#include "gaugecalc/algebra.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace gaugecalc {

/// First-derivative stencil used by the exterior derivative.
///
/// `biased` is the second-order forward stencil (-f[j+2] + 4 f[j+1] - 3 f[j]) / 2h.
/// Its only periodic null vector is the constant, so discrete harmonic spaces
/// have the dimensions of de Rham cohomology. `central` is (f[j+1] - f[j-1]) / 2h,
/// which on even N also annihilates the checkerboard mode (-1)^j.
enum class DifferenceScheme { biased, central };

/// Uniform periodic grid on the unit torus, nodes at (j/N, l/N).
class TorusGrid {
public:
    static constexpr int kMinNodes = 8;

    explicit TorusGrid(int nodes, DifferenceScheme scheme = DifferenceScheme::biased);

    int n() const { return n_; }
    double h() const { return 1.0 / n_; }
    int size() const { return n_ * n_; }
    DifferenceScheme scheme() const { return scheme_; }

    /// Node index of (j, l), wrapping both indices.
    int index(int j, int l) const {
        j %= n_;
        l %= n_;
        if (j < 0) j += n_;
        if (l < 0) l += n_;
        return j * n_ + l;
    }
    double x(int j) const { return static_cast<double>(j) / n_; }
    double y(int l) const { return static_cast<double>(l) / n_; }

    bool operator==(const TorusGrid& other) const = default;

private:
    int n_;
    DifferenceScheme scheme_;
};

enum class ValueClass { antihermitian, general };

/// Matrix-valued k-form on a TorusGrid, k in {0,1,2}, node-collocated.
///
/// Component layout: degree 0 and 2 carry one grid (the function, resp. the
/// dx^dy coefficient), degree 1 carries the dx grid then the dy grid.
class LieForm {
public:
    LieForm(int degree, TorusGrid grid, int rank, ValueClass value_class = ValueClass::general);

    using Sampler = std::function<Mat(double x, double y)>;

    /// Samples one function per component at the nodes.
    static LieForm sample(int degree, const TorusGrid& grid, int rank, ValueClass value_class,
                          const std::vector<Sampler>& components);

    /// Scalar form times a constant matrix: (sum_c f_c dx^c) (x) coefficient.
    static LieForm scalar_times(const LieForm& scalar, const Mat& coefficient,
                                ValueClass value_class);

    int degree() const { return degree_; }
    const TorusGrid& grid() const { return grid_; }
    int rank() const { return rank_; }
    ValueClass value_class() const { return value_class_; }
    int component_count() const { return static_cast<int>(components_.size()); }

    std::vector<Mat>& component(int c) { return components_.at(c); }
    const std::vector<Mat>& component(int c) const { return components_.at(c); }
    Mat& at(int c, int j, int l) { return components_[c][grid_.index(j, l)]; }
    const Mat& at(int c, int j, int l) const { return components_[c][grid_.index(j, l)]; }

    /// Checks the anti-Hermitian invariant and retags; throws on violation.
    LieForm as_antihermitian() const;
    LieForm as_general() const;
    double max_anti_hermitian_defect() const;

    /// Max entry modulus over all components and nodes.
    double max_abs() const;

    LieForm& operator+=(const LieForm& other);
    LieForm& operator-=(const LieForm& other);
    LieForm& operator*=(double s);

    bool same_shape(const LieForm& other) const;

private:
    int degree_;
    TorusGrid grid_;
    int rank_;
    ValueClass value_class_;
    std::vector<std::vector<Mat>> components_;
};

LieForm operator+(LieForm a, const LieForm& b);
LieForm operator-(LieForm a, const LieForm& b);
LieForm operator*(double s, LieForm a);
LieForm operator-(LieForm a);

/// Real scalar vector field (x and y components) on the grid.
struct VectorField {
    TorusGrid grid;
    std::vector<double> vx;
    std::vector<double> vy;

    explicit VectorField(TorusGrid g) : grid(g), vx(g.size(), 0.0), vy(g.size(), 0.0) {}
};

int components_for_degree(int degree);

/// Applies the grid's first-derivative stencil along x (axis 0) or y (axis 1).
std::vector<Mat> partial(const TorusGrid& grid, const std::vector<Mat>& f, int axis);

/// The adjoint-negated stencil -D^T (second-order backward for the biased scheme).
std::vector<Mat> partial_dual(const TorusGrid& grid, const std::vector<Mat>& f, int axis);

LieForm ext_d(const LieForm& form);

/// Exterior derivative assembled from the dual stencil; -* ext_d_dual * is the
/// exact discrete adjoint of ext_d.
LieForm ext_d_dual(const LieForm& form);

LieForm hodge_star(const LieForm& form);

/// Pointwise wedge of the form parts with matrix products of the coefficients.
LieForm wedge_compose(const LieForm& a, const LieForm& b);

/// Metric dual of a real scalar 1-form (rank 1, zero imaginary parts).
VectorField sharp(const LieForm& alpha);

/// Contraction in the first slot.
LieForm interior(const VectorField& v, const LieForm& form);

/// h^2 sum over nodes of the flat-metric form pairing times Re tr(A B^H).
double l2_inner(const LieForm& a, const LieForm& b);
double l2_norm(const LieForm& form);

/// Mean over nodes of every component (integral over the unit torus).
std::vector<Mat> component_means(const LieForm& form);

nlohmann::json to_json(const LieForm& form);
LieForm lie_form_from_json(const nlohmann::json& record);

std::string to_string(ValueClass vc);
std::string to_string(DifferenceScheme scheme);

}  // namespace gaugecalc
