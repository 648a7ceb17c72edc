#pragma once

#include "gaugecalc/grid_forms.hpp"

#include <json.hpp>

#include <vector>

namespace gaugecalc {

/// Hermitian connection d + E on the trivial bundle T^2 x C^m, stored through
/// its anti-Hermitian potential 1-form E.
class Connection {
public:
    explicit Connection(LieForm potential);
    static Connection trivial(const TorusGrid& grid, int rank);

    const TorusGrid& grid() const { return potential_.grid(); }
    int rank() const { return potential_.rank(); }
    const LieForm& potential() const { return potential_; }

private:
    LieForm potential_;
};

/// K = dE + E^E.
LieForm curvature(const Connection& c);

/// dD + E^D - (-1)^k D^E for a degree-k form D (k <= 1).
LieForm covariant_d(const Connection& c, const LieForm& form);

/// Adjoint of covariant_d: -* (dual covariant d) *, degree k in {1,2}.
LieForm codifferential(const Connection& c, const LieForm& form);

/// The operator B -> (eta ^ beta) (x) [e, b], i.e. E^B + B^E on 1-forms.
LieForm wedge_action(const LieForm& potential, const LieForm& one_form);

/// Adjoint of wedge_action: gamma (x) c -> i_{eta#}(gamma) (x) [c, e].
LieForm e_dagger(const LieForm& potential, const LieForm& two_form);

/// ||K||^2.
double ym_functional(const Connection& c);

/// delta(dE) + delta(E^E) + E^dagger(dE) + E^dagger(E^E) with the flat base.
LieForm ym_residual(const Connection& c);

/// The same condition written with the covariant codifferential of d + E.
LieForm covariant_ym_residual(const Connection& c);

/// Pointwise unitary matrices, one per node.
using GaugeField = std::vector<Mat>;

GaugeField gauge_exp(const LieForm& generator);

/// E' = G E G^-1 - (dG) G^-1. Rejects G that is not unitary within 1e-10.
Connection gauge_transform(const Connection& c, const GaugeField& g);

/// Delta = delta nabla + nabla delta, dropping the terms undefined in degree 0 and 2.
LieForm laplacian_apply(const Connection& c, const LieForm& form);

inline constexpr double kFlatnessTol = 1e-8;
inline constexpr double kKernelThreshold = 1e-6;

/// Number of eigenvalues of the discrete Laplacian in degree k below threshold,
/// on the real vector space of u(m)-valued k-forms. Rejects non-flat connections.
int harmonic_kernel_dim(const Connection& c, int degree, double threshold = kKernelThreshold);

/// All eigenvalues of the discrete Laplacian in degree k, ascending.
std::vector<double> laplacian_spectrum(const Connection& c, int degree);

/// L2 norm of the orthogonal projection of an anti-Hermitian form onto ker Delta_k.
double harmonic_projection_norm(const Connection& c, const LieForm& form, double threshold = kKernelThreshold);

struct FieldReport {
    double ym_value = 0.0;
    double residual_l2 = 0.0;
    double covariant_residual_l2 = 0.0;
    double curvature_l2 = 0.0;
    bool flat = false;
};

FieldReport field_report(const Connection& c, double flat_threshold = kFlatnessTol);

nlohmann::json to_json(const Connection& c);
Connection connection_from_json(const nlohmann::json& record);
nlohmann::json to_json(const FieldReport& r);

}  // namespace gaugecalc
