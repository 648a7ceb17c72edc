#pragma once

#include "gaugecalc/gauge.hpp"
#include "gaugecalc/holonomy.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace gaugecalc {

/// t -> E(t), a curve of connections d + E(t) starting at the flat base (E(0) = 0).
class ConnectionCurve {
public:
    using Sampler = std::function<LieForm(double t)>;

    ConnectionCurve(TorusGrid grid, int rank, Sampler sampler, std::vector<double> sample_times = {});

    LieForm potential(double t) const;
    Connection connection(double t) const { return Connection(potential(t)); }

    const TorusGrid& grid() const { return grid_; }
    int rank() const { return rank_; }
    const std::vector<double>& sample_times() const { return times_; }

private:
    TorusGrid grid_;
    int rank_;
    Sampler sampler_;
    std::vector<double> times_;
};

/// E(t) = t E1 + t^2 E2 + O(t^3) and C_E = dE2 + E1^E1.
struct PerturbationJets {
    LieForm e1;
    LieForm e2;
    LieForm c_e;
};

inline constexpr double kDefaultJetStep = 1e-3;

/// Jets from E(t), ..., E(5t); exact on quintic curves. Rejects t outside [1e-6, 0.1].
PerturbationJets extract_jets(const ConnectionCurve& curve, double t_small = kDefaultJetStep);

struct YmCurveCheck {
    double nabla_e1 = 0.0;
    double delta_e1 = 0.0;
    double delta_c_e = 0.0;
    double nabla_c_e = 0.0;  // a 3-form on a surface, always zero
    double c_e = 0.0;
    double harmonic_projection_e1 = 0.0;
};

YmCurveCheck check_ym_curve(const PerturbationJets& jets, const Connection& base);

struct FlatCurveCheck {
    std::vector<double> t;
    std::vector<double> curvature_l2;
    bool flat = true;
    double c_e = 0.0;
    /// Only meaningful when flat; a non-flat curve carries no C_E claim.
    bool c_e_within_tol = true;
};

inline constexpr double kCeTol = 1e-6;

FlatCurveCheck check_flat_curve(const ConnectionCurve& curve, const std::vector<double>& sample_ts,
                                double tol = kCeTol, double flat_threshold = kFlatnessTol);

/// E(t) = potential of exp(t A1 + t^2 A2) applied to the zero connection.
ConnectionCurve gauge_orbit_curve(const LieForm& a1, const LieForm& a2);

struct Su2Potential {
    Connection connection;
    LieForm h1, h2, h3;  // d alpha = h1 w, ...
};

/// alpha (x) e1 + beta (x) e2 + gamma (x) e3 for real scalar 1-forms.
Su2Potential su2_potential(const LieForm& alpha, const LieForm& beta, const LieForm& gamma);

/// Scalar coefficient forms of a potential in the span of e1, e2, e3.
/// Rejects potentials with components outside that span.
std::vector<LieForm> su2_coefficients(const Connection& c);

struct Su2Conditions {
    double residual[3] = {0.0, 0.0, 0.0};          // |*dh_a + 2 (i_g(h_b w) - i_b(h_g w))|, derived sign
    double literal_residual[3] = {0.0, 0.0, 0.0};  // same with the opposite sign on the bracket term
    double wedge[3] = {0.0, 0.0, 0.0};             // |beta^gamma|, |gamma^alpha|, |alpha^beta|
    bool wedge_free = false;
    double general_discrepancy = 0.0;  // max |specialized + e_a-part of ym_residual|
    double h_mean[3] = {0.0, 0.0, 0.0};
    double h_min[3] = {0.0, 0.0, 0.0};
    double h_max[3] = {0.0, 0.0, 0.0};
};

inline constexpr double kWedgeFreeTol = 1e-10;

Su2Conditions su2_ym_conditions(const Connection& c);

enum class TorusFamily { seamed, smooth };

struct TorusRecord {
    double t = 0.0;
    double curvature_l2 = 0.0;
    double residual_l2 = 0.0;
    double covariant_residual_l2 = 0.0;
    double ym_value = 0.0;
    bool flat = false;
    double seam_fraction = 0.0;  // share of |K|^2 within two rows of the y-seam
    Su2Conditions su2;
};

struct EndpointHolonomy {
    double t = 0.0;
    int axis = 0;
    Mat matrix;
};

struct ClaimReport {
    TorusFamily family = TorusFamily::seamed;
    double lambda = 1.0;
    int grid = 0;
    int steps = 0;
    double seam_jump = 0.0;
    std::vector<TorusRecord> records;
    std::vector<EndpointHolonomy> holonomies;
    YmCurveCheck jets;
};

/// E_t = t alpha (x) (e1 + lambda (1 - t) e2), alpha = sin(pi x) dy + cos(pi y) dx
/// (seamed family: cos(pi y) dx + sin(pi x) dy) or pi dx (smooth substitute), on an N-grid.
ConnectionCurve torus_family_curve(TorusFamily family, double lambda, const TorusGrid& grid);

ClaimReport torus_family_report(TorusFamily family, double lambda, const std::vector<double>& ts, int grid_nodes = 32,
                                int steps = 1000);

std::string to_string(TorusFamily family);
nlohmann::json to_json(const YmCurveCheck& r);
nlohmann::json to_json(const Su2Conditions& r);
nlohmann::json to_json(const ClaimReport& r);

}  // namespace gaugecalc
