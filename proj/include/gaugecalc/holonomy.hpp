#pragma once

#include "gaugecalc/gauge.hpp"

#include <json.hpp>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace gaugecalc {

/// Torus paths use (x, y) = (Re, Im) of the point, read modulo 1.
enum class PathDomain { torus, plane };

struct ParametricPath {
    PathDomain domain = PathDomain::torus;
    std::function<cplx(double)> position;
    std::function<cplx(double)> velocity;
    bool closed = false;
    int winding_x = 0;  // torus
    int winding_y = 0;
    int winding = 0;  // plane, around the circle's center
    std::string description;

    cplx start() const { return position(0.0); }
    cplx end() const { return position(1.0); }
};

inline constexpr double kClosureTol = 1e-12;

/// Closed loop x(t) = base + t (wx, wy) on the torus.
ParametricPath torus_loop(int winding_x, int winding_y, cplx base = 0.0);
/// Generator loop along axis 0 (x) or 1 (y) wound n times.
ParametricPath torus_generator(int axis, int winding = 1, cplx base = 0.0);
/// center + radius e^{2 pi i n t}.
ParametricPath circle(cplx center, double radius, int winding = 1, PathDomain domain = PathDomain::plane);
ParametricPath segment(cplx from, cplx to, PathDomain domain = PathDomain::plane);
/// First runs through `first` on [0, 1/2], then `second`. Requires first.end() == second.start().
ParametricPath concatenate(const ParametricPath& first, const ParametricPath& second);
ParametricPath reversed(const ParametricPath& path);

/// Throws if a path flagged closed does not return to its start (mod 1 on the torus).
void validate_path(const ParametricPath& path);

/// Source of the matrix A(x') along a path, for dv/dt + A(x'(t)) v = 0.
class Potential {
public:
    virtual ~Potential() = default;
    virtual int rank() const = 0;
    virtual PathDomain domain() const = 0;
    /// A evaluated at `point` on the tangent vector `velocity`.
    virtual Mat along(cplx point, cplx velocity) const = 0;
};

/// Potential P dx + Q dy on the torus, either closed-form or bilinearly
/// interpolated from a grid connection.
class TorusPotential : public Potential {
public:
    using Coefficient = std::function<Mat(double x, double y)>;

    TorusPotential(int rank, Coefficient p, Coefficient q);
    static TorusPotential from_connection(const Connection& c);
    static TorusPotential zero(int rank);

    int rank() const override { return rank_; }
    PathDomain domain() const override { return PathDomain::torus; }
    Mat along(cplx point, cplx velocity) const override;

    Mat p(double x, double y) const { return p_(x, y); }
    Mat q(double x, double y) const { return q_(x, y); }

    /// G P G^-1 - (d_x G) G^-1 and likewise for Q, derivatives of the closed-form
    /// G by a fourth-order stencil. G must be periodic and unitary.
    TorusPotential gauge_transformed(const Coefficient& g) const;

private:
    int rank_;
    Coefficient p_;
    Coefficient q_;
};

struct Pole {
    cplx location;
    int order = 1;
};

inline constexpr double kPoleMargin = 1e-6;

/// Coefficient(z) dz on the punctured plane.
class MeromorphicPotential : public Potential {
public:
    using Coefficient = std::function<Mat(cplx z)>;

    MeromorphicPotential(int rank, Coefficient coefficient, std::vector<Pole> poles);
    /// (-k / z) dz, rank 1.
    static MeromorphicPotential aharonov_bohm(cplx k);
    /// diag(-k_1, ..., -k_m) / z dz.
    static MeromorphicPotential diagonal_pole(const std::vector<cplx>& k);

    int rank() const override { return rank_; }
    PathDomain domain() const override { return PathDomain::plane; }
    Mat along(cplx point, cplx velocity) const override;

    const std::vector<Pole>& poles() const { return poles_; }
    bool has_higher_order_poles() const;
    Mat coefficient(cplx z) const;

private:
    int rank_;
    Coefficient coefficient_;
    std::vector<Pole> poles_;
};

inline constexpr int kMinSteps = 100;

/// Fundamental solution g with v(1) = g v(0) for dv/dt + A(x') v = 0, by
/// classical RK4. Rejects steps < 100, pole proximity and non-finite samples.
Mat parallel_transport(const Potential& potential, const ParametricPath& path, int steps);

/// g(t_i) at t_i = i / steps, i = 0..steps.
std::vector<Mat> transport_trajectory(const Potential& potential, const ParametricPath& path, int steps);

struct WilsonLoop {
    Mat holonomy;
    cplx trace;
};

WilsonLoop wilson_loop(const Potential& potential, const ParametricPath& path, int steps);
WilsonLoop wilson_loop(const Connection& c, const ParametricPath& path, int steps);

struct AharonovBohmRecord {
    cplx k;
    int winding = 0;
    int steps = 0;
    cplx monodromy;
    cplx expected;  // e^{2 pi i k n}
    double error = 0.0;
    cplx flux;  // Phi with k = -Phi / 2 pi
};

/// Default steps: 1000 |n|.
AharonovBohmRecord aharonov_bohm_monodromy(cplx k, int winding, int steps = 0);

struct WongTrajectory {
    std::vector<double> t;
    std::vector<Mat> spin;
    double max_norm_drift = 0.0;    // |<I,I> - <I0,I0>|
    double max_ad_mismatch = 0.0;   // |I(t) - g I0 g^-1|
};

/// dI/dt + [A(x'), I] = 0 by RK4, with the Ad-consistency cross-check against
/// parallel_transport. I0 must be anti-Hermitian.
WongTrajectory wong_evolve(const Potential& potential, const ParametricPath& path, const Mat& spin0, int steps);

/// exp(i pi Lambda sigma_3).
Mat aharonov_casher_phase(double lambda);
/// -(Lambda / 2) sigma_3 / z dz; its unit-circle transport is the phase above.
MeromorphicPotential aharonov_casher_potential(double lambda);

struct MonodromyRecord {
    std::vector<Mat> matrices;
    int pairs_checked = 0;
    double max_homomorphism_defect = 0.0;  // |T(a then b) - T(b) T(a)|
    bool higher_order_poles = false;
};

/// Transport per closed generator loop; every pair of loops sharing a base
/// point is also checked for T(a then b) = T(b) T(a).
MonodromyRecord monodromy_representation(const MeromorphicPotential& potential,
                                         const std::vector<ParametricPath>& loops, int steps);

nlohmann::json matrix_to_json(const Mat& m);
nlohmann::json to_json(const AharonovBohmRecord& r);
nlohmann::json to_json(const MonodromyRecord& r);

}  // namespace gaugecalc
