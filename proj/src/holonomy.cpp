#include "gaugecalc/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gaugecalc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
const cplx I(0.0, 1.0);

double wrap_unit(double v) { return v - std::floor(v); }

double closure_gap(PathDomain domain, cplx a, cplx b) {
    cplx d = b - a;
    if (domain == PathDomain::plane) return std::abs(d);
    const double dx = d.real() - std::round(d.real());
    const double dy = d.imag() - std::round(d.imag());
    return std::hypot(dx, dy);
}

void check_finite(const Mat& m, cplx point) {
    if (!m.allFinite()) {
        std::ostringstream os;
        os << "potential sample is not finite at (" << point.real() << ", " << point.imag() << ")";
        throw std::domain_error(os.str());
    }
}

}  // namespace

ParametricPath torus_loop(int winding_x, int winding_y, cplx base) {
    const cplx step(winding_x, winding_y);
    ParametricPath p;
    p.domain = PathDomain::torus;
    p.position = [base, step](double t) { return base + t * step; };
    p.velocity = [step](double) { return step; };
    p.closed = true;
    p.winding_x = winding_x;
    p.winding_y = winding_y;
    p.description = "torus-loop(" + std::to_string(winding_x) + "," + std::to_string(winding_y) + ")";
    return p;
}

ParametricPath torus_generator(int axis, int winding, cplx base) {
    if (axis != 0 && axis != 1) throw std::invalid_argument("torus_generator: axis must be 0 or 1");
    return axis == 0 ? torus_loop(winding, 0, base) : torus_loop(0, winding, base);
}

ParametricPath circle(cplx center, double radius, int winding, PathDomain domain) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle: radius must be positive");
    ParametricPath p;
    p.domain = domain;
    const double w = two_pi * winding;
    p.position = [=](double t) { return center + radius * std::exp(I * (w * t)); };
    p.velocity = [=](double t) { return radius * I * w * std::exp(I * (w * t)); };
    p.closed = true;
    if (domain == PathDomain::plane) p.winding = winding;
    p.description = "circle(r=" + std::to_string(radius) + ",n=" + std::to_string(winding) + ")";
    return p;
}

ParametricPath segment(cplx from, cplx to, PathDomain domain) {
    ParametricPath p;
    p.domain = domain;
    p.position = [from, to](double t) { return from + t * (to - from); };
    p.velocity = [from, to](double) { return to - from; };
    p.closed = closure_gap(domain, from, to) <= kClosureTol;
    p.description = "segment";
    return p;
}

ParametricPath concatenate(const ParametricPath& first, const ParametricPath& second) {
    if (first.domain != second.domain) throw std::invalid_argument("concatenate: paths live on different domains");
    if (closure_gap(first.domain, first.end(), second.start()) > kClosureTol)
        throw std::invalid_argument("concatenate: first path does not end where the second starts");
    ParametricPath p;
    p.domain = first.domain;
    auto a = first, b = second;
    p.position = [a, b](double t) { return t <= 0.5 ? a.position(2 * t) : b.position(2 * t - 1); };
    p.velocity = [a, b](double t) { return t < 0.5 ? 2.0 * a.velocity(2 * t) : 2.0 * b.velocity(2 * t - 1); };
    p.closed = closure_gap(p.domain, first.start(), second.end()) <= kClosureTol;
    p.winding_x = first.winding_x + second.winding_x;
    p.winding_y = first.winding_y + second.winding_y;
    p.winding = first.winding + second.winding;
    p.description = first.description + "*" + second.description;
    return p;
}

ParametricPath reversed(const ParametricPath& path) {
    ParametricPath p = path;
    auto src = path;
    p.position = [src](double t) { return src.position(1 - t); };
    p.velocity = [src](double t) { return -src.velocity(1 - t); };
    p.winding_x = -path.winding_x;
    p.winding_y = -path.winding_y;
    p.winding = -path.winding;
    p.description = "reverse(" + path.description + ")";
    return p;
}

void validate_path(const ParametricPath& path) {
    if (!path.position || !path.velocity) throw std::invalid_argument("path: missing position or velocity");
    if (path.closed && closure_gap(path.domain, path.start(), path.end()) > kClosureTol)
        throw std::invalid_argument("path: flagged closed but does not return to its start");
}

TorusPotential::TorusPotential(int rank, Coefficient p, Coefficient q)
    : rank_(rank), p_(std::move(p)), q_(std::move(q)) {
    if (rank < 1 || rank > kMaxRank) throw std::invalid_argument("TorusPotential: rank out of range");
}

TorusPotential TorusPotential::zero(int rank) {
    auto z = [rank](double, double) { return zero_matrix(rank); };
    return TorusPotential(rank, z, z);
}

TorusPotential TorusPotential::from_connection(const Connection& c) {
    auto pot = std::make_shared<const LieForm>(c.potential());
    auto interp = [pot](int comp) {
        return [pot, comp](double x, double y) {
            const int n = pot->grid().n();
            const double u = wrap_unit(x) * n, v = wrap_unit(y) * n;
            const int j = static_cast<int>(std::floor(u)), l = static_cast<int>(std::floor(v));
            const double fx = u - j, fy = v - l;
            return Mat((1 - fx) * (1 - fy) * pot->at(comp, j, l) + fx * (1 - fy) * pot->at(comp, j + 1, l) +
                       (1 - fx) * fy * pot->at(comp, j, l + 1) + fx * fy * pot->at(comp, j + 1, l + 1));
        };
    };
    return TorusPotential(c.rank(), interp(0), interp(1));
}

Mat TorusPotential::along(cplx point, cplx velocity) const {
    const double x = wrap_unit(point.real()), y = wrap_unit(point.imag());
    Mat a = p_(x, y) * velocity.real() + q_(x, y) * velocity.imag();
    check_finite(a, point);
    return a;
}

TorusPotential TorusPotential::gauge_transformed(const Coefficient& g) const {
    constexpr double delta = 1e-3;
    auto deriv = [g](double x, double y, int axis) {
        auto at = [&](double s) { return axis == 0 ? g(x + s, y) : g(x, y + s); };
        return Mat((-at(2 * delta) + 8.0 * at(delta) - 8.0 * at(-delta) + at(-2 * delta)) / (12 * delta));
    };
    auto p = p_, q = q_;
    auto pp = [g, p, deriv](double x, double y) {
        Mat gi = g(x, y).adjoint();
        return Mat(g(x, y) * p(x, y) * gi - deriv(x, y, 0) * gi);
    };
    auto qq = [g, q, deriv](double x, double y) {
        Mat gi = g(x, y).adjoint();
        return Mat(g(x, y) * q(x, y) * gi - deriv(x, y, 1) * gi);
    };
    return TorusPotential(rank_, pp, qq);
}

MeromorphicPotential::MeromorphicPotential(int rank, Coefficient coefficient, std::vector<Pole> poles)
    : rank_(rank), coefficient_(std::move(coefficient)), poles_(std::move(poles)) {
    if (rank < 1 || rank > kMaxRank) throw std::invalid_argument("MeromorphicPotential: rank out of range");
    for (const auto& p : poles_)
        if (p.order < 1) throw std::invalid_argument("MeromorphicPotential: pole order must be positive");
}

MeromorphicPotential MeromorphicPotential::aharonov_bohm(cplx k) {
    return MeromorphicPotential(1, [k](cplx z) { return Mat::Constant(1, 1, -k / z); }, {{0.0, 1}});
}

MeromorphicPotential MeromorphicPotential::diagonal_pole(const std::vector<cplx>& k) {
    const int m = static_cast<int>(k.size());
    return MeromorphicPotential(
        m,
        [k, m](cplx z) {
            Mat a = zero_matrix(m);
            for (int i = 0; i < m; ++i) a(i, i) = -k[i] / z;
            return a;
        },
        {{0.0, 1}});
}

bool MeromorphicPotential::has_higher_order_poles() const {
    return std::any_of(poles_.begin(), poles_.end(), [](const Pole& p) { return p.order > 1; });
}

Mat MeromorphicPotential::coefficient(cplx z) const {
    const Pole* nearest = nullptr;
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& p : poles_) {
        const double d = std::abs(z - p.location);
        if (d < dist) dist = d, nearest = &p;
    }
    if (nearest && dist <= kPoleMargin) {
        std::ostringstream os;
        os << "path passes within " << dist << " of the pole at (" << nearest->location.real() << ", "
           << nearest->location.imag() << ")";
        throw std::domain_error(os.str());
    }
    Mat a = coefficient_(z);
    if (a.rows() != rank_ || a.cols() != rank_) throw std::invalid_argument("MeromorphicPotential: coefficient has wrong size");
    check_finite(a, z);
    return a;
}

Mat MeromorphicPotential::along(cplx point, cplx velocity) const { return coefficient(point) * velocity; }

namespace {

void check_transport_args(const Potential& potential, const ParametricPath& path, int steps) {
    if (steps < kMinSteps) throw std::invalid_argument("parallel_transport: steps must be at least 100");
    if (potential.domain() != path.domain) throw std::invalid_argument("parallel_transport: path and potential domains differ");
    validate_path(path);
}

// RK4 for y' = f(A(t), y), with A sampled at t, t + dt/2 and t + dt.
// Endpoint samples are one-sided (inside the step) so that concatenated paths,
// whose velocity jumps at the joint, keep full order when the joint is a step boundary.
template <class F>
std::vector<Mat> integrate(const Potential& potential, const ParametricPath& path, int steps, Mat y, F f) {
    constexpr double inside = 1e-13;
    std::vector<Mat> out;
    out.reserve(steps + 1);
    out.push_back(y);
    const double dt = 1.0 / steps;
    auto sample = [&](double t) { return potential.along(path.position(t), path.velocity(t)); };
    for (int i = 0; i < steps; ++i) {
        const double t = i * dt;
        const Mat a0 = sample(t + inside);
        const Mat am = sample(t + 0.5 * dt);
        const Mat a1 = sample((i + 1) * dt - inside);
        const Mat k1 = f(a0, y);
        const Mat k2 = f(am, Mat(y + 0.5 * dt * k1));
        const Mat k3 = f(am, Mat(y + 0.5 * dt * k2));
        const Mat k4 = f(a1, Mat(y + dt * k3));
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push_back(y);
    }
    return out;
}

}  // namespace

std::vector<Mat> transport_trajectory(const Potential& potential, const ParametricPath& path, int steps) {
    check_transport_args(potential, path, steps);
    return integrate(potential, path, steps, identity_matrix(potential.rank()),
                     [](const Mat& a, const Mat& g) { return Mat(-a * g); });
}

Mat parallel_transport(const Potential& potential, const ParametricPath& path, int steps) {
    return transport_trajectory(potential, path, steps).back();
}

WilsonLoop wilson_loop(const Potential& potential, const ParametricPath& path, int steps) {
    if (!path.closed) throw std::invalid_argument("wilson_loop: path is not closed");
    Mat g = parallel_transport(potential, path, steps);
    return {g, g.trace()};
}

WilsonLoop wilson_loop(const Connection& c, const ParametricPath& path, int steps) {
    return wilson_loop(TorusPotential::from_connection(c), path, steps);
}

AharonovBohmRecord aharonov_bohm_monodromy(cplx k, int winding, int steps) {
    AharonovBohmRecord r;
    r.k = k;
    r.winding = winding;
    r.steps = steps > 0 ? steps : std::max(kMinSteps, 1000 * std::abs(winding));
    r.monodromy = parallel_transport(MeromorphicPotential::aharonov_bohm(k), circle(0.0, 1.0, winding), r.steps)(0, 0);
    r.expected = std::exp(two_pi * I * k * static_cast<double>(winding));
    r.error = std::abs(r.monodromy - r.expected);
    r.flux = -two_pi * k;
    return r;
}

WongTrajectory wong_evolve(const Potential& potential, const ParametricPath& path, const Mat& spin0, int steps) {
    check_transport_args(potential, path, steps);
    if (spin0.rows() != potential.rank() || spin0.cols() != potential.rank())
        throw std::invalid_argument("wong_evolve: spin has wrong size");
    if (!is_anti_hermitian(spin0)) throw std::invalid_argument("wong_evolve: spin must be anti-Hermitian");
    WongTrajectory w;
    w.spin = integrate(potential, path, steps, spin0,
                       [](const Mat& a, const Mat& s) { return Mat(-(a * s - s * a)); });
    const auto g = transport_trajectory(potential, path, steps);
    const double n0 = inner(spin0, spin0);
    for (int i = 0; i <= steps; ++i) {
        w.t.push_back(static_cast<double>(i) / steps);
        w.max_norm_drift = std::max(w.max_norm_drift, std::abs(inner(w.spin[i], w.spin[i]) - n0));
        const Mat ad = g[i] * spin0 * g[i].inverse();
        w.max_ad_mismatch = std::max(w.max_ad_mismatch, max_abs(Mat(w.spin[i] - ad)));
    }
    return w;
}

Mat aharonov_casher_phase(double lambda) {
    return mat_exp(Mat(I * std::numbers::pi * lambda * pauli::sigma(3)));
}

MeromorphicPotential aharonov_casher_potential(double lambda) {
    const Mat m = -0.5 * lambda * pauli::sigma(3);
    return MeromorphicPotential(2, [m](cplx z) { return Mat(m / z); }, {{0.0, 1}});
}

MonodromyRecord monodromy_representation(const MeromorphicPotential& potential,
                                         const std::vector<ParametricPath>& loops, int steps) {
    MonodromyRecord r;
    r.higher_order_poles = potential.has_higher_order_poles();
    for (const auto& loop : loops) {
        if (!loop.closed) throw std::invalid_argument("monodromy_representation: generator loop is not closed");
        r.matrices.push_back(parallel_transport(potential, loop, steps));
    }
    for (std::size_t a = 0; a < loops.size(); ++a)
        for (std::size_t b = 0; b < loops.size(); ++b) {
            if (std::abs(loops[a].end() - loops[b].start()) > kClosureTol) continue;
            const Mat both = parallel_transport(potential, concatenate(loops[a], loops[b]), 2 * steps);
            r.max_homomorphism_defect =
                std::max(r.max_homomorphism_defect, max_abs(Mat(both - r.matrices[b] * r.matrices[a])));
            ++r.pairs_checked;
        }
    return r;
}

nlohmann::json matrix_to_json(const Mat& m) {
    auto rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

namespace {
nlohmann::json complex_json(cplx z) { return {z.real(), z.imag()}; }
}  // namespace

nlohmann::json to_json(const AharonovBohmRecord& r) {
    return {{"k", complex_json(r.k)},
            {"winding", r.winding},
            {"steps", r.steps},
            {"monodromy", complex_json(r.monodromy)},
            {"expected", complex_json(r.expected)},
            {"error", r.error},
            {"flux", complex_json(r.flux)}};
}

nlohmann::json to_json(const MonodromyRecord& r) {
    auto mats = nlohmann::json::array();
    for (const auto& m : r.matrices) mats.push_back(matrix_to_json(m));
    return {{"matrices", mats},
            {"pairs_checked", r.pairs_checked},
            {"max_homomorphism_defect", r.max_homomorphism_defect},
            {"higher_order_poles", r.higher_order_poles}};
}

}  // namespace gaugecalc
