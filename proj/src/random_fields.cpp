#include "gaugecalc/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace gaugecalc {

Mat random_matrix(Rng& rng, int m) {
    Mat a(m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) a(i, j) = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    return a;
}

Mat random_algebra(Rng& rng, int m) {
    Mat a = random_matrix(rng, m);
    return 0.5 * (a - a.adjoint());
}

namespace {

struct Mode {
    int kx, ky;
    Mat cos_coeff, sin_coeff;
};

std::vector<Mode> draw_modes(int max_mode, const std::function<Mat()>& coeff) {
    std::vector<Mode> modes;
    for (int kx = -max_mode; kx <= max_mode; ++kx)
        for (int ky = -max_mode; ky <= max_mode; ++ky) {
            Mat c = coeff();
            Mat s = coeff();
            modes.push_back({kx, ky, c, s});
        }
    return modes;
}

LieForm sample_modes(int degree, const TorusGrid& grid, int m, const std::vector<std::vector<Mode>>& comps,
                     double amplitude) {
    LieForm out(degree, grid, m, ValueClass::general);
    const double two_pi = 2.0 * std::numbers::pi;
    // keeps pointwise magnitudes of order `amplitude` regardless of the mode count
    const double scale = amplitude / std::sqrt(static_cast<double>(comps.front().size()));
    for (int c = 0; c < out.component_count(); ++c)
        for (int j = 0; j < grid.n(); ++j)
            for (int l = 0; l < grid.n(); ++l) {
                Mat v = zero_matrix(m);
                for (const auto& mode : comps[c]) {
                    const double phase = two_pi * (mode.kx * grid.x(j) + mode.ky * grid.y(l));
                    v += std::cos(phase) * mode.cos_coeff + std::sin(phase) * mode.sin_coeff;
                }
                out.at(c, j, l) = scale * v;
            }
    return out;
}

}  // namespace

LieForm random_smooth_form(Rng& rng, int degree, const TorusGrid& grid, int m, ValueClass value_class,
                           int max_mode, double amplitude) {
    std::vector<std::vector<Mode>> comps;
    for (int c = 0; c < components_for_degree(degree); ++c)
        comps.push_back(draw_modes(max_mode, [&] {
            return value_class == ValueClass::antihermitian ? random_algebra(rng, m) : random_matrix(rng, m);
        }));
    LieForm out = sample_modes(degree, grid, m, comps, amplitude);
    return value_class == ValueClass::antihermitian ? out.as_antihermitian() : out;
}

LieForm random_scalar_form(Rng& rng, int degree, const TorusGrid& grid, int max_mode, double amplitude) {
    std::vector<std::vector<Mode>> comps;
    for (int c = 0; c < components_for_degree(degree); ++c)
        comps.push_back(draw_modes(max_mode, [&] {
            Mat a(1, 1);
            a(0, 0) = rng.uniform(-1.0, 1.0);
            return a;
        }));
    return sample_modes(degree, grid, 1, comps, amplitude);
}

}  // namespace gaugecalc
