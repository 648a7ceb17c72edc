#pragma once

#include "gaugecalc/grid_forms.hpp"

#include <cstdint>
#include <random>

namespace gaugecalc {

/// Seeded generator whose draws do not depend on the standard library's
/// distribution implementations, so reports are reproducible across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

/// Anti-Hermitian m x m matrix with entries of order one.
Mat random_algebra(Rng& rng, int m);

Mat random_matrix(Rng& rng, int m);

/// Trigonometric polynomial form with wavenumbers |k| <= max_mode in each
/// direction and random coefficients scaled by amplitude.
LieForm random_smooth_form(Rng& rng, int degree, const TorusGrid& grid, int m,
                           ValueClass value_class = ValueClass::antihermitian, int max_mode = 1,
                           double amplitude = 1.0);

/// Real scalar (rank-1) smooth form.
LieForm random_scalar_form(Rng& rng, int degree, const TorusGrid& grid, int max_mode = 1,
                           double amplitude = 1.0);

}  // namespace gaugecalc
