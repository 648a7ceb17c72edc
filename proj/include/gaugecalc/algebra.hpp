#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace gaugecalc {

using cplx = std::complex<double>;

// Small complex matrices live on the stack; ranks above 4 are out of scope.
inline constexpr int kMaxRank = 4;
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxRank, kMaxRank>;

inline constexpr double kAntiHermitianTol = 1e-12;

Mat zero_matrix(int m);
Mat identity_matrix(int m);

/// Largest |A + A^H| entry; zero for exactly anti-Hermitian input.
double anti_hermitian_defect(const Mat& a);
bool is_anti_hermitian(const Mat& a, double tol = kAntiHermitianTol);

/// Element of u(m). Construction rejects matrices that are not anti-Hermitian
/// within kAntiHermitianTol per entry; nothing is projected.
class AlgebraElement {
public:
    explicit AlgebraElement(Mat entries);
    static AlgebraElement zero(int m);

    int rank() const { return static_cast<int>(entries_.rows()); }
    const Mat& matrix() const { return entries_; }

private:
    Mat entries_;
};

/// AB - BA. Throws std::invalid_argument on a size mismatch.
Mat bracket(const Mat& a, const Mat& b);
AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b);

/// Re tr(A B^H). Gives <e_a, e_b> = 2 delta_ab on the Pauli basis.
double inner(const Mat& a, const Mat& b);
double inner(const AlgebraElement& a, const AlgebraElement& b);

Mat mat_exp(const Mat& a);
inline Mat mat_exp(const AlgebraElement& a) { return mat_exp(a.matrix()); }

/// Largest entry of |U^H U - I|.
double unitarity_defect(const Mat& u);

double max_abs(const Mat& a);

namespace pauli {

/// sigma_a for a in {1,2,3}.
Mat sigma(int a);

/// e_a = i sigma_a, anti-Hermitian and traceless.
AlgebraElement e(int a);

int levi_civita(int a, int b, int c);

/// C^c_ab with [e_a, e_b] = C^c_ab e_c, i.e. -2 eps_abc.
double structure_constant(int a, int b, int c);

/// Coordinates x_a of X = sum_a x_a e_a for X in su(2).
std::array<double, 3> coordinates(const Mat& x);

}  // namespace pauli

}  // namespace gaugecalc
