#include "gaugecalc/algebra.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <limits>
#include <stdexcept>
#include <string>

namespace gaugecalc {

namespace {

void require_same_rank(const Mat& a, const Mat& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw std::invalid_argument(std::string(op) + ": matrix sizes differ (" +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()) + ")");
    }
}

}  // namespace

Mat zero_matrix(int m) { return Mat::Zero(m, m); }

Mat identity_matrix(int m) { return Mat::Identity(m, m); }

double max_abs(const Mat& a) {
    double out = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) out = std::max(out, std::abs(a(i, j)));
    return out;
}

double anti_hermitian_defect(const Mat& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    Mat sum = a + a.adjoint();
    return max_abs(sum);
}

bool is_anti_hermitian(const Mat& a, double tol) { return anti_hermitian_defect(a) <= tol; }

AlgebraElement::AlgebraElement(Mat entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() > kMaxRank || entries_.rows() != entries_.cols())
        throw std::invalid_argument("AlgebraElement: expected a square matrix of rank 1.." +
                                    std::to_string(kMaxRank));
    double defect = anti_hermitian_defect(entries_);
    if (defect > kAntiHermitianTol)
        throw std::invalid_argument("AlgebraElement: matrix is not anti-Hermitian (|A + A^H| = " +
                                    std::to_string(defect) + ")");
}

AlgebraElement AlgebraElement::zero(int m) { return AlgebraElement(zero_matrix(m)); }

Mat bracket(const Mat& a, const Mat& b) {
    require_same_rank(a, b, "bracket");
    Mat out = a * b;
    out.noalias() -= b * a;
    return out;
}

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
    return AlgebraElement(bracket(a.matrix(), b.matrix()));
}

double inner(const Mat& a, const Mat& b) {
    require_same_rank(a, b, "inner");
    // Re tr(A B^H) = sum_ij Re(a_ij conj(b_ij))
    double out = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out += a(i, j).real() * b(i, j).real() + a(i, j).imag() * b(i, j).imag();
    return out;
}

double inner(const AlgebraElement& a, const AlgebraElement& b) { return inner(a.matrix(), b.matrix()); }

Mat mat_exp(const Mat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("mat_exp: matrix is not square");
    Eigen::MatrixXcd dense = a;
    Eigen::MatrixXcd result = dense.exp();
    return result;
}

double unitarity_defect(const Mat& u) {
    Mat d = u.adjoint() * u - identity_matrix(static_cast<int>(u.rows()));
    return max_abs(d);
}

namespace pauli {

Mat sigma(int a) {
    const cplx i(0.0, 1.0);
    Mat s = zero_matrix(2);
    switch (a) {
        case 1: s << 0.0, 1.0, 1.0, 0.0; break;
        case 2: s << 0.0, -i, i, 0.0; break;
        case 3: s << 1.0, 0.0, 0.0, -1.0; break;
        default: throw std::invalid_argument("pauli::sigma: index must be 1, 2 or 3");
    }
    return s;
}

AlgebraElement e(int a) { return AlgebraElement(cplx(0.0, 1.0) * sigma(a)); }

int levi_civita(int a, int b, int c) {
    if (a == b || b == c || a == c) return 0;
    // even permutations of (1,2,3)
    if ((a == 1 && b == 2) || (a == 2 && b == 3) || (a == 3 && b == 1)) return 1;
    return -1;
}

double structure_constant(int a, int b, int c) { return -2.0 * levi_civita(a, b, c); }

std::array<double, 3> coordinates(const Mat& x) {
    if (x.rows() != 2 || x.cols() != 2) throw std::invalid_argument("pauli::coordinates: expected 2x2");
    std::array<double, 3> out{};
    for (int a = 1; a <= 3; ++a) out[a - 1] = inner(x, e(a).matrix()) / 2.0;
    return out;
}

}  // namespace pauli

}  // namespace gaugecalc
