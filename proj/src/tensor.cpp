#include "morpho/tensor.hpp"

#include <cmath>

namespace morpho {

double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
         - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
         + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

Mat3 cofactor(const Mat3& a) {
    Mat3 c;
    c(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    c(0, 1) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
    c(0, 2) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
    c(1, 0) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
    c(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
    c(1, 2) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
    c(2, 0) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
    c(2, 1) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
    c(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    return c;
}

namespace {

// Pade(13,13) coefficients and the usual scaling threshold.
constexpr double pade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr double theta13 = 5.371920351148152;

Mat3 exp_pade13(const Mat3& a) {
    const double* b = pade13;
    const Mat3 id = Mat3::Identity();
    const Mat3 a2 = a * a;
    const Mat3 a4 = a2 * a2;
    const Mat3 a6 = a4 * a2;
    const Mat3 u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2)
                        + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Mat3 v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2)
                   + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return (v - u).fullPivLu().solve(v + u);
}

}  // namespace

Mat3 mat_exp(const Mat3& a) {
    const double na = frob(a);
    if (na == 0.0) return Mat3::Identity();  // keeps a zero rate bit-exact
    int s = 0;
    Mat3 scaled = a;
    if (na > theta13) {
        s = static_cast<int>(std::ceil(std::log2(na / theta13)));
        scaled = a * std::ldexp(1.0, -s);
    }
    Mat3 r = exp_pade13(scaled);
    for (int k = 0; k < s; ++k) r = r * r;
    return r;
}

namespace {
// 8-point Gauss-Legendre on [-1, 1].
constexpr double gauss8_x[] = {-0.9602898564975363, -0.7966664774136267,
                               -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
constexpr double gauss8_w[] = {0.1012285362903763, 0.2223810344533745,
                               0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
}  // namespace

Mat3 mat_exp_dderiv(const Mat3& a, const Mat3& e, double tau) {
    Mat3 acc = Mat3::Zero();
    for (int k = 0; k < 8; ++k) {
        const double s = 0.5 * (gauss8_x[k] + 1.0);
        const double w = 0.5 * gauss8_w[k];
        acc += w * (mat_exp((1.0 - s) * tau * a) * e * mat_exp(s * tau * a));
    }
    return tau * acc;
}

double Tensor3::norm() const {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

Tensor3 Tensor3::partial_transpose() const {
    Tensor3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r(i, j, k) = (*this)(j, i, k);
    return r;
}

Tensor3 Tensor3::contract_right(const Mat3& b) const {
    Tensor3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = 0.0;
                for (int l = 0; l < 3; ++l) s += (*this)(i, j, l) * b(l, k);
                r(i, j, k) = s;
            }
    return r;
}

Tensor3 Tensor3::contract_left(const Mat3& b) const {
    Tensor3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = 0.0;
                for (int l = 0; l < 3; ++l) s += b(i, l) * (*this)(l, j, k);
                r(i, j, k) = s;
            }
    return r;
}

}  // namespace morpho
