#pragma once

#include <Eigen/Dense>
#include <array>

namespace morpho {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

// Determinant by cofactor expansion along the first row.
double det(const Mat3& a);

// cof(A), satisfying cof(A) = det(A) A^{-T} for invertible A.
Mat3 cofactor(const Mat3& a);

inline double frob(const Mat3& a) { return a.norm(); }
inline double trace(const Mat3& a) { return a.trace(); }

// Matrix exponential, scaling-and-squaring with a Pade(13,13) kernel.
Mat3 mat_exp(const Mat3& a);

// Directional derivative of X -> exp(tau X) at A in direction E,
//   tau * int_0^1 exp((1-s) tau A) E exp(s tau A) ds,
// evaluated with 8-point Gauss quadrature.
Mat3 mat_exp_dderiv(const Mat3& a, const Mat3& e, double tau);

// 3x3x3 tensor with partial transposition and one-slot contractions
// against a 2-tensor.
struct Tensor3 {
    std::array<double, 27> v{};

    double& operator()(int i, int j, int k) { return v[9 * i + 3 * j + k]; }
    double operator()(int i, int j, int k) const { return v[9 * i + 3 * j + k]; }

    double norm() const;

    // (C^t)_{ijk} = C_{jik}
    Tensor3 partial_transpose() const;

    // (CB)_{ijk} = C_{ijl} B_{lk}
    Tensor3 contract_right(const Mat3& b) const;

    // (BC)_{ijk} = B_{il} C_{ljk}
    Tensor3 contract_left(const Mat3& b) const;
};

}  // namespace morpho
