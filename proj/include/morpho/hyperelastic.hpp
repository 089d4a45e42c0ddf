#pragma once

#include <cmath>
#include <limits>

#include "morpho/constants.hpp"
#include "morpho/errors.hpp"
#include "morpho/tensor.hpp"

namespace morpho {

/// Polyconvex stored-energy density
///   W(F) = a |F|^p + b (det F)^{-s}   for det F > 0,  +inf otherwise.
/// Coercive with c1 = min(a, 1); Mandel tensor controlled with
/// c2 = max(p, sqrt(3) s).
struct EnergyDensity {
    double p = 4.0;  // growth exponent, > 3
    double a = 1.0;  // bulk stiffness
    double b = 1.0;  // compression barrier
    double s = 1.0;  // barrier exponent, > 0

    double c1() const { return std::min(a, 1.0); }
    double c2() const { return std::max(p, std::sqrt(3.0) * s); }

    static constexpr double infinite = std::numeric_limits<double>::infinity();

    // Extended-real value; +inf signals an inadmissible elastic strain.
    double W(const Mat3& f) const {
        const double d = det(f);
        if (!(d > 0.0)) return infinite;
        return a * std::pow(frob(f), p) + b * std::pow(d, -s);
    }

    // Analytic derivative: p a |F|^{p-2} F - s b (det F)^{-s} F^{-T}.
    Mat3 DW(const Mat3& f) const {
        const double d = det(f);
        if (!(d > 0.0)) throw SolverError("DW: degenerate F (det F <= 0)");
        const double nf = frob(f);
        const Mat3 finvT = cofactor(f) / d;  // = F^{-T}
        return p * a * std::pow(nf, p - 2.0) * f - s * b * std::pow(d, -s) * finvT;
    }

    // Mandel tensor F^T DW(F); norm bounded by c2 (W(F) + 1).
    Mat3 mandel(const Mat3& f) const { return f.transpose() * DW(f); }
};

/// Growth tensor value at a quadrature point, with cached inverse and
/// determinant. det G > 0 required.
struct GrowthTensorPoint {
    Mat3 G = Mat3::Identity();
    Mat3 Ginv = Mat3::Identity();
    double detG = 1.0;

    static GrowthTensorPoint from(const Mat3& g) {
        const double d = det(g);
        if (!(d > 0.0)) throw InvariantViolation("growth tensor with det G <= 0");
        GrowthTensorPoint p;
        p.G = g;
        p.detG = d;
        p.Ginv = cofactor(g).transpose() / d;
        return p;
    }
};

// det G * DW(F G^{-1}) G^{-T}. Throws on a degenerate elastic strain.
inline Mat3 piola_with_growth(const EnergyDensity& w, const Mat3& f, const GrowthTensorPoint& gp) {
    const Mat3 fe = f * gp.Ginv;
    if (!(det(fe) > 0.0)) throw SolverError("piola_with_growth: det(F G^{-1}) <= 0");
    return gp.detG * w.DW(fe) * gp.Ginv.transpose();
}

}  // namespace morpho
