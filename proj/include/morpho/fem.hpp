#pragma once

#include <functional>
#include <vector>

#include "morpho/hyperelastic.hpp"
#include "morpho/mesh.hpp"

namespace morpho {

/// Nodal vector field; y = id on Gamma_D is maintained by the solver.
struct DeformationField {
    std::vector<Vec3> y;

    static DeformationField identity(const Mesh& mesh) {
        DeformationField d;
        d.y = mesh.vertices;
        return d;
    }
};

/// One growth tensor per quadrature point (per tet).
using GrowthField = std::vector<GrowthTensorPoint>;

GrowthField uniform_growth_field(const Mesh& mesh, const Mat3& g);

/// Generalized load: body force f(t, x) and traction g(t, x) on Gamma_N.
struct Load {
    std::function<Vec3(double, const Vec3&)> f;  // per unit reference volume
    std::function<Vec3(double, const Vec3&)> g;  // on Gamma_N

    static Load zero() {
        auto z = [](double, const Vec3&) { return Vec3::Zero().eval(); };
        return Load{z, z};
    }
};

/// Load evaluated at one time: per-tet body force at the quadrature point
/// and per-boundary-facet traction (zero outside Gamma_N unless a test
/// fills other facets explicitly).
struct LoadSample {
    std::vector<Vec3> f_at_tet;
    std::vector<Vec3> g_at_facet;

    static LoadSample zero(const Mesh& mesh);
    static LoadSample at_time(const Load& load, double t, const Mesh& mesh);

    double pairing(const DeformationField& y, const Mesh& mesh) const;  // <l, y>
};

// P1 gradient, constant per tet: F_t = [y1-y0 | y2-y0 | y3-y0] Dinv.
std::vector<Mat3> grad_at_qp(const DeformationField& y, const Mesh& mesh);

// Total energy sum_t vol W(grad y Ginv) det G - <l, y>; +inf if any
// quadrature point has det(grad y Ginv) <= 0.
double total_energy(const EnergyDensity& w, const DeformationField& y, const GrowthField& g,
                    const LoadSample& l, const Mesh& mesh);

// Nodal gradient of the total energy; rows at Gamma_D vertices are zero.
std::vector<Vec3> energy_gradient(const EnergyDensity& w, const DeformationField& y,
                                  const GrowthField& g, const LoadSample& l, const Mesh& mesh);

struct MinimizeOpts {
    double tol = tol::minimize_grad;  // times energy scale
    int max_iters = 2000;
    int memory = 8;
};

struct MinimizeResult {
    DeformationField y;
    double energy;
    double grad_norm;
    int iterations;
};

// Deterministic local minimizer: limited-memory quasi-Newton descent with
// Armijo backtracking against the +inf admissibility barrier. Dirichlet
// vertices are pinned to the identity.
MinimizeResult minimize_energy(const EnergyDensity& w, const GrowthField& g, const LoadSample& l,
                               const Mesh& mesh, const DeformationField& y_init,
                               const MinimizeOpts& opts = {});

}  // namespace morpho
