#pragma once

#include <functional>
#include <string>
#include <vector>

#include "morpho/growth.hpp"

namespace morpho {

using SpaceTimeField = std::function<double(double, const Vec3&)>;

/// Finite-dimensional admissible control set: coefficient box over fixed
/// space-time basis fields, mu_c = sum_k c_k b_k.
struct ControlFamily {
    std::vector<SpaceTimeField> basis;
    std::vector<double> lo, hi;
    int grid_points = 3;  // per coefficient, exhaustive search

    SpaceTimeField control(std::vector<double> c) const {
        auto b = basis;
        return [b, c = std::move(c)](double t, const Vec3& x) {
            double s = 0.0;
            for (size_t k = 0; k < b.size(); ++k) s += c[k] * b[k](t, x);
            return s;
        };
    }
};

/// J = beta1 int det G(T) + beta2 int int |y - y_target|^p
///   + beta3 int int |mu|^p.
struct ObjectiveJ {
    double beta1 = 1.0, beta2 = 0.0, beta3 = 0.0;
    std::function<Vec3(double, const Vec3&)> y_target =
        [](double, const Vec3& x) { return x; };
    double p = 4.0;  // exponent shared with the energy density
};

// Interval averages of mu over each time step, sampled per quadrature point
// (midpoint rule, exact for affine-in-time controls). Entry i-1 holds mu_i.
std::vector<std::vector<double>> control_average(const SpaceTimeField& mu, const TimeGrid& grid,
                                                 const Mesh& mesh);

// Forward solve with a prescribed nutrient history; the growth update of
// step i consumes mu_i (the current interval average).
Trajectory solve_given_control(const SpaceTimeField& mu, const SimSetup& setup);

struct JBreakdown {
    double volume_term = 0.0;
    double tracking_term = 0.0;
    double control_cost = 0.0;
    double total() const { return volume_term + tracking_term + control_cost; }
};

JBreakdown evaluate_J(const Trajectory& traj, const std::vector<std::vector<double>>& mu_steps,
                      const ObjectiveJ& obj, const Mesh& mesh);

struct ControlCandidate {
    std::vector<double> c;
    JBreakdown j;
};

struct ControlResult {
    std::vector<double> c;
    JBreakdown j;
    Trajectory trajectory;
    std::vector<ControlCandidate> evaluated;  // in deterministic candidate order
    bool budget_exhausted = false;
};

// Exhaustive search over the tensor grid of coefficients (grid_points per
// dimension), stopping at max_evals; J* equals the minimum over everything
// evaluated, ties broken by candidate order.
ControlResult optimize_control(const ControlFamily& family, const ObjectiveJ& obj,
                               const SimSetup& setup, int max_evals = 1000);

// Built-in basis fields addressable from run configurations.
SpaceTimeField basis_field(const std::string& id, const TimeGrid& grid);

}  // namespace morpho
