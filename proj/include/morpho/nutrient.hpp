#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "morpho/growth.hpp"

namespace morpho {

/// Implicit-Euler reaction-diffusion problem for the nutrient field, with
/// full-boundary Dirichlet data and a growth-consumption source.
struct NutrientProblem {
    double nu = 0.1;  // diffusivity, > 0
    std::function<double(double, const Vec3&)> h =
        [](double, const Vec3&) { return 0.0; };  // source h(t, x)
    std::function<double(double, const Vec3&)> mu_D =
        [](double, const Vec3&) { return 0.0; };  // Dirichlet data
    std::function<double(const Vec3&)> mu0 =
        [](const Vec3&) { return 0.0; };  // initial field

    // Consumption H(v) = h_c / (1 + |v - x_c|^2): bounded, Lipschitz.
    double h_c = 0.0;
    Vec3 x_c = Vec3(0.5, 0.5, 0.5);
    double H_fun(const Vec3& v) const { return h_c / (1.0 + (v - x_c).squaredNorm()); }
};

// (kappa *_tau y)_{i-1} = sum_{j=0}^{i-1} tau kappa_j y_{i-1-j}, nodal.
std::vector<Vec3> kappa_conv_y(const std::vector<std::vector<Vec3>>& y_history,
                               const std::vector<double>& kappa_samples, double tau, int i);

/// P1 elliptic solver for (mass + nu tau stiffness) mu = mass F with
/// boundary rows replaced by Dirichlet values. Lumped mass; CG with
/// diagonal preconditioning on the reduced SPD system.
class NutrientSolver {
public:
    NutrientSolver(const Mesh& mesh, double nu, double tau);

    // F and mu_bc are nodal; mu_prev is the warm start.
    std::vector<double> step(const std::vector<double>& mu_prev, const std::vector<double>& F,
                             const std::vector<double>& mu_bc) const;

private:
    const Mesh& mesh_;
    std::vector<int> free_of_node_;  // -1 for boundary nodes
    std::vector<int> node_of_free_;
    Eigen::SparseMatrix<double> a_ff_, a_fb_;
    std::vector<double> mlump_;
};

// Convenience one-shot form.
std::vector<double> nutrient_step(const std::vector<double>& mu_prev, const std::vector<double>& F,
                                  const std::vector<double>& mu_bc, double nu, double tau,
                                  const Mesh& mesh);

// Which nutrient sample feeds the growth update.
enum class MuOrder {
    previous,  // G_i uses mu_{i-1}
    current,   // G_i uses mu_i
};

// Coupled scheme: growth update (with mu), equilibrium solve, then the
// implicit nutrient step.
Trajectory run_coupled(const SimSetup& setup, const NutrientProblem& nutrient,
                       MuOrder order = MuOrder::previous);

}  // namespace morpho
