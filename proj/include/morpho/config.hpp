#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "morpho/control.hpp"
#include "morpho/nutrient.hpp"

namespace morpho {

/// Run configuration, parsed from flat "key = value" text with dotted
/// sections. Unknown keys and constraint violations are reported with the
/// offending key or constraint named.
struct RunConfig {
    int mesh_n = 4;

    double energy_a = 1.0, energy_b = 1.0, energy_s = 1.0, energy_p = 4.0;

    double alpha0 = 0.05, alpha1 = 0.1, alpha2 = 0.0, alpha3 = 0.0;
    double rho = 0.5, r_phi = 0.35, t_rel = 0.5;
    double g0 = 1.0;  // initial growth tensor g0 * Id

    Vec3 load_f = Vec3::Zero();
    Vec3 load_g = Vec3::Zero();
    std::string load_profile = "constant";  // or "ramp" (linear in t/T)

    double time_T = 1.0;
    int time_N = 32;

    double solver_tol = 1e-8;
    int solver_max_iters = 2000;

    double nutrient_nu = 0.1;
    double nutrient_h = 0.0;
    double nutrient_hc = 0.0;
    Vec3 nutrient_xc = Vec3(0.5, 0.5, 0.5);
    double nutrient_mu_d = 0.0;
    double nutrient_mu0 = 0.0;

    std::vector<std::string> control_basis = {"const"};
    std::vector<double> control_lo = {0.0};
    std::vector<double> control_hi = {1.0};
    int control_grid = 3;
    int control_budget = 100;

    double beta1 = 1.0, beta2 = 0.0, beta3 = 0.0;
    std::string objective_target = "id";  // or "scale <factor>"

    std::uint64_t seed = 0;

    SimSetup to_setup() const;
    NutrientProblem to_nutrient() const;
    ControlFamily to_family() const;
    ObjectiveJ to_objective() const;

    // Coupled-mode-only constraints (nutrient.nu > 0).
    void validate_coupled() const;

    void dump(std::ostream& os) const;
};

// Parses and validates; throws ConfigError carrying the full issue list.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace morpho
