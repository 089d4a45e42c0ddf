#pragma once

// All numeric tolerances used across the library, collected in one place.

namespace morpho::tol {

// tensor_core
inline constexpr double mat_exp_series     = 1e-12;  // vs truncated-series reference, scaled by 1+e^{|A|}
inline constexpr double det_exp_trace      = 1e-12;  // relative, det(exp A) vs e^{tr A}
inline constexpr double exp_inverse        = 1e-10;  // entrywise, exp(A)exp(-A) vs Id
inline constexpr double exp_dderiv_fd      = 1e-5;   // relative, vs central differences

// hyperelastic
inline constexpr double dw_fd              = 1e-6;   // relative, DW vs central differences
inline constexpr double frame_indiff       = 1e-12;  // relative, W(RF) vs W(F)
inline constexpr double ginv_check         = 1e-10;  // entrywise, Ginv*G vs Id

// fem
inline constexpr double energy_grad_fd     = 1e-5;   // relative, assembled gradient vs differences
inline constexpr double minimize_grad      = 1e-8;   // projected-gradient stop, times energy scale
inline constexpr double line_search_floor  = 1e-16;  // smallest admissible step

// growth
inline constexpr double det_update_rel     = 1e-10;  // per-step determinant identity
inline constexpr double uniform_growth_rel = 1e-8;   // closed-form det G for constant rate

// nutrient
inline constexpr double cg_rel             = 1e-12;  // CG stopping tolerance
inline constexpr double cg_residual_check  = 1e-10;  // accepted relative residual after solve

}  // namespace morpho::tol
