#pragma once

#include <iosfwd>
#include <string>

#include "morpho/growth.hpp"

namespace morpho {

// Per-step diagnostics table. Columns:
//   i, t, energy, min_detG, max_absG, step_rate, min_mu, max_mu
// Values are printed with round-trip (%.17g) precision.
void emit_csv(const Trajectory& traj, std::ostream& os);
void emit_csv(const Trajectory& traj, const std::string& path);

// Legacy-ASCII unstructured-grid snapshot of step i: deformed vertex
// positions, tet connectivity, per-cell det G and full G, and the nodal
// nutrient field when present.
void emit_vtk(const Trajectory& traj, const Mesh& mesh, int step, std::ostream& os);
void emit_vtk(const Trajectory& traj, const Mesh& mesh, int step, const std::string& path);

}  // namespace morpho
