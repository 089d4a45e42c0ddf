#include "morpho/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "morpho/errors.hpp"

namespace morpho {

namespace {

std::string g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open output file '" + path + "'");
    return f;
}

}  // namespace

void emit_csv(const Trajectory& traj, std::ostream& os) {
    os << "i,t,energy,min_detG,max_absG,step_rate,min_mu,max_mu\n";
    for (size_t i = 0; i < traj.diag.size(); ++i) {
        const auto& d = traj.diag[i];
        os << i << ',' << g17(traj.grid.t(static_cast<int>(i))) << ',' << g17(d.energy) << ','
           << g17(d.min_detG) << ',' << g17(d.max_absG) << ',' << g17(d.step_rate) << ','
           << g17(d.min_mu) << ',' << g17(d.max_mu) << '\n';
    }
}

void emit_csv(const Trajectory& traj, const std::string& path) {
    auto f = open_out(path);
    emit_csv(traj, f);
}

void emit_vtk(const Trajectory& traj, const Mesh& mesh, int step, std::ostream& os) {
    if (step < 0 || step >= static_cast<int>(traj.y.size()))
        throw ConfigError("emit_vtk: step out of range");
    const auto& y = traj.y[step];
    const auto& G = traj.G[step];

    os << "# vtk DataFile Version 3.0\n";
    os << "morphoelastic state, step " << step << "\n";
    os << "ASCII\n";
    os << "DATASET UNSTRUCTURED_GRID\n";

    os << "POINTS " << mesh.n_vertices() << " double\n";
    for (const auto& v : y) os << g17(v[0]) << ' ' << g17(v[1]) << ' ' << g17(v[2]) << '\n';

    os << "CELLS " << mesh.n_tets() << ' ' << 5 * mesh.n_tets() << '\n';
    for (const auto& t : mesh.tets)
        os << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
    os << "CELL_TYPES " << mesh.n_tets() << '\n';
    for (int t = 0; t < mesh.n_tets(); ++t) os << "10\n";

    os << "CELL_DATA " << mesh.n_tets() << '\n';
    os << "SCALARS detG double 1\nLOOKUP_TABLE default\n";
    for (const auto& g : G) os << g17(det(g)) << '\n';
    os << "FIELD growth 1\nG 9 " << mesh.n_tets() << " double\n";
    for (const auto& g : G) {
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) os << g17(g(r, c)) << (r == 2 && c == 2 ? '\n' : ' ');
    }

    if (traj.has_mu()) {
        os << "POINT_DATA " << mesh.n_vertices() << '\n';
        os << "SCALARS nutrient double 1\nLOOKUP_TABLE default\n";
        for (double m : traj.mu[step]) os << g17(m) << '\n';
    }
}

void emit_vtk(const Trajectory& traj, const Mesh& mesh, int step, const std::string& path) {
    auto f = open_out(path);
    emit_vtk(traj, mesh, step, f);
}

}  // namespace morpho
