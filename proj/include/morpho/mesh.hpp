#pragma once

#include <array>
#include <functional>
#include <vector>

#include "morpho/tensor.hpp"

namespace morpho {

enum class FacetTag { Dirichlet, Neumann, Free };

/// P1 tetrahedral mesh with one barycentric quadrature point per tet.
/// Per-tet geometry (volume, shape gradients, centroid) is cached.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> tets;

    struct Facet {
        std::array<int, 3> v;
        FacetTag tag;
        int owner_tet;
        double area;
        Vec3 centroid;
        Vec3 normal;  // unit, outward
    };
    std::vector<Facet> boundary_facets;

    // cached per tet
    std::vector<double> volume;
    std::vector<Mat3> dinv;  // inverse edge matrix; row a = grad N_{a+1}
    std::vector<Vec3> centroid;

    std::vector<int> dirichlet_vertices;  // sorted, unique
    std::vector<char> is_dirichlet;       // per vertex
    std::vector<char> is_boundary;        // per vertex

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_tets() const { return static_cast<int>(tets.size()); }

    Vec3 grad_shape(int tet, int local) const {
        if (local == 0) return -(dinv[tet].row(0) + dinv[tet].row(1) + dinv[tet].row(2)).transpose();
        return dinv[tet].row(local - 1).transpose();
    }

    // Structured unit cube, Kuhn 6-tet subdivision of an n x n x n grid.
    // Gamma_D = face x1 = 0, Gamma_N = face x1 = 1, rest free.
    static Mesh unit_cube(int n);

    // Single reference tetrahedron (0, e1, e2, e3); face x1 = 0 Dirichlet.
    static Mesh single_tet();

    // Computes caches, extracts boundary facets, validates invariants.
    void finalize();
};

}  // namespace morpho
