#include "morpho/mesh.hpp"

#include <algorithm>
#include <map>

#include "morpho/errors.hpp"

namespace morpho {

namespace {

// The six axis-permutation paths from a cell's low corner to its high corner.
constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                             {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

int perm_sign(const int* p) {
    int inv = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (p[i] > p[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

}  // namespace

Mesh Mesh::unit_cube(int n) {
    Mesh m;
    const int nv = n + 1;
    auto vid = [nv](int i, int j, int k) { return i + nv * (j + nv * k); };
    m.vertices.reserve(nv * nv * nv);
    for (int k = 0; k < nv; ++k)
        for (int j = 0; j < nv; ++j)
            for (int i = 0; i < nv; ++i)
                m.vertices.emplace_back(double(i) / n, double(j) / n, double(k) / n);

    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                for (const auto& p : perms) {
                    int c[3] = {i, j, k};
                    std::array<int, 4> t;
                    t[0] = vid(c[0], c[1], c[2]);
                    for (int step = 0; step < 3; ++step) {
                        ++c[p[step]];
                        t[step + 1] = vid(c[0], c[1], c[2]);
                    }
                    if (perm_sign(p) < 0) std::swap(t[2], t[3]);
                    m.tets.push_back(t);
                }
    m.finalize();
    return m;
}

Mesh Mesh::single_tet() {
    Mesh m;
    m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    m.tets = {{0, 1, 2, 3}};
    m.finalize();
    return m;
}

void Mesh::finalize() {
    const int nt = n_tets();
    volume.assign(nt, 0.0);
    dinv.assign(nt, Mat3::Zero());
    centroid.assign(nt, Vec3::Zero());

    for (int t = 0; t < nt; ++t) {
        const auto& tet = tets[t];
        const Vec3& p0 = vertices[tet[0]];
        Mat3 d;
        d.col(0) = vertices[tet[1]] - p0;
        d.col(1) = vertices[tet[2]] - p0;
        d.col(2) = vertices[tet[3]] - p0;
        const double vol6 = det(d);
        if (!(vol6 > 0.0)) throw InvariantViolation("mesh: tet with non-positive volume");
        volume[t] = vol6 / 6.0;
        dinv[t] = d.inverse();
        centroid[t] = (vertices[tet[0]] + vertices[tet[1]] + vertices[tet[2]] + vertices[tet[3]]) / 4.0;
    }

    // Boundary facets: tet faces that appear exactly once.
    // Faces listed so that the opposite vertex is recorded for orientation.
    static const int face_of[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
    std::map<std::array<int, 3>, std::pair<int, std::array<int, 4>>> faces;  // sorted -> (count, (v0,v1,v2,opp))
    for (int t = 0; t < nt; ++t)
        for (int f = 0; f < 4; ++f) {
            std::array<int, 3> tri = {tets[t][face_of[f][0]], tets[t][face_of[f][1]], tets[t][face_of[f][2]]};
            std::array<int, 3> key = tri;
            std::sort(key.begin(), key.end());
            auto it = faces.find(key);
            if (it == faces.end())
                faces[key] = {1, {tri[0], tri[1], tri[2], t * 4 + f}};
            else
                ++it->second.first;
        }

    boundary_facets.clear();
    const double eps = 1e-12;
    for (const auto& [key, entry] : faces) {
        if (entry.first != 1) continue;
        Facet fc;
        fc.v = {entry.second[0], entry.second[1], entry.second[2]};
        fc.owner_tet = entry.second[3] / 4;
        const int opp_local = entry.second[3] % 4;
        const Vec3& a = vertices[fc.v[0]];
        const Vec3& b = vertices[fc.v[1]];
        const Vec3& c = vertices[fc.v[2]];
        Vec3 nrm = (b - a).cross(c - a);
        fc.area = 0.5 * nrm.norm();
        fc.centroid = (a + b + c) / 3.0;
        const Vec3& opp = vertices[tets[fc.owner_tet][opp_local]];
        if (nrm.dot(a - opp) < 0.0) nrm = -nrm;
        fc.normal = nrm.normalized();

        bool all_x0 = true, all_x1 = true;
        for (int v : fc.v) {
            if (std::abs(vertices[v].x()) > eps) all_x0 = false;
            if (std::abs(vertices[v].x() - 1.0) > eps) all_x1 = false;
        }
        fc.tag = all_x0 ? FacetTag::Dirichlet : (all_x1 ? FacetTag::Neumann : FacetTag::Free);
        boundary_facets.push_back(fc);
    }

    is_dirichlet.assign(n_vertices(), 0);
    is_boundary.assign(n_vertices(), 0);
    dirichlet_vertices.clear();
    for (const auto& fc : boundary_facets)
        for (int v : fc.v) {
            is_boundary[v] = 1;
            if (fc.tag == FacetTag::Dirichlet && !is_dirichlet[v]) {
                is_dirichlet[v] = 1;
                dirichlet_vertices.push_back(v);
            }
        }
    std::sort(dirichlet_vertices.begin(), dirichlet_vertices.end());

    if (dirichlet_vertices.empty())
        throw InvariantViolation("mesh: Dirichlet facet set is empty");
}

}  // namespace morpho
