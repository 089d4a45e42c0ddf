#include "morpho/fem.hpp"

#include <cmath>
#include <deque>

#include "morpho/errors.hpp"

namespace morpho {

GrowthField uniform_growth_field(const Mesh& mesh, const Mat3& g) {
    return GrowthField(mesh.n_tets(), GrowthTensorPoint::from(g));
}

LoadSample LoadSample::zero(const Mesh& mesh) {
    LoadSample s;
    s.f_at_tet.assign(mesh.n_tets(), Vec3::Zero());
    s.g_at_facet.assign(mesh.boundary_facets.size(), Vec3::Zero());
    return s;
}

LoadSample LoadSample::at_time(const Load& load, double t, const Mesh& mesh) {
    LoadSample s = zero(mesh);
    for (int i = 0; i < mesh.n_tets(); ++i) s.f_at_tet[i] = load.f(t, mesh.centroid[i]);
    for (size_t i = 0; i < mesh.boundary_facets.size(); ++i)
        if (mesh.boundary_facets[i].tag == FacetTag::Neumann)
            s.g_at_facet[i] = load.g(t, mesh.boundary_facets[i].centroid);
    return s;
}

double LoadSample::pairing(const DeformationField& y, const Mesh& mesh) const {
    double acc = 0.0;
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const auto& tet = mesh.tets[t];
        const Vec3 ybar = (y.y[tet[0]] + y.y[tet[1]] + y.y[tet[2]] + y.y[tet[3]]) / 4.0;
        acc += mesh.volume[t] * f_at_tet[t].dot(ybar);
    }
    for (size_t i = 0; i < mesh.boundary_facets.size(); ++i) {
        const auto& fc = mesh.boundary_facets[i];
        if (g_at_facet[i].isZero()) continue;
        const Vec3 ybar = (y.y[fc.v[0]] + y.y[fc.v[1]] + y.y[fc.v[2]]) / 3.0;
        acc += fc.area * g_at_facet[i].dot(ybar);
    }
    return acc;
}

std::vector<Mat3> grad_at_qp(const DeformationField& y, const Mesh& mesh) {
    std::vector<Mat3> f(mesh.n_tets());
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const auto& tet = mesh.tets[t];
        Mat3 e;
        e.col(0) = y.y[tet[1]] - y.y[tet[0]];
        e.col(1) = y.y[tet[2]] - y.y[tet[0]];
        e.col(2) = y.y[tet[3]] - y.y[tet[0]];
        f[t] = e * mesh.dinv[t];
    }
    return f;
}

double total_energy(const EnergyDensity& w, const DeformationField& y, const GrowthField& g,
                    const LoadSample& l, const Mesh& mesh) {
    const auto grad = grad_at_qp(y, mesh);
    double acc = 0.0;
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const double wv = w.W(grad[t] * g[t].Ginv);
        if (!std::isfinite(wv)) return EnergyDensity::infinite;
        acc += mesh.volume[t] * wv * g[t].detG;
    }
    return acc - l.pairing(y, mesh);
}

std::vector<Vec3> energy_gradient(const EnergyDensity& w, const DeformationField& y,
                                  const GrowthField& g, const LoadSample& l, const Mesh& mesh) {
    const auto grad = grad_at_qp(y, mesh);
    std::vector<Vec3> out(mesh.n_vertices(), Vec3::Zero());
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const Mat3 p = piola_with_growth(w, grad[t], g[t]);
        const Mat3 nodal = mesh.volume[t] * p * mesh.dinv[t].transpose();  // columns: nodes 1..3
        const auto& tet = mesh.tets[t];
        out[tet[1]] += nodal.col(0);
        out[tet[2]] += nodal.col(1);
        out[tet[3]] += nodal.col(2);
        out[tet[0]] -= nodal.col(0) + nodal.col(1) + nodal.col(2);
        const Vec3 fq = mesh.volume[t] / 4.0 * l.f_at_tet[t];
        for (int a = 0; a < 4; ++a) out[tet[a]] -= fq;
    }
    for (size_t i = 0; i < mesh.boundary_facets.size(); ++i) {
        if (l.g_at_facet[i].isZero()) continue;
        const auto& fc = mesh.boundary_facets[i];
        const Vec3 gq = fc.area / 3.0 * l.g_at_facet[i];
        for (int a = 0; a < 3; ++a) out[fc.v[a]] -= gq;
    }
    for (int v : mesh.dirichlet_vertices) out[v].setZero();
    return out;
}

namespace {

double dot(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
    return s;
}

double norm(const std::vector<Vec3>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

MinimizeResult minimize_energy(const EnergyDensity& w, const GrowthField& g, const LoadSample& l,
                               const Mesh& mesh, const DeformationField& y_init,
                               const MinimizeOpts& opts) {
    DeformationField y = y_init;
    for (int v : mesh.dirichlet_vertices) y.y[v] = mesh.vertices[v];

    double e = total_energy(w, y, g, l, mesh);
    if (!std::isfinite(e)) throw SolverError("minimize_energy: inadmissible initial state");
    auto grad = energy_gradient(w, y, g, l, mesh);

    struct Pair {
        std::vector<Vec3> s, d;
        double rho;
    };
    std::deque<Pair> history;

    const int n = mesh.n_vertices();
    auto scale = [](double energy) { return std::max(1.0, std::abs(energy)); };

    int it = 0;
    for (; it < opts.max_iters; ++it) {
        const double gnorm = norm(grad);
        if (gnorm <= opts.tol * scale(e))
            return {y, e, gnorm, it};

        // two-loop recursion
        std::vector<Vec3> q = grad;
        std::vector<double> alpha(history.size());
        for (int k = static_cast<int>(history.size()) - 1; k >= 0; --k) {
            alpha[k] = history[k].rho * dot(history[k].s, q);
            for (int i = 0; i < n; ++i) q[i] -= alpha[k] * history[k].d[i];
        }
        double gamma = 1.0;
        if (!history.empty()) {
            const auto& last = history.back();
            gamma = dot(last.s, last.d) / dot(last.d, last.d);
        }
        for (int i = 0; i < n; ++i) q[i] *= gamma;
        for (size_t k = 0; k < history.size(); ++k) {
            const double beta = history[k].rho * dot(history[k].d, q);
            for (int i = 0; i < n; ++i) q[i] += (alpha[k] - beta) * history[k].s[i];
        }
        // descent direction
        std::vector<Vec3> dir(n);
        for (int i = 0; i < n; ++i) dir[i] = -q[i];
        double slope = dot(grad, dir);
        if (slope >= 0.0) {  // fall back to steepest descent
            for (int i = 0; i < n; ++i) dir[i] = -grad[i];
            slope = -gnorm * gnorm;
            history.clear();
        }

        // Armijo backtracking against the +inf barrier
        const double c1 = 1e-4;
        double step = 1.0;
        DeformationField trial = y;
        double e_trial = EnergyDensity::infinite;
        while (true) {
            for (int i = 0; i < n; ++i) trial.y[i] = y.y[i] + step * dir[i];
            e_trial = total_energy(w, trial, g, l, mesh);
            // the rounding slack keeps full steps acceptable once the energy
            // decrease falls below double-precision resolution of e
            const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(e);
            if (std::isfinite(e_trial) && e_trial <= e + c1 * step * slope + slack) break;
            step *= 0.5;
            if (step < tol::line_search_floor)
                throw LineSearchFailure("minimize_energy: no admissible step above floor");
        }

        auto grad_new = energy_gradient(w, trial, g, l, mesh);
        Pair pr;
        pr.s.resize(n);
        pr.d.resize(n);
        for (int i = 0; i < n; ++i) {
            pr.s[i] = trial.y[i] - y.y[i];
            pr.d[i] = grad_new[i] - grad[i];
        }
        const double sy = dot(pr.s, pr.d);
        if (sy > 1e-14 * norm(pr.s) * norm(pr.d)) {
            pr.rho = 1.0 / sy;
            history.push_back(std::move(pr));
            if (static_cast<int>(history.size()) > opts.memory) history.pop_front();
        }
        y = std::move(trial);
        e = e_trial;
        grad = std::move(grad_new);
    }
    throw MaxIterations("minimize_energy: iteration budget exhausted");
}

}  // namespace morpho
