#include "morpho/control.hpp"

#include <cmath>

#include "morpho/errors.hpp"

namespace morpho {

std::vector<std::vector<double>> control_average(const SpaceTimeField& mu, const TimeGrid& grid,
                                                 const Mesh& mesh) {
    std::vector<std::vector<double>> out(grid.N);
    for (int i = 1; i <= grid.N; ++i) {
        const double tm = (grid.t(i - 1) + grid.t(i)) / 2.0;
        out[i - 1].resize(mesh.n_tets());
        for (int q = 0; q < mesh.n_tets(); ++q) out[i - 1][q] = mu(tm, mesh.centroid[q]);
    }
    return out;
}

Trajectory solve_given_control(const SpaceTimeField& mu, const SimSetup& setup) {
    const double ts = tau_star(setup.rate.m_bound());
    if (!(setup.grid.tau() < ts))
        throw ConfigError("tau = " + std::to_string(setup.grid.tau()) +
                          " must be below tau* = (log 2)/||M|| = " + std::to_string(ts));

    const Mesh& mesh = setup.mesh;
    const double tau = setup.grid.tau();
    const Mollifier moll(setup.kernel, mesh);
    const auto kappa = sample_kappa(setup.kernel, setup.grid);
    const auto mu_steps = control_average(mu, setup.grid, mesh);

    Trajectory traj;
    traj.grid = setup.grid;

    SimState st = init_state(setup, moll);
    auto record = [&](const SimState& s) {
        traj.y.push_back(s.y.y);
        std::vector<Mat3> g(s.G.size());
        for (size_t q = 0; q < s.G.size(); ++q) g[q] = s.G[q].G;
        traj.G.push_back(std::move(g));
        traj.diag.push_back(s.diag);
    };
    record(st);
    traj.kgrad.emplace_back();

    for (int i = 1; i <= setup.grid.N; ++i) {
        const auto kconv = time_conv_step(st.mollified, kappa, tau, i);
        std::vector<Mat3> m_vals(st.G.size());
        for (size_t q = 0; q < st.G.size(); ++q)
            m_vals[q] = setup.rate.eval(st.G[q].G, kconv[q], mu_steps[i - 1][q]);

        SimState next;
        next.step = i;
        next.kconv_used = kconv;
        next.G = exp_update(st.G, m_vals, tau);

        const LoadSample li = LoadSample::at_time(setup.load, setup.grid.t(i), mesh);
        auto res = minimize_energy(setup.energy, next.G, li, mesh, st.y, setup.solver);
        next.y = std::move(res.y);
        next.mollified = st.mollified;
        next.mollified.push_back(moll.apply(grad_at_qp(next.y, mesh)));

        next.diag.energy = res.energy;
        next.diag.minimize_iters = res.iterations;
        next.diag.min_detG = next.G[0].detG;
        for (size_t q = 0; q < next.G.size(); ++q) {
            next.diag.min_detG = std::min(next.diag.min_detG, next.G[q].detG);
            next.diag.max_absG = std::max(next.diag.max_absG, frob(next.G[q].G));
            next.diag.step_rate = std::max(next.diag.step_rate, frob(next.G[q].G - st.G[q].G) / tau);
        }

        traj.kgrad.push_back(kconv);
        record(next);
        st = std::move(next);
    }
    return traj;
}

JBreakdown evaluate_J(const Trajectory& traj, const std::vector<std::vector<double>>& mu_steps,
                      const ObjectiveJ& obj, const Mesh& mesh) {
    JBreakdown j;
    const double tau = traj.grid.tau();
    const int N = traj.grid.N;

    for (int q = 0; q < mesh.n_tets(); ++q)
        j.volume_term += mesh.volume[q] * det(traj.G[N][q]);
    j.volume_term *= obj.beta1;

    for (int i = 1; i <= N; ++i) {
        const double ti = traj.grid.t(i);
        double track = 0.0, cost = 0.0;
        for (int q = 0; q < mesh.n_tets(); ++q) {
            const auto& tet = mesh.tets[q];
            const Vec3 ybar = (traj.y[i][tet[0]] + traj.y[i][tet[1]] + traj.y[i][tet[2]] +
                               traj.y[i][tet[3]]) / 4.0;
            const Vec3 diff = ybar - obj.y_target(ti, mesh.centroid[q]);
            track += mesh.volume[q] * std::pow(diff.norm(), obj.p);
            if (!mu_steps.empty())
                cost += mesh.volume[q] * std::pow(std::abs(mu_steps[i - 1][q]), obj.p);
        }
        j.tracking_term += tau * track;
        j.control_cost += tau * cost;
    }
    j.tracking_term *= obj.beta2;
    j.control_cost *= obj.beta3;
    return j;
}

ControlResult optimize_control(const ControlFamily& family, const ObjectiveJ& obj,
                               const SimSetup& setup, int max_evals) {
    const int dim = static_cast<int>(family.basis.size());
    if (dim == 0) throw ConfigError("optimize_control: empty basis");
    const int g = std::max(1, family.grid_points);

    long total = 1;
    for (int k = 0; k < dim; ++k) total *= g;

    ControlResult result;
    int best = -1;

    for (long idx = 0; idx < total; ++idx) {
        if (static_cast<int>(result.evaluated.size()) >= max_evals) {
            result.budget_exhausted = true;
            break;
        }
        std::vector<double> c(dim);
        long rem = idx;
        for (int k = dim - 1; k >= 0; --k) {
            const int step = static_cast<int>(rem % g);
            rem /= g;
            c[k] = g == 1 ? family.lo[k]
                          : family.lo[k] + step * (family.hi[k] - family.lo[k]) / (g - 1);
        }
        const auto mu = family.control(c);
        const auto traj = solve_given_control(mu, setup);
        const auto mu_steps = control_average(mu, setup.grid, setup.mesh);
        const auto j = evaluate_J(traj, mu_steps, obj, setup.mesh);
        result.evaluated.push_back({c, j});
        if (best < 0 || j.total() < result.evaluated[best].j.total())
            best = static_cast<int>(result.evaluated.size()) - 1;
    }

    result.c = result.evaluated[best].c;
    result.j = result.evaluated[best].j;
    result.trajectory = solve_given_control(family.control(result.c), setup);
    return result;
}

SpaceTimeField basis_field(const std::string& id, const TimeGrid& grid) {
    if (id == "const") return [](double, const Vec3&) { return 1.0; };
    if (id == "time") {
        const double T = grid.T;
        return [T](double t, const Vec3&) { return t / T; };
    }
    if (id == "x1") return [](double, const Vec3& x) { return x.x(); };
    if (id == "x2") return [](double, const Vec3& x) { return x.y(); };
    if (id == "x3") return [](double, const Vec3& x) { return x.z(); };
    throw ConfigError("unknown control basis id '" + id + "'");
}

}  // namespace morpho
