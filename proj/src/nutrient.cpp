#include "morpho/nutrient.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cmath>

#include "morpho/errors.hpp"

namespace morpho {

std::vector<Vec3> kappa_conv_y(const std::vector<std::vector<Vec3>>& y_history,
                               const std::vector<double>& kappa_samples, double tau, int i) {
    if (i < 1 || static_cast<int>(y_history.size()) < i)
        throw SolverError("kappa_conv_y: history must hold steps 0..i-1");
    const size_t n = y_history[0].size();
    std::vector<Vec3> out(n, Vec3::Zero());
    for (int j = 0; j < i; ++j) {
        const double w = tau * kappa_samples[j];
        const auto& yj = y_history[i - 1 - j];
        for (size_t v = 0; v < n; ++v) out[v] += w * yj[v];
    }
    return out;
}

NutrientSolver::NutrientSolver(const Mesh& mesh, double nu, double tau) : mesh_(mesh) {
    const int nv = mesh.n_vertices();
    free_of_node_.assign(nv, -1);
    for (int v = 0; v < nv; ++v)
        if (!mesh.is_boundary[v]) {
            free_of_node_[v] = static_cast<int>(node_of_free_.size());
            node_of_free_.push_back(v);
        }

    mlump_.assign(nv, 0.0);
    std::vector<Eigen::Triplet<double>> tff, tfb;
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const auto& tet = mesh.tets[t];
        const double vol = mesh.volume[t];
        Vec3 gn[4];
        for (int a = 0; a < 4; ++a) {
            gn[a] = mesh.grad_shape(t, a);
            mlump_[tet[a]] += vol / 4.0;
        }
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const double k = nu * tau * vol * gn[a].dot(gn[b]);
                const int ia = free_of_node_[tet[a]];
                if (ia < 0) continue;
                const int ib = free_of_node_[tet[b]];
                if (ib >= 0)
                    tff.emplace_back(ia, ib, k);
                else
                    tfb.emplace_back(ia, tet[b], k);
            }
    }
    const int nf = static_cast<int>(node_of_free_.size());
    for (int i = 0; i < nf; ++i) tff.emplace_back(i, i, mlump_[node_of_free_[i]]);
    a_ff_.resize(nf, nf);
    a_ff_.setFromTriplets(tff.begin(), tff.end());
    a_fb_.resize(nf, mesh.n_vertices());
    a_fb_.setFromTriplets(tfb.begin(), tfb.end());
}

std::vector<double> NutrientSolver::step(const std::vector<double>& mu_prev,
                                         const std::vector<double>& F,
                                         const std::vector<double>& mu_bc) const {
    const int nv = mesh_.n_vertices();
    std::vector<double> mu(nv);
    for (int v = 0; v < nv; ++v)
        if (mesh_.is_boundary[v]) mu[v] = mu_bc[v];

    const int nf = static_cast<int>(node_of_free_.size());
    if (nf == 0) return mu;

    Eigen::VectorXd bc = Eigen::VectorXd::Zero(nv);
    for (int v = 0; v < nv; ++v)
        if (mesh_.is_boundary[v]) bc[v] = mu_bc[v];

    Eigen::VectorXd rhs(nf), guess(nf);
    for (int i = 0; i < nf; ++i) {
        const int v = node_of_free_[i];
        rhs[i] = mlump_[v] * F[v];
        guess[i] = mu_prev[v];
    }
    rhs -= a_fb_ * bc;

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(tol::cg_rel);
    cg.compute(a_ff_);
    Eigen::VectorXd x = cg.solveWithGuess(rhs, guess);

    const double rnorm = (a_ff_ * x - rhs).norm();
    const double scale = std::max(rhs.norm(), 1e-300);
    if (rnorm > tol::cg_residual_check * scale && rnorm > 1e-14)
        throw SolverError("nutrient_step: CG residual too large (ill-conditioned mesh?)");

    for (int i = 0; i < nf; ++i) mu[node_of_free_[i]] = x[i];
    return mu;
}

std::vector<double> nutrient_step(const std::vector<double>& mu_prev, const std::vector<double>& F,
                                  const std::vector<double>& mu_bc, double nu, double tau,
                                  const Mesh& mesh) {
    return NutrientSolver(mesh, nu, tau).step(mu_prev, F, mu_bc);
}

Trajectory run_coupled(const SimSetup& setup, const NutrientProblem& nutrient, MuOrder order) {
    const double ts = tau_star(setup.rate.m_bound());
    if (!(setup.grid.tau() < ts))
        throw ConfigError("tau = " + std::to_string(setup.grid.tau()) +
                          " must be below tau* = (log 2)/||M|| = " + std::to_string(ts));
    if (!(nutrient.nu > 0.0)) throw ConfigError("nutrient.nu must be positive");

    const Mesh& mesh = setup.mesh;
    const double tau = setup.grid.tau();
    const Mollifier moll(setup.kernel, mesh);
    const auto kappa = sample_kappa(setup.kernel, setup.grid);
    const NutrientSolver solver(mesh, nutrient.nu, tau);

    Trajectory traj;
    traj.grid = setup.grid;

    SimState st = init_state(setup, moll);
    std::vector<double> mu(mesh.n_vertices());
    for (int v = 0; v < mesh.n_vertices(); ++v) mu[v] = nutrient.mu0(mesh.vertices[v]);

    auto mu_at_qp = [&](const std::vector<double>& m, int t) {
        const auto& tet = mesh.tets[t];
        return 0.25 * (m[tet[0]] + m[tet[1]] + m[tet[2]] + m[tet[3]]);
    };
    auto mu_range = [](const std::vector<double>& m, StepDiagnostics& d) {
        d.min_mu = d.max_mu = m.empty() ? 0.0 : m[0];
        for (double x : m) {
            d.min_mu = std::min(d.min_mu, x);
            d.max_mu = std::max(d.max_mu, x);
        }
    };

    auto record = [&](const SimState& s, const std::vector<double>& m) {
        traj.y.push_back(s.y.y);
        std::vector<Mat3> g(s.G.size());
        for (size_t q = 0; q < s.G.size(); ++q) g[q] = s.G[q].G;
        traj.G.push_back(std::move(g));
        StepDiagnostics d = s.diag;
        mu_range(m, d);
        traj.diag.push_back(d);
        traj.mu.push_back(m);
    };
    record(st, mu);
    traj.kgrad.emplace_back();
    const double delta = [&] {
        double d = st.G[0].detG;
        for (const auto& gp : st.G) d = std::min(d, gp.detG);
        return d;
    }();
    std::vector<std::vector<Vec3>> y_history{st.y.y};

    for (int i = 1; i <= setup.grid.N; ++i) {
        const auto kconv = time_conv_step(st.mollified, kappa, tau, i);

        // nutrient right-hand side uses the y-history up to i-1 in both orders
        auto solve_mu = [&](const std::vector<double>& mu_prev) {
            const auto ky = kappa_conv_y(y_history, kappa, tau, i);
            const double tm = (setup.grid.t(i - 1) + setup.grid.t(i)) / 2.0;
            std::vector<double> F(mesh.n_vertices()), bc(mesh.n_vertices());
            for (int v = 0; v < mesh.n_vertices(); ++v) {
                F[v] = tau * nutrient.h(tm, mesh.vertices[v]) - tau * nutrient.H_fun(ky[v]) +
                       mu_prev[v];
                bc[v] = nutrient.mu_D(tm, mesh.vertices[v]);
            }
            return solver.step(mu_prev, F, bc);
        };

        std::vector<double> mu_next;
        const std::vector<double>* mu_for_rate = &mu;
        if (order == MuOrder::current) {
            mu_next = solve_mu(mu);
            mu_for_rate = &mu_next;
        }

        std::vector<Mat3> m_vals(st.G.size());
        for (size_t q = 0; q < st.G.size(); ++q)
            m_vals[q] = setup.rate.eval(st.G[q].G, kconv[q],
                                        mu_at_qp(*mu_for_rate, static_cast<int>(q)));

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

        if (order == MuOrder::previous) mu_next = solve_mu(mu);

        if (setup.check_invariants) {
            const double bound = std::exp(-3.0 * tau * i * setup.rate.m_bound()) * delta;
            for (size_t q = 0; q < next.G.size(); ++q) {
                const double expected = std::exp(tau * trace(m_vals[q])) * st.G[q].detG;
                if (std::abs(next.G[q].detG - expected) > tol::det_update_rel * st.G[q].detG)
                    throw InvariantViolation("coupled: per-step determinant identity violated");
                if (next.G[q].detG < bound * (1.0 - 1e-12))
                    throw InvariantViolation("coupled: determinant lower bound violated");
            }
        }

        traj.kgrad.push_back(kconv);
        record(next, mu_next);
        y_history.push_back(next.y.y);
        mu = std::move(mu_next);
        st = std::move(next);
    }
    return traj;
}

}  // namespace morpho
