#include "morpho/growth.hpp"

#include <cmath>
#include <iostream>

#include "morpho/errors.hpp"

namespace morpho {

std::vector<Mat3> spatial_mollify(const std::vector<Mat3>& field, const ConvolutionKernel& kernel,
                                  const Mesh& mesh) {
    std::vector<Mat3> out(mesh.n_tets());
    for (int q = 0; q < mesh.n_tets(); ++q)
        out[q] = spatial_mollify_at(mesh.centroid[q], field, kernel, mesh);
    return out;
}

Mat3 spatial_mollify_at(const Vec3& x, const std::vector<Mat3>& field,
                        const ConvolutionKernel& kernel, const Mesh& mesh) {
    Mat3 acc = Mat3::Zero();
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const double w = kernel.phi(x - mesh.centroid[t]);
        if (w != 0.0) acc += mesh.volume[t] * w * field[t];
    }
    return acc;
}

Mollifier::Mollifier(const ConvolutionKernel& kernel, const Mesh& mesh) : n_qp_(mesh.n_tets()) {
    weights_.resize(n_qp_);
    for (int q = 0; q < n_qp_; ++q)
        for (int t = 0; t < mesh.n_tets(); ++t) {
            const double w = kernel.phi(mesh.centroid[q] - mesh.centroid[t]);
            if (w != 0.0) weights_[q].emplace_back(t, mesh.volume[t] * w);
        }
}

std::vector<Mat3> Mollifier::apply(const std::vector<Mat3>& field) const {
    std::vector<Mat3> out(n_qp_, Mat3::Zero());
    for (int q = 0; q < n_qp_; ++q)
        for (const auto& [t, w] : weights_[q]) out[q] += w * field[t];
    return out;
}

std::vector<Mat3> time_conv_step(const std::vector<std::vector<Mat3>>& history,
                                 const std::vector<double>& kappa_samples, double tau, int i) {
    if (i < 1 || static_cast<int>(history.size()) < i)
        throw SolverError("time_conv_step: history must hold steps 0..i-1");
    const size_t n = history[0].size();
    std::vector<Mat3> out(n, Mat3::Zero());
    for (int j = 0; j < i; ++j) {
        const double w = tau * kappa_samples[j];
        const auto& h = history[i - 1 - j];
        for (size_t q = 0; q < n; ++q) out[q] += w * h[q];
    }
    return out;
}

GrowthField exp_update(const GrowthField& prev, const std::vector<Mat3>& m_vals, double tau) {
    GrowthField next(prev.size());
    for (size_t q = 0; q < prev.size(); ++q)
        next[q] = GrowthTensorPoint::from(mat_exp(tau * m_vals[q]) * prev[q].G);
    return next;
}

Mat3 Trajectory::G_hat(double t, int qp) const {
    const double tau = grid.tau();
    if (t <= 0.0) return G[0][qp];
    int i = static_cast<int>(std::ceil(t / tau - 1e-12));
    if (i > grid.N) i = grid.N;
    const double alpha = (t - (i - 1) * tau) / tau;
    return alpha * G[i][qp] + (1.0 - alpha) * G[i - 1][qp];
}

Mat3 Trajectory::G_bar(double t, int qp) const {
    const double tau = grid.tau();
    if (t <= 0.0) return G[0][qp];
    int i = static_cast<int>(std::ceil(t / tau - 1e-12));
    if (i > grid.N) i = grid.N;
    return G[i][qp];
}

double Trajectory::max_step_rate() const {
    double r = 0.0;
    for (size_t i = 1; i < G.size(); ++i)
        for (size_t q = 0; q < G[i].size(); ++q)
            r = std::max(r, frob(G[i][q] - G[i - 1][q]) / grid.tau());
    return r;
}

std::vector<double> sample_kappa(const ConvolutionKernel& kernel, const TimeGrid& grid) {
    std::vector<double> k(grid.N + 1);
    for (int i = 0; i <= grid.N; ++i) k[i] = kernel.kappa(grid.t(i));
    return k;
}

SimState init_state(const SimSetup& setup, const Mollifier& moll) {
    SimState st;
    st.step = 0;
    st.G = uniform_growth_field(setup.mesh, setup.g0);
    const LoadSample l0 = LoadSample::at_time(setup.load, 0.0, setup.mesh);
    auto res = minimize_energy(setup.energy, st.G, l0, setup.mesh,
                               DeformationField::identity(setup.mesh), setup.solver);
    st.y = std::move(res.y);
    st.mollified.push_back(moll.apply(grad_at_qp(st.y, setup.mesh)));
    st.diag.energy = res.energy;
    st.diag.minimize_iters = res.iterations;
    for (const auto& gp : st.G) {
        st.diag.min_detG = std::min(st.diag.min_detG, gp.detG);
        st.diag.max_absG = std::max(st.diag.max_absG, frob(gp.G));
    }
    return st;
}

namespace {

void check_step_invariants(const SimSetup& setup, const GrowthField& prev,
                           const GrowthField& next, const std::vector<Mat3>& m_vals,
                           double tau) {
    const double rho = setup.rate.m_bound();
    const double growth_factor = std::exp(tau * rho) - 1.0;
    for (size_t q = 0; q < prev.size(); ++q) {
        const double expected = std::exp(tau * trace(m_vals[q])) * prev[q].detG;
        if (std::abs(next[q].detG - expected) > tol::det_update_rel * prev[q].detG)
            throw InvariantViolation("growth: per-step determinant identity violated");
        if (frob(next[q].G - prev[q].G) > growth_factor * frob(prev[q].G) * (1.0 + 1e-12))
            throw InvariantViolation("growth: step-size bound violated");
    }
}

}  // namespace

SimState morpho_step(const SimSetup& setup, const Mollifier& moll,
                     const std::vector<double>& kappa_samples, const SimState& prev) {
    const double tau = setup.grid.tau();
    const int i = prev.step + 1;

    const auto kconv = time_conv_step(prev.mollified, kappa_samples, tau, i);

    std::vector<Mat3> m_vals(prev.G.size());
    double max_m = 0.0;
    for (size_t q = 0; q < prev.G.size(); ++q) {
        m_vals[q] = setup.rate(prev.G[q].G, kconv[q]);
        max_m = std::max(max_m, frob(m_vals[q]));
    }
    if (tau * max_m > std::log(2.0))
        std::cerr << "warning: tau * max|M| = " << tau * max_m << " exceeds log 2\n";

    SimState st;
    st.step = i;
    st.kconv_used = kconv;
    st.G = exp_update(prev.G, m_vals, tau);

    const LoadSample li = LoadSample::at_time(setup.load, setup.grid.t(i), setup.mesh);
    auto res = minimize_energy(setup.energy, st.G, li, setup.mesh, prev.y, setup.solver);
    st.y = std::move(res.y);
    st.mollified = prev.mollified;
    st.mollified.push_back(moll.apply(grad_at_qp(st.y, setup.mesh)));

    st.diag.energy = res.energy;
    st.diag.minimize_iters = res.iterations;
    st.diag.min_detG = st.G[0].detG;
    for (size_t q = 0; q < st.G.size(); ++q) {
        st.diag.min_detG = std::min(st.diag.min_detG, st.G[q].detG);
        st.diag.max_absG = std::max(st.diag.max_absG, frob(st.G[q].G));
        st.diag.step_rate = std::max(st.diag.step_rate, frob(st.G[q].G - prev.G[q].G) / tau);
    }

    if (setup.check_invariants) check_step_invariants(setup, prev.G, st.G, m_vals, tau);
    return st;
}

Trajectory run_morpho(const SimSetup& setup) {
    const double ts = tau_star(setup.rate.m_bound());
    if (!(setup.grid.tau() < ts))
        throw ConfigError("tau = " + std::to_string(setup.grid.tau()) +
                          " must be below tau* = (log 2)/||M|| = " + std::to_string(ts));

    const Mollifier moll(setup.kernel, setup.mesh);
    const auto kappa = sample_kappa(setup.kernel, setup.grid);

    Trajectory traj;
    traj.grid = setup.grid;

    SimState st = init_state(setup, moll);
    const double delta = [&] {
        double d = st.G[0].detG;
        for (const auto& gp : st.G) d = std::min(d, gp.detG);
        return d;
    }();

    auto record = [&](const SimState& s) {
        traj.y.push_back(s.y.y);
        std::vector<Mat3> g(s.G.size());
        for (size_t q = 0; q < s.G.size(); ++q) g[q] = s.G[q].G;
        traj.G.push_back(std::move(g));
        traj.diag.push_back(s.diag);
    };
    record(st);
    traj.kgrad.emplace_back();  // step 0 consumed no convolution

    for (int i = 1; i <= setup.grid.N; ++i) {
        SimState next = morpho_step(setup, moll, kappa, st);
        if (setup.check_invariants) {
            const double bound = std::exp(-3.0 * setup.grid.tau() * i * setup.rate.m_bound()) * delta;
            for (const auto& gp : next.G)
                if (gp.detG < bound * (1.0 - 1e-12))
                    throw InvariantViolation("growth: cumulative determinant bound violated");
        }
        traj.kgrad.push_back(next.kconv_used);
        record(next);
        st = std::move(next);
    }
    return traj;
}

double gronwall_sup_bound(const SimSetup& setup) {
    const double g0 = frob(setup.g0);
    return std::exp(setup.grid.T * setup.rate.m_bound()) * g0;
}

}  // namespace morpho
