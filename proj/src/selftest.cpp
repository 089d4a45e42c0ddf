#include "morpho/selftest.hpp"

#include <cmath>
#include <ostream>

#include "morpho/growth.hpp"
#include "morpho/nutrient.hpp"
#include "morpho/rng.hpp"

namespace morpho {

namespace {

Mat3 random_mat(Rng& rng, double scale) {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = rng.uniform(-scale, scale);
    return m;
}

// random matrix with positive determinant, bounded distortion
Mat3 random_posdet(Rng& rng) {
    for (;;) {
        Mat3 m = Mat3::Identity() + random_mat(rng, 0.4);
        if (det(m) > 0.1) return m;
    }
}

}  // namespace

bool selftest(std::uint64_t seed, std::ostream& os) {
    Rng rng(seed);
    bool ok = true;
    auto report = [&](const char* name, bool pass) {
        os << (pass ? "pass" : "FAIL") << "  " << name << "\n";
        ok = ok && pass;
    };

    // exp bounds: |exp(A) - Id| <= e^{|A|} - 1 and det exp(A) = e^{tr A}
    {
        bool step = true, detid = true, inv = true;
        for (int k = 0; k < 2000 && (step || detid || inv); ++k) {
            const Mat3 a = random_mat(rng, 5.0 / 3.0);
            const Mat3 e = mat_exp(a);
            if (frob(e - Mat3::Identity()) > std::exp(frob(a)) - 1.0 + 1e-9) step = false;
            if (std::abs(det(e) - std::exp(trace(a))) >
                tol::det_exp_trace * std::exp(trace(a)))
                detid = false;
            if (frob(e * mat_exp(-a) - Mat3::Identity()) > tol::exp_inverse * frob(e)) inv = false;
        }
        report("matrix exponential step bound", step);
        report("det exp equals exp trace", detid);
        report("exp(A) exp(-A) is the identity", inv);
    }

    // energy density: coercivity, Mandel control, frame indifference
    {
        EnergyDensity w;
        bool coercive = true, mandel = true, frame = true;
        for (int k = 0; k < 2000; ++k) {
            const Mat3 f = random_posdet(rng);
            const double wf = w.W(f);
            if (!(wf + 1.0 >= w.c1() * (std::pow(frob(f), w.p) + std::pow(det(f), -w.s))))
                coercive = false;
            if (!(frob(w.mandel(f)) <= w.c2() * (wf + 1.0) + 1e-9)) mandel = false;
            // random rotation via normalized cross-product frame
            Vec3 u(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
            Vec3 v(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
            if (u.norm() < 1e-3 || u.cross(v).norm() < 1e-3) continue;
            u.normalize();
            Vec3 wv = u.cross(v).normalized();
            Mat3 r;
            r.col(0) = u;
            r.col(1) = wv.cross(u);
            r.col(2) = wv;
            if (std::abs(w.W(r * f) - wf) > tol::frame_indiff * (1.0 + std::abs(wf)))
                frame = false;
        }
        report("energy coercivity", coercive);
        report("Mandel tensor control", mandel);
        report("frame indifference", frame);
    }

    // growth rate: saturation bound and exact decoupling at alpha = 0
    {
        GrowthRate rate;
        rate.alpha0 = 0.1;
        rate.alpha1 = 0.2;
        rate.alpha2 = 0.15;
        rate.alpha3 = 0.3;
        rate.rho = 0.5;
        bool sat = true, decouple = true;
        for (int k = 0; k < 2000; ++k) {
            const Mat3 g = random_posdet(rng);
            const Mat3 h = random_mat(rng, 2.0);
            const double mu = rng.uniform(-3, 3);
            if (!(frob(rate.eval(g, h, mu)) < rate.rho)) sat = false;
            GrowthRate off = rate;
            off.alpha3 = 0.0;
            const Mat3 with_mu = off.eval(g, h, mu);
            const Mat3 without = off.eval(g, h, std::nullopt);
            if ((with_mu - without).cwiseAbs().maxCoeff() != 0.0) decouple = false;
        }
        report("growth rate saturation", sat);
        report("nutrient decoupling at alpha3 = 0", decouple);
    }

    // a short trajectory on a tiny mesh: determinant identity and bounds
    {
        SimSetup setup;
        setup.mesh = Mesh::unit_cube(2);
        setup.rate.alpha0 = 0.1;
        setup.rate.alpha1 = 0.2;
        setup.rate.rho = 0.5;
        setup.grid.N = 4;
        bool traj_ok = true;
        try {
            const auto traj = run_morpho(setup);  // invariant checks run inside
            if (static_cast<int>(traj.G.size()) != setup.grid.N + 1) traj_ok = false;
        } catch (const std::exception&) {
            traj_ok = false;
        }
        report("trajectory invariants on a coarse run", traj_ok);
    }

    // nutrient solver reproduces a constant steady state exactly
    {
        bool exact = true;
        try {
            const Mesh mesh = Mesh::unit_cube(2);
            const double c = 1.5;
            std::vector<double> mu_prev(mesh.n_vertices(), c), F(mesh.n_vertices(), c),
                bc(mesh.n_vertices(), c);
            const auto mu = nutrient_step(mu_prev, F, bc, 0.25, 0.1, mesh);
            for (double m : mu)
                if (std::abs(m - c) > 1e-13) exact = false;
        } catch (const std::exception&) {
            exact = false;
        }
        report("nutrient constant steady state", exact);
    }

    os << (ok ? "selftest: all checks passed\n" : "selftest: FAILURES detected\n");
    return ok;
}

}  // namespace morpho
