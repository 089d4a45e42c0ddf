#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "morpho/fem.hpp"

namespace morpho {

/// Bounded Lipschitz growth rate
///   M(G, H[, mu]) = sat_rho(alpha0 Id + alpha1 sym(H) + alpha2 (Id - G)
///                           [+ alpha3 sigma(mu) Id]),
/// with sat_rho(X) = X / sqrt(1 + |X|^2 / rho^2) and sigma the logistic
/// function. |M| < rho everywhere; sat_rho is 1-Lipschitz.
struct GrowthRate {
    double alpha0 = 0.0;
    double alpha1 = 0.0;  // strain-driven, acts on sym(H)
    double alpha2 = 0.0;  // homeostatic, acts on Id - G
    double alpha3 = 0.0;  // nutrient-driven
    double rho = 0.5;     // saturation radius == reported sup-norm bound

    double m_bound() const { return rho; }
    double lip_bound() const {
        return std::abs(alpha1) + std::abs(alpha2) + 0.25 * std::abs(alpha3);
    }

    Mat3 operator()(const Mat3& g, const Mat3& h) const { return eval(g, h, std::nullopt); }
    Mat3 operator()(const Mat3& g, const Mat3& h, double mu) const { return eval(g, h, mu); }

    Mat3 eval(const Mat3& g, const Mat3& h, std::optional<double> mu) const {
        Mat3 x = alpha0 * Mat3::Identity();
        if (alpha1 != 0.0) x += alpha1 * 0.5 * (h + h.transpose());
        if (alpha2 != 0.0) x += alpha2 * (Mat3::Identity() - g);
        if (alpha3 != 0.0 && mu)
            x += alpha3 / (1.0 + std::exp(-*mu)) * Mat3::Identity();
        const double r = frob(x) / rho;
        return x / std::sqrt(1.0 + r * r);
    }
};

/// Space-time convolution kernel: exponential-relaxation kappa and a C^1
/// compactly supported bump phi normalized to unit integral. Both can be
/// overridden with arbitrary callables.
struct ConvolutionKernel {
    double t_rel = 0.5;   // time relaxation scale
    double r_phi = 0.35;  // spatial mollifier radius

    std::function<double(double)> kappa_override;
    std::function<double(const Vec3&)> phi_override;

    double kappa(double t) const {
        if (kappa_override) return kappa_override(t);
        return std::exp(-t / t_rel) / t_rel;
    }

    double phi(const Vec3& x) const {
        if (phi_override) return phi_override(x);
        const double r2 = x.squaredNorm() / (r_phi * r_phi);
        if (r2 >= 1.0) return 0.0;
        const double u = 1.0 - r2;
        // normalization: int_{|x|<r} c (1 - |x|^2/r^2)^2 dx = 1
        const double c = 105.0 / (32.0 * M_PI * r_phi * r_phi * r_phi);
        return c * u * u;
    }
};

struct TimeGrid {
    double T = 1.0;
    int N = 32;

    double tau() const { return T / N; }
    double t(int i) const { return tau() * i; }
};

inline double tau_star(double m_bound) { return std::log(2.0) / m_bound; }

// One-point quadrature of (phi * field)(x_q) over the mesh; zero extension
// outside Omega is automatic (only mesh tets contribute).
std::vector<Mat3> spatial_mollify(const std::vector<Mat3>& field, const ConvolutionKernel& kernel,
                                  const Mesh& mesh);

// Same evaluation at one arbitrary point.
Mat3 spatial_mollify_at(const Vec3& x, const std::vector<Mat3>& field,
                        const ConvolutionKernel& kernel, const Mesh& mesh);

/// Precomputed mollification weights w[q][t] = vol_t phi(x_q - x_t),
/// restricted to the support radius.
class Mollifier {
public:
    Mollifier(const ConvolutionKernel& kernel, const Mesh& mesh);
    std::vector<Mat3> apply(const std::vector<Mat3>& field) const;

private:
    int n_qp_;
    std::vector<std::vector<std::pair<int, double>>> weights_;
};

// (K_tau grad y)_{i-1} = sum_{j=0}^{i-1} tau kappa_j history[i-1-j],
// where history[j] holds the mollified gradient of step j.
std::vector<Mat3> time_conv_step(const std::vector<std::vector<Mat3>>& history,
                                 const std::vector<double>& kappa_samples, double tau, int i);

// G_i = exp(tau M) G_{i-1} per quadrature point.
GrowthField exp_update(const GrowthField& prev, const std::vector<Mat3>& m_vals, double tau);

struct StepDiagnostics {
    double energy = 0.0;
    double min_detG = 1.0;
    double max_absG = 0.0;
    double step_rate = 0.0;  // max_qp |G_i - G_{i-1}| / tau
    double min_mu = 0.0;
    double max_mu = 0.0;
    int minimize_iters = 0;
};

struct Trajectory {
    TimeGrid grid;
    std::vector<std::vector<Vec3>> y;       // N+1 nodal fields
    std::vector<std::vector<Mat3>> G;       // N+1 per-qp tensors
    std::vector<std::vector<Mat3>> kgrad;   // K_tau grad y fed into step i (index i, empty at 0)
    std::vector<std::vector<double>> mu;    // N+1 nodal fields; empty if uncoupled
    std::vector<StepDiagnostics> diag;      // N+1, entry 0 partial

    bool has_mu() const { return !mu.empty(); }

    // piecewise affine interpolant of G at quadrature point qp
    Mat3 G_hat(double t, int qp) const;
    // backward piecewise constant interpolant
    Mat3 G_bar(double t, int qp) const;
    // max_qp |G_i - G_{i-1}| / tau over all steps
    double max_step_rate() const;
};

struct SimSetup {
    Mesh mesh;
    EnergyDensity energy;
    GrowthRate rate;
    ConvolutionKernel kernel;
    TimeGrid grid;
    Load load = Load::zero();
    Mat3 g0 = Mat3::Identity();  // uniform initial growth tensor
    MinimizeOpts solver;
    bool check_invariants = true;
};

/// Running state of the stepping loop.
struct SimState {
    int step = 0;
    DeformationField y;
    GrowthField G;
    std::vector<std::vector<Mat3>> mollified;  // (phi * grad y)_j for j = 0..step
    std::vector<Mat3> kconv_used;              // K_tau grad y that produced this step's G
    StepDiagnostics diag;
};

// Solves the step-0 equilibrium problem and seeds the mollified history.
SimState init_state(const SimSetup& setup, const Mollifier& moll);

// One pass of the alternating scheme: convolution, exponential growth
// update, equilibrium re-minimization (warm started).
SimState morpho_step(const SimSetup& setup, const Mollifier& moll,
                     const std::vector<double>& kappa_samples, const SimState& prev);

// Full trajectory at fixed tau; per-step invariant checks enabled by default.
Trajectory run_morpho(const SimSetup& setup);

// A-priori sup bound sup_i max_qp |G_i| <= e^{T rho} max_qp |G^0|.
double gronwall_sup_bound(const SimSetup& setup);

std::vector<double> sample_kappa(const ConvolutionKernel& kernel, const TimeGrid& grid);

}  // namespace morpho
