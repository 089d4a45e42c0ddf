#include "morpho/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "morpho/errors.hpp"

namespace morpho {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

struct Parser {
    std::vector<std::string> issues;
    int line = 0;

    void fail(const std::string& msg) {
        issues.push_back("line " + std::to_string(line) + ": " + msg);
    }

    bool to_double(const std::string& v, double& out) {
        try {
            size_t pos = 0;
            out = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return true;
        } catch (const std::exception&) {
            fail("expected a number, got '" + v + "'");
            return false;
        }
    }

    bool to_int(const std::string& v, int& out) {
        try {
            size_t pos = 0;
            out = std::stoi(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return true;
        } catch (const std::exception&) {
            fail("expected an integer, got '" + v + "'");
            return false;
        }
    }

    bool to_u64(const std::string& v, std::uint64_t& out) {
        try {
            size_t pos = 0;
            out = std::stoull(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return true;
        } catch (const std::exception&) {
            fail("expected an unsigned integer, got '" + v + "'");
            return false;
        }
    }

    bool to_vec3(const std::string& v, Vec3& out) {
        const auto parts = split_ws(v);
        if (parts.size() != 3) {
            fail("expected three numbers, got '" + v + "'");
            return false;
        }
        for (int k = 0; k < 3; ++k)
            if (!to_double(parts[k], out[k])) return false;
        return true;
    }

    bool to_doubles(const std::string& v, std::vector<double>& out) {
        out.clear();
        for (const auto& p : split_ws(v)) {
            double d;
            if (!to_double(p, d)) return false;
            out.push_back(d);
        }
        return true;
    }
};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    Parser p;

    std::istringstream is(text);
    std::string raw;
    while (std::getline(is, raw)) {
        ++p.line;
        std::string s = raw;
        if (const auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;

        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            p.fail("expected 'key = value', got '" + trim(raw) + "'");
            continue;
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty()) {
            p.fail("missing key before '='");
            continue;
        }
        if (val.empty()) {
            p.fail("missing value for key '" + key + "'");
            continue;
        }

        if (key == "mesh.n") p.to_int(val, c.mesh_n);
        else if (key == "energy.a") p.to_double(val, c.energy_a);
        else if (key == "energy.b") p.to_double(val, c.energy_b);
        else if (key == "energy.s") p.to_double(val, c.energy_s);
        else if (key == "energy.p") p.to_double(val, c.energy_p);
        else if (key == "growth.alpha0") p.to_double(val, c.alpha0);
        else if (key == "growth.alpha1") p.to_double(val, c.alpha1);
        else if (key == "growth.alpha2") p.to_double(val, c.alpha2);
        else if (key == "growth.alpha3") p.to_double(val, c.alpha3);
        else if (key == "growth.rho") p.to_double(val, c.rho);
        else if (key == "growth.r_phi") p.to_double(val, c.r_phi);
        else if (key == "growth.t_rel") p.to_double(val, c.t_rel);
        else if (key == "growth.g0") p.to_double(val, c.g0);
        else if (key == "load.f") p.to_vec3(val, c.load_f);
        else if (key == "load.g") p.to_vec3(val, c.load_g);
        else if (key == "load.profile") c.load_profile = val;
        else if (key == "time.T") p.to_double(val, c.time_T);
        else if (key == "time.N") p.to_int(val, c.time_N);
        else if (key == "solver.tol") p.to_double(val, c.solver_tol);
        else if (key == "solver.max_iters") p.to_int(val, c.solver_max_iters);
        else if (key == "nutrient.nu") p.to_double(val, c.nutrient_nu);
        else if (key == "nutrient.h") p.to_double(val, c.nutrient_h);
        else if (key == "nutrient.hc") p.to_double(val, c.nutrient_hc);
        else if (key == "nutrient.xc") p.to_vec3(val, c.nutrient_xc);
        else if (key == "nutrient.mu_d") p.to_double(val, c.nutrient_mu_d);
        else if (key == "nutrient.mu0") p.to_double(val, c.nutrient_mu0);
        else if (key == "control.basis") c.control_basis = split_ws(val);
        else if (key == "control.lo") p.to_doubles(val, c.control_lo);
        else if (key == "control.hi") p.to_doubles(val, c.control_hi);
        else if (key == "control.grid") p.to_int(val, c.control_grid);
        else if (key == "control.budget") p.to_int(val, c.control_budget);
        else if (key == "objective.beta1") p.to_double(val, c.beta1);
        else if (key == "objective.beta2") p.to_double(val, c.beta2);
        else if (key == "objective.beta3") p.to_double(val, c.beta3);
        else if (key == "objective.target") c.objective_target = val;
        else if (key == "seed") p.to_u64(val, c.seed);
        else p.fail("unknown key '" + key + "'");
    }

    // semantic validation, reported with the constraint named
    auto& issues = p.issues;
    if (c.mesh_n < 2) issues.push_back("mesh.n must be at least 2 (got " + std::to_string(c.mesh_n) + ")");
    if (!(c.energy_p > 3.0))
        issues.push_back("energy.p must exceed 3 (got " + std::to_string(c.energy_p) + ")");
    if (!(c.energy_a > 0.0)) issues.push_back("energy.a must be positive");
    if (!(c.energy_b > 0.0)) issues.push_back("energy.b must be positive");
    if (!(c.energy_s > 0.0)) issues.push_back("energy.s must be positive");
    if (!(c.rho > 0.0)) issues.push_back("growth.rho must be positive");
    if (!(c.r_phi > 0.0)) issues.push_back("growth.r_phi must be positive");
    if (!(c.t_rel > 0.0)) issues.push_back("growth.t_rel must be positive");
    if (!(c.g0 > 0.0)) issues.push_back("growth.g0 must be positive");
    if (!(c.time_T > 0.0)) issues.push_back("time.T must be positive");
    if (c.time_N < 1) issues.push_back("time.N must be at least 1");
    if (!(c.solver_tol > 0.0)) issues.push_back("solver.tol must be positive");
    if (c.solver_max_iters < 1) issues.push_back("solver.max_iters must be at least 1");
    if (c.control_grid < 1) issues.push_back("control.grid must be at least 1");
    if (c.control_budget < 1) issues.push_back("control.budget must be at least 1");
    if (c.control_lo.size() != c.control_basis.size() ||
        c.control_hi.size() != c.control_basis.size())
        issues.push_back("control.lo and control.hi must match the length of control.basis");
    if (c.load_profile != "constant" && c.load_profile != "ramp")
        issues.push_back("load.profile must be 'constant' or 'ramp' (got '" + c.load_profile + "')");
    {
        const auto t = split_ws(c.objective_target);
        const bool ok = (t.size() == 1 && t[0] == "id") ||
                        (t.size() == 2 && t[0] == "scale");
        double dummy;
        if (!ok || (t.size() == 2 && !(std::istringstream(t[1]) >> dummy)))
            issues.push_back("objective.target must be 'id' or 'scale <factor>'");
    }
    if (c.time_N >= 1 && c.time_T > 0.0 && c.rho > 0.0) {
        const double tau = c.time_T / c.time_N;
        const double ts = tau_star(c.rho);
        if (!(tau < ts))
            issues.push_back("time step tau = T/N = " + std::to_string(tau) +
                             " must be below tau* = (log 2)/||M|| = " + std::to_string(ts));
    }

    if (!issues.empty()) throw ConfigError(issues);
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str());
}

SimSetup to_setup_impl(const RunConfig& c) {
    SimSetup s;
    s.mesh = Mesh::unit_cube(c.mesh_n);
    s.energy.a = c.energy_a;
    s.energy.b = c.energy_b;
    s.energy.s = c.energy_s;
    s.energy.p = c.energy_p;
    s.rate.alpha0 = c.alpha0;
    s.rate.alpha1 = c.alpha1;
    s.rate.alpha2 = c.alpha2;
    s.rate.alpha3 = c.alpha3;
    s.rate.rho = c.rho;
    s.kernel.t_rel = c.t_rel;
    s.kernel.r_phi = c.r_phi;
    s.grid.T = c.time_T;
    s.grid.N = c.time_N;
    s.g0 = c.g0 * Mat3::Identity();
    s.solver.tol = c.solver_tol;
    s.solver.max_iters = c.solver_max_iters;

    const Vec3 f0 = c.load_f, g0 = c.load_g;
    if (c.load_profile == "ramp") {
        const double T = c.time_T;
        s.load.f = [f0, T](double t, const Vec3&) { return (t / T * f0).eval(); };
        s.load.g = [g0, T](double t, const Vec3&) { return (t / T * g0).eval(); };
    } else {
        s.load.f = [f0](double, const Vec3&) { return f0; };
        s.load.g = [g0](double, const Vec3&) { return g0; };
    }
    return s;
}

SimSetup RunConfig::to_setup() const { return to_setup_impl(*this); }

NutrientProblem RunConfig::to_nutrient() const {
    NutrientProblem n;
    n.nu = nutrient_nu;
    const double h = nutrient_h, mud = nutrient_mu_d, mu0 = nutrient_mu0;
    n.h = [h](double, const Vec3&) { return h; };
    n.mu_D = [mud](double, const Vec3&) { return mud; };
    n.mu0 = [mu0](const Vec3&) { return mu0; };
    n.h_c = nutrient_hc;
    n.x_c = nutrient_xc;
    return n;
}

ControlFamily RunConfig::to_family() const {
    ControlFamily f;
    TimeGrid grid{time_T, time_N};
    for (const auto& id : control_basis) f.basis.push_back(basis_field(id, grid));
    f.lo = control_lo;
    f.hi = control_hi;
    f.grid_points = control_grid;
    return f;
}

ObjectiveJ RunConfig::to_objective() const {
    ObjectiveJ o;
    o.beta1 = beta1;
    o.beta2 = beta2;
    o.beta3 = beta3;
    o.p = energy_p;
    const auto t = split_ws(objective_target);
    if (t.size() == 2 && t[0] == "scale") {
        const double s = std::stod(t[1]);
        o.y_target = [s](double, const Vec3& x) { return (s * x).eval(); };
    }
    return o;
}

void RunConfig::validate_coupled() const {
    if (!(nutrient_nu > 0.0))
        throw ConfigError("nutrient.nu must be positive");
}

void RunConfig::dump(std::ostream& os) const {
    auto v3 = [](const Vec3& v) {
        std::ostringstream o;
        o << v[0] << " " << v[1] << " " << v[2];
        return o.str();
    };
    os << "mesh.n = " << mesh_n << "\n";
    os << "energy.a = " << energy_a << "\n";
    os << "energy.b = " << energy_b << "\n";
    os << "energy.s = " << energy_s << "\n";
    os << "energy.p = " << energy_p << "\n";
    os << "growth.alpha0 = " << alpha0 << "\n";
    os << "growth.alpha1 = " << alpha1 << "\n";
    os << "growth.alpha2 = " << alpha2 << "\n";
    os << "growth.alpha3 = " << alpha3 << "\n";
    os << "growth.rho = " << rho << "\n";
    os << "growth.r_phi = " << r_phi << "\n";
    os << "growth.t_rel = " << t_rel << "\n";
    os << "growth.g0 = " << g0 << "\n";
    os << "load.f = " << v3(load_f) << "\n";
    os << "load.g = " << v3(load_g) << "\n";
    os << "load.profile = " << load_profile << "\n";
    os << "time.T = " << time_T << "\n";
    os << "time.N = " << time_N << "\n";
    os << "solver.tol = " << solver_tol << "\n";
    os << "solver.max_iters = " << solver_max_iters << "\n";
    os << "nutrient.nu = " << nutrient_nu << "\n";
    os << "nutrient.h = " << nutrient_h << "\n";
    os << "nutrient.hc = " << nutrient_hc << "\n";
    os << "nutrient.xc = " << v3(nutrient_xc) << "\n";
    os << "nutrient.mu_d = " << nutrient_mu_d << "\n";
    os << "nutrient.mu0 = " << nutrient_mu0 << "\n";
    os << "control.basis =";
    for (const auto& b : control_basis) os << " " << b;
    os << "\n";
    os << "control.lo =";
    for (double x : control_lo) os << " " << x;
    os << "\n";
    os << "control.hi =";
    for (double x : control_hi) os << " " << x;
    os << "\n";
    os << "control.grid = " << control_grid << "\n";
    os << "control.budget = " << control_budget << "\n";
    os << "objective.beta1 = " << beta1 << "\n";
    os << "objective.beta2 = " << beta2 << "\n";
    os << "objective.beta3 = " << beta3 << "\n";
    os << "objective.target = " << objective_target << "\n";
    os << "seed = " << seed << "\n";
}

}  // namespace morpho
