#include <CLI11.hpp>
#include <Eigen/Core>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "morpho/config.hpp"
#include "morpho/convergence.hpp"
#include "morpho/errors.hpp"
#include "morpho/io.hpp"
#include "morpho/selftest.hpp"

namespace fs = std::filesystem;
using namespace morpho;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required = true) {
    auto* c = cmd->add_option("--config", o.config_path, "run configuration file");
    if (config_required) c->required();
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--seed", o.seed, "RNG seed (overrides the config)")
        ->each([&o](const std::string&) { o.seed_given = true; });
    cmd->add_option("--threads", o.threads, "worker thread count");
}

RunConfig load_config(const CommonOpts& o) {
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : parse_config(o.config_path);
    if (o.seed_given) cfg.seed = o.seed;
    return cfg;
}

void prepare_out(const CommonOpts& o) {
    if (o.threads > 0) Eigen::setNbThreads(o.threads);
    fs::create_directories(o.out_dir);
}

void write_outputs(const Trajectory& traj, const Mesh& mesh, const std::string& out_dir) {
    emit_csv(traj, out_dir + "/diagnostics.csv");
    emit_vtk(traj, mesh, 0, out_dir + "/state_initial.vtk");
    emit_vtk(traj, mesh, traj.grid.N, out_dir + "/state_final.vtk");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"morphoelastic growth simulator"};
    app.require_subcommand(1);

    CommonOpts sim_o, cpl_o, ctl_o, cnv_o, slf_o;
    auto* sim = app.add_subcommand("simulate", "uncoupled growth trajectory");
    add_common(sim, sim_o);
    auto* cpl = app.add_subcommand("simulate-coupled", "growth coupled to the nutrient field");
    add_common(cpl, cpl_o);
    auto* ctl = app.add_subcommand("control", "exhaustive search over the control family");
    add_common(ctl, ctl_o);
    auto* cnv = app.add_subcommand("convergence-study", "tau-refinement Cauchy study");
    add_common(cnv, cnv_o);
    int levels = 3;
    cnv->add_option("--levels", levels, "number of refinement levels");
    auto* slf = app.add_subcommand("selftest", "randomized invariant sweep");
    add_common(slf, slf_o, /*config_required=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e);
        return r == 0 ? exit_ok : exit_validation;
    }

    try {
        if (*sim) {
            prepare_out(sim_o);
            const RunConfig cfg = load_config(sim_o);
            const SimSetup setup = cfg.to_setup();
            const Trajectory traj = run_morpho(setup);
            write_outputs(traj, setup.mesh, sim_o.out_dir);
            std::cout << "simulate: " << traj.grid.N << " steps, final energy "
                      << traj.diag.back().energy << ", min det G " << traj.diag.back().min_detG
                      << "\n";
        } else if (*cpl) {
            prepare_out(cpl_o);
            const RunConfig cfg = load_config(cpl_o);
            cfg.validate_coupled();
            const SimSetup setup = cfg.to_setup();
            const Trajectory traj = run_coupled(setup, cfg.to_nutrient());
            write_outputs(traj, setup.mesh, cpl_o.out_dir);
            std::cout << "simulate-coupled: " << traj.grid.N << " steps, nutrient range ["
                      << traj.diag.back().min_mu << ", " << traj.diag.back().max_mu << "]\n";
        } else if (*ctl) {
            prepare_out(ctl_o);
            const RunConfig cfg = load_config(ctl_o);
            const SimSetup setup = cfg.to_setup();
            const auto result =
                optimize_control(cfg.to_family(), cfg.to_objective(), setup, cfg.control_budget);
            write_outputs(result.trajectory, setup.mesh, ctl_o.out_dir);
            std::ofstream summary(ctl_o.out_dir + "/control_result.txt");
            for (std::ostream* os :
                 {static_cast<std::ostream*>(&std::cout), static_cast<std::ostream*>(&summary)}) {
                *os << "candidates evaluated: " << result.evaluated.size()
                    << (result.budget_exhausted ? " (budget exhausted)" : "") << "\n";
                *os << "best coefficients:";
                for (double c : result.c) *os << " " << c;
                *os << "\nJ = " << result.j.total() << " (volume " << result.j.volume_term
                    << ", tracking " << result.j.tracking_term << ", cost "
                    << result.j.control_cost << ")\n";
            }
        } else if (*cnv) {
            prepare_out(cnv_o);
            const RunConfig cfg = load_config(cnv_o);
            const auto rep = convergence_study(cfg.to_setup(), levels);
            print_report(rep, std::cout);
            std::ofstream f(cnv_o.out_dir + "/convergence.csv");
            print_report(rep, f);
        } else if (*slf) {
            const bool ok = selftest(slf_o.seed_given ? slf_o.seed : 20260824ull, std::cout);
            return ok ? exit_ok : exit_invariant;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error:\n" << e.what() << "\n";
        return exit_validation;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return exit_invariant;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return exit_solver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_solver;
    }
    return exit_ok;
}
