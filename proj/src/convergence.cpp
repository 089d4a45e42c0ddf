#include "morpho/convergence.hpp"

#include <cstdio>
#include <ostream>

#include "morpho/errors.hpp"

namespace morpho {

ConvergenceReport convergence_study(const SimSetup& base, int levels) {
    if (levels < 2) throw ConfigError("convergence_study needs at least 2 levels");

    ConvergenceReport rep;
    std::vector<Trajectory> runs;
    runs.reserve(levels);
    for (int k = 0; k < levels; ++k) {
        SimSetup s = base;
        s.grid.N = base.grid.N << k;
        rep.Ns.push_back(s.grid.N);
        runs.push_back(run_morpho(s));
    }

    for (int k = 0; k + 1 < levels; ++k) {
        const auto& coarse = runs[k];
        const auto& fine = runs[k + 1];
        double e = 0.0;
        for (size_t i = 0; i < coarse.G.size(); ++i)
            for (size_t q = 0; q < coarse.G[i].size(); ++q)
                e = std::max(e, frob(coarse.G[i][q] - fine.G[2 * i][q]));
        rep.errors.push_back(e);
    }
    for (size_t k = 0; k + 1 < rep.errors.size(); ++k)
        rep.ratios.push_back(rep.errors[k] / rep.errors[k + 1]);
    return rep;
}

void print_report(const ConvergenceReport& rep, std::ostream& os) {
    os << "N_coarse,N_fine,sup_diff,ratio_to_next\n";
    char buf[64];
    for (size_t k = 0; k < rep.errors.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", rep.errors[k]);
        os << rep.Ns[k] << ',' << rep.Ns[k + 1] << ',' << buf << ',';
        if (k < rep.ratios.size()) {
            std::snprintf(buf, sizeof buf, "%.6g", rep.ratios[k]);
            os << buf;
        }
        os << '\n';
    }
    os << (rep.monotone() ? "monotone: yes" : "monotone: no") << '\n';
}

}  // namespace morpho
