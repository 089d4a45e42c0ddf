#pragma once

#include <iosfwd>
#include <vector>

#include "morpho/growth.hpp"

namespace morpho {

/// tau-refinement Cauchy study: the same problem is rerun with N, 2N, 4N, ...
/// steps and successive trajectories are compared at the coarse time nodes
/// (node i of level k coincides with node 2i of level k+1).
struct ConvergenceReport {
    std::vector<int> Ns;          // levels
    std::vector<double> errors;   // sup_{i,qp} |G^{(k)}_i - G^{(k+1)}_{2i}|, size levels-1
    std::vector<double> ratios;   // errors[k] / errors[k+1], size levels-2

    bool monotone() const {
        for (size_t k = 1; k < errors.size(); ++k)
            if (!(errors[k] < errors[k - 1])) return false;
        return true;
    }
};

ConvergenceReport convergence_study(const SimSetup& base, int levels);

void print_report(const ConvergenceReport& rep, std::ostream& os);

}  // namespace morpho
