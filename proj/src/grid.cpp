#include "trustgame/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trustgame/errors.hpp"
#include "trustgame/model.hpp"

namespace trustgame {

std::size_t GridModel::locate(double x) const {
    auto it = std::upper_bound(p.begin(), p.end(), x);
    if (it == p.begin()) return 0;
    std::size_t j = static_cast<std::size_t>(it - p.begin()) - 1;
    if (j >= p.size() - 1) j = p.size() - 2;
    return j;
}

GridModel build_grid(const ModelParams& m, std::size_t n_nodes, double dt,
                     const std::vector<double>& exact_nodes) {
    if (n_nodes < 101) throw StepTooCoarse("build_grid: need at least 101 nodes");
    if (!(m.lambda * dt < 0.1)) {
        throw StepTooCoarse("build_grid: lambda*dt must stay below 0.1");
    }
    GridModel g;
    g.dt = dt;
    g.discount = std::exp(-m.r * dt);
    g.p.reserve(n_nodes + exact_nodes.size() + 2);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        g.p.push_back(static_cast<double>(i) / static_cast<double>(n_nodes - 1));
    }
    g.p.push_back(m.p_dagger());
    for (double x : exact_nodes) {
        if (x > 0.0 && x < 1.0) g.p.push_back(x);
    }
    std::sort(g.p.begin(), g.p.end());
    g.p.erase(std::unique(g.p.begin(), g.p.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
              g.p.end());
    g.p.front() = 0.0;
    g.p.back() = 1.0;
    g.i0 = 0;
    g.i1 = g.p.size() - 1;
    return g;
}

std::vector<double> solution_exact_nodes(const EquilibriumSolution& sol) {
    std::vector<double> nodes;
    auto add = [&](const std::optional<double>& v) {
        if (v) nodes.push_back(*v);
    };
    add(sol.cutoffs.x_low);
    add(sol.cutoffs.x_zero);
    add(sol.cutoffs.x_star);
    add(sol.cutoffs.x_bar);
    return nodes;
}

GridProfile profile_from_solution(const EquilibriumSolution& sol, const GridModel& g) {
    GridProfile prof;
    std::size_t n = g.size();
    prof.eta.resize(n);
    prof.sigma.resize(n);
    prof.alpha.resize(n);
    prof.report_immediate_theta1.assign(n, 0);
    prof.report_false_hazard.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double p = g.p[i];
        prof.eta[i] = sol.effort(p);
        InspectionAction a = sol.inspection(p);
        prof.sigma[i] = a.kind == InspectionAction::Kind::Immediate
                            ? std::numeric_limits<double>::infinity()
                        : a.kind == InspectionAction::Kind::Hazard ? a.rate
                                                                   : 0.0;
        prof.alpha[i] = sol.approve(p) ? 1 : 0;
    }
    if (sol.cls == EqClass::Disclosure) {
        prof.has_reports = true;
        prof.report_jump_p = sol.report_posterior();
        prof.report_immediate_theta1[g.i0] = 1;
        prof.report_false_hazard[g.i0] = sol.report_false_hazard_at_zero();
    }
    return prof;
}

}  // namespace trustgame
