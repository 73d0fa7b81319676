#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "trustgame/params.hpp"
#include "trustgame/solution.hpp"

namespace trustgame {

// Reputation grid plus time step for the discrete-time evaluation oracle.
struct GridModel {
    std::vector<double> p;  // strictly increasing, includes 0, p_dagger, 1
    double dt = 0.0;
    double discount = 1.0;  // e^{-r dt}
    std::size_t i0 = 0;     // index of p = 0
    std::size_t i1 = 0;     // index of p = 1

    std::size_t size() const { return p.size(); }
    // Largest index j with p[j] <= x (x in [0,1]).
    std::size_t locate(double x) const;
};

// Uniform n_nodes grid with 0, 1, p_dagger, and any supplied cutoffs inserted
// as exact nodes so policy discontinuities align with nodes.
GridModel build_grid(const ModelParams& m, std::size_t n_nodes, double dt,
                     const std::vector<double>& exact_nodes = {});

// A Markov strategy profile sampled on the grid. sigma = +inf marks an
// immediate inspection node.
struct GridProfile {
    std::vector<double> eta;
    std::vector<double> sigma;
    std::vector<std::uint8_t> alpha;
    // Disclosure reporting: an immediate report when theta = 1 plus a hazard
    // of untrue reports while theta = 0; any report jumps the reputation to
    // report_jump_p and triggers an immediate inspection there.
    std::vector<std::uint8_t> report_immediate_theta1;
    std::vector<double> report_false_hazard;
    double report_jump_p = 0.0;

    bool has_reports = false;
};

// Samples the equilibrium policies at the grid nodes. For disclosure the
// reporting rule is attached at p = 0 only; reputations in (0, x_low) are off
// the equilibrium path and evaluated under the no-report continuation.
GridProfile profile_from_solution(const EquilibriumSolution& sol, const GridModel& g);

// Grid nodes of the solution's cutoffs, for build_grid.
std::vector<double> solution_exact_nodes(const EquilibriumSolution& sol);

}  // namespace trustgame
