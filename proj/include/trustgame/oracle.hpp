#pragma once

#include <cstddef>
#include <vector>

#include "trustgame/grid.hpp"
#include "trustgame/params.hpp"

namespace trustgame {

struct GridValues {
    std::vector<double> U0;  // agent value at theta = 0 per node
    std::vector<double> U1;  // agent value at theta = 1 per node
    std::vector<double> V;   // principal value per node
    std::size_t iterations = 0;
    double final_delta = 0.0;
};

// Fixed point of the discounted policy-evaluation operator (no maximization),
// iterated Jacobi-style until the sup-norm change drops below `tol`.
GridValues policy_evaluate(const GridModel& g, const GridProfile& prof,
                           const ModelParams& m, double tol = 1e-12,
                           std::size_t max_iter = 1000000);

// One application of the evaluation operator; used for near-fixed-point
// residual studies.
void apply_evaluation_operator(const GridModel& g, const GridProfile& prof,
                               const ModelParams& m, const GridValues& in,
                               GridValues& out);

struct DeviationGaps {
    double agent_gap = 0.0;      // best one-step effort advantage, dwell nodes
    double principal_gap = 0.0;  // best of {inspect now, wait dt} advantage
    // One-step effort advantage evaluated at zero-dwell inspection nodes as if
    // the inspection were slightly delayed. Reported, never gating.
    double flagged_agent_gap_immediate = 0.0;
};

// One-shot deviation audit holding the converged continuation values fixed.
// Effort menu {0, 1/2, 1}: the one-step objective is affine in effort, so the
// extremes detect any profitable deviation and 1/2 is a tie canary.
DeviationGaps deviation_gap(const GridModel& g, const GridProfile& prof,
                            const GridValues& vals, const ModelParams& m);

}  // namespace trustgame
