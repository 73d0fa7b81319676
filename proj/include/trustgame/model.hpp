#pragma once

#include <cmath>

#include "trustgame/errors.hpp"
#include "trustgame/params.hpp"

namespace trustgame {

// v(p) = pH - (1-p)L, the principal's expected flow payoff while approving.
inline double flow_value(double p, const ModelParams& m) {
    return p * m.H - (1.0 - p) * m.L;
}

// v(p)^+ = max{v(p), 0}, the flow under the optimal (myopic) approval rule.
inline double flow_value_pos(double p, const ModelParams& m) {
    double v = flow_value(p, m);
    return v > 0.0 ? v : 0.0;
}

inline double approval_threshold(const ModelParams& m) { return m.p_dagger(); }

// Tie at p_dagger resolves to approve.
inline bool approves(double p, const ModelParams& m) { return p >= m.p_dagger(); }

// dp/dt = lambda * (eta_believed - p) between inspections.
inline double reputation_drift(double p, double eta_believed, const ModelParams& m) {
    return m.lambda * (eta_believed - p);
}

enum class DriftRegime { ZeroEffort, FullEffort };

// Time for the reputation to travel from p0 to p1 under a constant-effort
// regime. ZeroEffort: p_t = p0 e^{-lambda t}, requires p0 >= p1 > 0.
// FullEffort: 1-p_t = (1-p0) e^{-lambda t}, requires p0 <= p1 < 1.
inline double travel_time(double p0, double p1, DriftRegime regime, const ModelParams& m) {
    switch (regime) {
        case DriftRegime::ZeroEffort:
            if (p0 < p1) throw WrongDirection("travel_time: zero-effort drift moves down");
            if (p1 <= 0.0) throw InfiniteTravel("travel_time: p=0 is absorbing under zero effort");
            return std::log(p0 / p1) / m.lambda;
        case DriftRegime::FullEffort:
            if (p0 > p1) throw WrongDirection("travel_time: full-effort drift moves up");
            if (p1 >= 1.0) throw InfiniteTravel("travel_time: p=1 is absorbing under full effort");
            return std::log((1.0 - p0) / (1.0 - p1)) / m.lambda;
    }
    return 0.0;  // unreachable
}

// Critical believed effort at which the principal is indifferent between
// inspecting and waiting. Piecewise linear with a kink (its peak) at
// p_dagger; may lie outside [0,1].
inline double eta_bar(double p, const BoundaryValues& bv, const ModelParams& m) {
    double dV = bv.V1 - bv.V0;
    if (!(dV > 0.0)) throw DegenerateSpread("eta_bar: requires V1 > V0");
    return m.r * (bv.V0 - m.k) / (m.lambda * dV) + p * (m.r + m.lambda) / m.lambda -
           flow_value_pos(p, m) / (m.lambda * dV);
}

// Trajectory of dp = lambda*(eta(p)-p) dt under the interior effort rule
// eta(p) = x*(xbar-p)/(xbar-x*): an exponential decay onto the asymptote x*.
inline double mixing_drift_solution(double p0, double t, double x_star, double x_bar,
                                    const ModelParams& m) {
    if (!(p0 > x_star && p0 <= x_bar)) {
        throw BadBracket("mixing_drift_solution: p0 must lie in (x*, xbar]");
    }
    double kappa = m.lambda * x_bar / (x_bar - x_star);
    return x_star + (p0 - x_star) * std::exp(-kappa * t);
}

// Interior effort on the mixing region, zero beyond xbar by construction.
inline double mixing_effort(double p, double x_star, double x_bar) {
    return x_star * (x_bar - p) / (x_bar - x_star);
}

}  // namespace trustgame
