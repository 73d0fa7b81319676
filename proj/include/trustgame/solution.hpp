#pragma once

#include <map>
#include <optional>
#include <string>

#include "trustgame/params.hpp"

namespace trustgame {

enum class EqClass { NoInspection, Periodic, Breakdown, Recovery, Disclosure };

const char* to_string(EqClass c);
std::optional<EqClass> eq_class_from_string(const std::string& name);

struct Cutoffs {
    std::optional<double> x_low;   // lower end of the inspection region
    std::optional<double> x_zero;  // where interior effort reaches 1 (classes iii / disclosure)
    std::optional<double> x_star;  // asymptote of the mixing drift
    std::optional<double> x_bar;   // upper end of the inspection region
};

struct InspectionAction {
    enum class Kind { None, Hazard, Immediate };
    Kind kind = Kind::None;
    double rate = 0.0;  // meaningful for Hazard
};

// One solved equilibrium construction: cutoffs, boundary values, and the
// piecewise closed-form policy/value maps. All evaluation methods are pure.
struct EquilibriumSolution {
    EqClass cls = EqClass::NoInspection;
    ModelParams params{};
    Cutoffs cutoffs{};
    std::optional<double> sigma_star;
    BoundaryValues bv{};
    // Residuals and auxiliary quantities recorded at solve time.
    std::map<std::string, double> diagnostics;

    double value(double p) const;                  // principal V(p)
    double effort(double p) const;                 // eta(p)
    InspectionAction inspection(double p) const;   // sigma-policy at p
    bool approve(double p) const;                  // alpha(p), tie at p_dagger -> approve
    double agent_value(double p, int theta) const; // U(p,theta)

    // Agent's value in the mixing region at theta = 0; theta = 1 adds c/lambda.
    double mixing_value_low_state() const;

    // Disclosure reporting rule. Zero for all other classes.
    double report_false_hazard_at_zero() const;          // rate of untrue reports at p = 0
    double report_prob(double p, int theta) const;       // atom on (0, x_low)
    double report_posterior() const;                     // posterior after any report (= x_zero)

    bool has_inspections() const { return cls != EqClass::NoInspection; }
};

struct PolicyAt {
    double V;
    double eta;
    InspectionAction inspection;
    int alpha;
};

PolicyAt eval_solution(const EquilibriumSolution& sol, double p);

}  // namespace trustgame
