#pragma once

#include <optional>
#include <vector>

#include "trustgame/params.hpp"
#include "trustgame/solution.hpp"

namespace trustgame {

// Root of the rearranged smooth-pasting condition for the zero-effort
// construction: the unique x_bar in (p_dagger, 1), or nullopt when the
// inspection cost exceeds the viability bound and the principal never
// inspects absent effort.
std::optional<double> solve_x_bar_no_effort(const ModelParams& m);

// Bracket whose root in (p_dagger, 1) is x_bar; exposed for residual checks.
// At x = 1 it evaluates to exactly -k.
double sp_bracket_no_effort(double x_bar, const ModelParams& m);

// Same smooth-pasting bracket generalized to post-inspection low value
// V(0) = w (w = 0 reproduces sp_bracket_no_effort).
double sp_bracket_with_floor(double x_bar, double w, const ModelParams& m);

// V(1) implied by the blind-trust ODE and value matching at x_bar, given
// V(0) = w.
double v1_given_x_bar(double x_bar, double w, const ModelParams& m);

enum class MixRegime { Breakdown, Recovery, Disclosure };

struct SigmaStarResult {
    double sigma;
    double U11;
    double U00;
    double h_residual;
    int sign_changes = 0;  // of h over the scanned range; > 1 means multiplicity
};

// Agent post-inspection values implied by a constant inspection rate sigma on
// the mixing region, per regime. x_low is required for Recovery only.
void agent_values_at_rate(double sigma, double x_bar, std::optional<double> x_low,
                          MixRegime regime, const ModelParams& m, double& U11,
                          double& U00);

// Auxiliary fixed-point function; sigma* is its root.
double sigma_fixed_point_h(double sigma, double x_bar, std::optional<double> x_low,
                           MixRegime regime, const ModelParams& m);

// The inspection rate that makes the agent exactly indifferent on the mixing
// region, or nullopt when no rate can (u below the relevant threshold).
std::optional<SigmaStarResult> sigma_star_fixed_point(double x_bar,
                                                      std::optional<double> x_low,
                                                      MixRegime regime,
                                                      const ModelParams& m);

// Class (i): zero effort with a deterministic inspection cycle, degrading to
// NoInspection when no x_bar root exists.
EquilibriumSolution solve_periodic(const ModelParams& m);

// Class (ii): interior effort and random inspections; permanent shutdown at
// p = 0.
std::optional<EquilibriumSolution> solve_breakdown(const ModelParams& m);

// Class (iii): adds the full-effort recovery phase after failure.
std::optional<EquilibriumSolution> solve_recovery(const ModelParams& m);

// Cheap-talk variant: reports move the posterior to x_zero and trigger an
// immediate inspection.
std::optional<EquilibriumSolution> solve_disclosure(const ModelParams& m);

std::optional<EquilibriumSolution> solve_class(EqClass cls, const ModelParams& m);

// Residuals of the two-equation recovery cutoff system.
double recovery_xU_residual(double x_low, double x_bar, const ModelParams& m);
double recovery_xO_residual(double x_low, double x_bar, const ModelParams& m);

struct Thresholds {
    std::optional<double> u_bar_P;     // periodic exists for u <= u_bar_P
    std::optional<double> u_low_B;     // breakdown exists for u >= u_low_B
    std::optional<double> u_low_R_r;   // recovery bound, e^{-r tau} variant
    std::optional<double> u_low_R_rl;  // recovery bound, e^{-(r+lambda) tau} variant
    bool endpoint_warning = false;     // a bisection endpoint bound the search
};

// The u-thresholds at inspection cost k. `base.u` is ignored.
Thresholds thresholds(const ModelParams& base, double k);

struct ExistenceCell {
    double k = 0.0;
    double u = 0.0;
    bool periodic = false;
    bool breakdown = false;
    bool recovery = false;
    bool disclosure = false;
    Thresholds th;
};

// One cell per (k,u) pair; solver failures become false flags. The
// EffortNeverWorthwhile restriction is intentionally not applied here: the
// existence theory quantifies over all u > 0.
std::vector<ExistenceCell> existence_map(const ModelParams& base,
                                         const std::vector<double>& k_grid,
                                         const std::vector<double>& u_grid);

}  // namespace trustgame
