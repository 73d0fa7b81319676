#pragma once

#include <cstdint>
#include <vector>

#include "trustgame/params.hpp"
#include "trustgame/solution.hpp"

namespace trustgame {

enum class TruncationPolicy { AnalyticTail, HardCut };

struct SimConfig {
    long n_paths = 10000;
    double horizon = 0.0;  // 0 resolves to 20/r
    std::uint64_t seed = 0;
    bool record_paths = false;
    TruncationPolicy truncation = TruncationPolicy::AnalyticTail;

    double resolved_horizon(const ModelParams& m) const {
        return horizon > 0.0 ? horizon : 20.0 / m.r;
    }
};

enum class EventKind { Transition, Inspection, Report, RegionCross, Absorb };

const char* to_string(EventKind k);

struct PathEvent {
    double t;
    EventKind kind;
    double p_before;
    double p_after;
    int theta;  // state right after the event (left limits drive predicates)
};

struct PathRecord {
    std::vector<PathEvent> events;
    double agent_payoff = 0.0;
    double principal_payoff = 0.0;
    long inspections_count = 0;
    double time_blind_trust = 0.0;
    double time_inspection_region = 0.0;
    double time_blind_distrust = 0.0;
    double end_t = 0.0;  // horizon or absorption time
    bool absorbed = false;
};

// One exact-event path from (p0, theta0). Deterministic in (cfg.seed,
// path_index).
PathRecord simulate_path(const EquilibriumSolution& sol, const ModelParams& m,
                         const SimConfig& cfg, std::uint64_t path_index,
                         double p0, int theta0);

// Recomputes both players' discounted payoffs purely from the event log; an
// independent codepath used to audit the per-segment accumulators.
void replay_payoffs(const PathRecord& rec, const EquilibriumSolution& sol,
                    const ModelParams& m, const SimConfig& cfg, double p0,
                    int theta0, double& agent, double& principal);

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
};

struct ValueEstimates {
    Estimate V0, V1, U11, U00;
    long n_paths = 0;
};

// Sample means of discounted payoffs started at (1,1) and (0,0).
ValueEstimates estimate_values(const EquilibriumSolution& sol, const ModelParams& m,
                               const SimConfig& cfg);

struct CycleStatistics {
    long n_inspections = 0;
    double mean_inter_inspection_time = 0.0;
    double fraction_inspections_passed = 0.0;
    double mean_time_blind_trust = 0.0;
    double mean_time_inspection_region = 0.0;
    double mean_time_blind_distrust = 0.0;
    double breakdown_frequency = 0.0;     // fraction of paths ending absorbed
    double mean_recovery_cycle = 0.0;     // failure at x_low to the next inspection
    long n_reports = 0;
    double report_rate_at_zero = 0.0;     // reports per unit time spent at p=0
};

CycleStatistics cycle_statistics(const std::vector<PathRecord>& records);

// Dwell times in the mixing region from entry at x_bar to the inspection;
// exponential(sigma*) by construction. Entry times are kept so that
// horizon-truncated samples can be handled exactly in distributional checks.
struct MixingDwell {
    double entry;
    double dwell;
};

std::vector<MixingDwell> mixing_inspection_dwells(const std::vector<PathRecord>& records,
                                                  const EquilibriumSolution& sol);

}  // namespace trustgame
