#include "trustgame/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "trustgame/errors.hpp"
#include "trustgame/model.hpp"
#include "trustgame/rng.hpp"
#include "trustgame/roots.hpp"

namespace trustgame {

namespace {
constexpr double kHardCutTailBound = 1e-6;
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Transition: return "transition";
        case EventKind::Inspection: return "inspection";
        case EventKind::Report: return "report";
        case EventKind::RegionCross: return "region_cross";
        case EventKind::Absorb: return "absorb";
    }
    return "?";
}

namespace {

// integral of e^{-r t} over [t0, t1]
double disc_int(double r, double t0, double t1) {
    return (std::exp(-r * t0) - std::exp(-r * t1)) / r;
}

struct PathSim {
    const EquilibriumSolution& sol;
    const ModelParams& m;
    const SimConfig& cfg;
    PhiloxStream rng;
    double horizon;
    PathRecord rec;
    double t = 0.0;
    double p;
    int theta;
    bool done = false;

    PathSim(const EquilibriumSolution& s, const ModelParams& mm, const SimConfig& c,
            std::uint64_t stream, double p0, int theta0)
        : sol(s), m(mm), cfg(c), rng(c.seed, stream),
          horizon(c.resolved_horizon(mm)), p(p0), theta(theta0) {}

    void agent_flow(double flow, double t0, double t1) {
        rec.agent_payoff += flow * disc_int(m.r, t0, t1);
    }
    void principal_flow(double flow, double t0, double t1) {
        rec.principal_payoff += flow * disc_int(m.r, t0, t1);
    }

    void event_at(double time, EventKind kind, double p_before, double p_after) {
        rec.events.push_back(PathEvent{time, kind, p_before, p_after, theta});
    }

    void finish_at_horizon() {
        if (cfg.truncation == TruncationPolicy::HardCut) {
            double tail = std::exp(-m.r * horizon) * std::max(m.H, m.u) / m.r;
            if (tail > kHardCutTailBound) {
                throw HorizonTooShort(
                    "simulate_path: hard_cut tail bound violated before absorption");
            }
        } else {
            double disc = std::exp(-m.r * horizon);
            rec.agent_payoff += disc * sol.agent_value(p, theta);
            rec.principal_payoff += disc * sol.value(p);
        }
        t = horizon;
        rec.end_t = horizon;
        done = true;
    }

    void absorb() {
        event_at(t, EventKind::Absorb, p, p);
        rec.end_t = t;
        rec.absorbed = true;
        done = true;
    }

    void inspect_now(double p_before) {
        rec.inspections_count += 1;
        rec.principal_payoff -= m.k * std::exp(-m.r * t);
        p = static_cast<double>(theta);
        event_at(t, EventKind::Inspection, p_before, p);
    }

    // Zero-effort decay from the current p down to p_target under approval.
    // Returns false when the horizon cut the segment short.
    bool decay_segment(double p_target) {
        double tau = std::log(p / p_target) / m.lambda;
        double t_end = std::min(t + tau, horizon);
        bool cut = t + tau > horizon;
        agent_flow(m.u, t, t_end);  // approval utility, no effort
        double t_flip = t_end;
        if (theta == 1) {
            double dt_flip = rng.exponential(m.lambda);
            if (t + dt_flip < t_end) t_flip = t + dt_flip;
        }
        principal_flow(theta == 1 ? m.H : -m.L, t, t_flip);
        if (t_flip < t_end) {
            double p_at = p * std::exp(-m.lambda * (t_flip - t));
            theta = 0;
            event_at(t_flip, EventKind::Transition, p_at, p_at);
            principal_flow(-m.L, t_flip, t_end);
        }
        rec.time_blind_trust += t_end - t;
        p = cut ? p * std::exp(-m.lambda * (t_end - t)) : p_target;
        t = t_end;
        if (cut) finish_at_horizon();
        return !cut;
    }

    // Interior-effort stretch with a constant inspection hazard, entered at
    // p_entry; transitions are thinned against the bound lambda. Leaves the
    // path right after the inspection (p set to the revealed state).
    void mixing_segment(double p_entry) {
        double xs = *sol.cutoffs.x_star;
        double xb = *sol.cutoffs.x_bar;
        double kappa = m.lambda * xb / (xb - xs);
        double t0 = t;
        double t_ins = t0 + rng.exponential(*sol.sigma_star);
        double t_end = std::min(t_ins, horizon);

        // the effort path is deterministic; its discounted cost is integrated
        // numerically
        double cost = integrate(
            [&](double s) {
                double ps = xs + (p_entry - xs) * std::exp(-kappa * s);
                return std::exp(-m.r * (t0 + s)) * mixing_effort(ps, xs, xb);
            },
            0.0, t_end - t0, 1e-10);
        rec.agent_payoff -= m.c * cost;
        agent_flow(m.u, t0, t_end);

        double t_flow = t0;    // last flow-split point (accepted flips only)
        double t_cursor = t0;  // thinning clock advances through every candidate
        while (true) {
            double t_cand = t_cursor + rng.exponential(m.lambda);
            if (t_cand >= t_end) break;
            t_cursor = t_cand;
            double p_at = xs + (p_entry - xs) * std::exp(-kappa * (t_cand - t0));
            double eta = mixing_effort(p_at, xs, xb);
            double accept = theta == 1 ? (1.0 - eta) : eta;
            if (rng.uniform() < accept) {
                principal_flow(theta == 1 ? m.H : -m.L, t_flow, t_cand);
                theta = 1 - theta;
                event_at(t_cand, EventKind::Transition, p_at, p_at);
                t_flow = t_cand;
            }
        }
        principal_flow(theta == 1 ? m.H : -m.L, t_flow, t_end);
        rec.time_inspection_region += t_end - t0;
        p = xs + (p_entry - xs) * std::exp(-kappa * (t_end - t0));
        t = t_end;
        if (t_ins > horizon) {
            finish_at_horizon();
            return;
        }
        inspect_now(p);
    }

    // Full-effort climb toward the deterministic inspection at x_low. Entry
    // is p = 0 on the equilibrium path.
    void recovery_leg() {
        double xl = *sol.cutoffs.x_low;
        double p_entry = p;
        double tau = std::log((1.0 - p_entry) / (1.0 - xl)) / m.lambda;
        double t_end = std::min(t + tau, horizon);
        bool cut = t + tau > horizon;
        agent_flow(-m.c, t, t_end);  // no approval, full effort
        if (theta == 0) {
            double dt_flip = rng.exponential(m.lambda);
            if (t + dt_flip < t_end) {
                double p_at = 1.0 - (1.0 - p_entry) * std::exp(-m.lambda * dt_flip);
                theta = 1;
                event_at(t + dt_flip, EventKind::Transition, p_at, p_at);
            }
        }
        rec.time_blind_distrust += t_end - t;
        p = cut ? 1.0 - (1.0 - p_entry) * std::exp(-m.lambda * (t_end - t)) : xl;
        t = t_end;
        if (cut) {
            finish_at_horizon();
            return;
        }
        inspect_now(xl);
    }

    // Disclosure: reputation is pinned at zero until a report (true on the
    // state transition, or untrue at the misreporting hazard) moves it to
    // x_zero, where the principal inspects at once.
    void zero_leg() {
        double x0 = *sol.cutoffs.x_zero;
        double false_rate = sol.report_false_hazard_at_zero();
        while (!done) {
            double t_trans = t + rng.exponential(m.lambda);
            double t_false = t + rng.exponential(false_rate);
            double t_next = std::min(t_trans, t_false);
            double t_end = std::min(t_next, horizon);
            agent_flow(-m.c, t, t_end);
            rec.time_blind_distrust += t_end - t;
            if (t_next > horizon) {
                finish_at_horizon();
                return;
            }
            t = t_next;
            if (t_trans <= t_false) {
                theta = 1;
                event_at(t, EventKind::Transition, 0.0, 0.0);
            }
            event_at(t, EventKind::Report, 0.0, x0);
            p = x0;
            inspect_now(x0);
            if (p == 1.0) return;  // revealed high: back to blind trust
        }
    }

    void fail_state() {
        // reached p = 0 after a failed inspection (or started there)
        switch (sol.cls) {
            case EqClass::Periodic:
            case EqClass::Breakdown:
                absorb();
                return;
            case EqClass::Recovery:
                recovery_leg();
                return;
            case EqClass::Disclosure:
                zero_leg();
                return;
            default:
                absorb();
                return;
        }
    }

    void run_no_inspection() {
        double pd = m.p_dagger();
        if (p <= pd) {
            absorb();
            return;
        }
        if (!decay_segment(pd)) return;
        event_at(t, EventKind::RegionCross, pd, pd);
        absorb();
    }

    void run() {
        if (sol.cls == EqClass::NoInspection) {
            run_no_inspection();
            return;
        }
        double xb = *sol.cutoffs.x_bar;
        double xl = *sol.cutoffs.x_low;
        while (!done) {
            if (p == 0.0) {
                fail_state();
                continue;
            }
            if (p > xb) {
                if (!decay_segment(xb)) return;
                event_at(t, EventKind::RegionCross, xb, xb);
                continue;
            }
            if (p < xl) {
                // blind distrust with zero effort: nothing ever happens again
                if (sol.cls == EqClass::Periodic || sol.cls == EqClass::Breakdown) {
                    absorb();
                    return;
                }
                recovery_leg();
                continue;
            }
            InspectionAction a = sol.inspection(p);
            if (a.kind == InspectionAction::Kind::Immediate) {
                inspect_now(p);
                continue;
            }
            mixing_segment(p);
        }
    }
};

}  // namespace

PathRecord simulate_path(const EquilibriumSolution& sol, const ModelParams& m,
                         const SimConfig& cfg, std::uint64_t path_index,
                         double p0, int theta0) {
    PathSim sim(sol, m, cfg, path_index, p0, theta0);
    sim.run();
    return std::move(sim.rec);
}

void replay_payoffs(const PathRecord& rec, const EquilibriumSolution& sol,
                    const ModelParams& m, const SimConfig& cfg, double p0,
                    int theta0, double& agent, double& principal) {
    agent = 0.0;
    principal = 0.0;
    double t = 0.0;
    double p = p0;
    int theta = theta0;
    double horizon = cfg.resolved_horizon(m);
    bool absorbed = false;

    auto integrate_segment = [&](double t0, double t1) {
        if (t1 <= t0) return;
        if (sol.has_inspections() && sol.cutoffs.x_star && p > *sol.cutoffs.x_star &&
            p <= *sol.cutoffs.x_bar) {
            double xs = *sol.cutoffs.x_star;
            double xb = *sol.cutoffs.x_bar;
            double kappa = m.lambda * xb / (xb - xs);
            double pe = p;
            double cost = integrate(
                [&](double s) {
                    double ps = xs + (pe - xs) * std::exp(-kappa * s);
                    return std::exp(-m.r * (t0 + s)) * mixing_effort(ps, xs, xb);
                },
                0.0, t1 - t0, 1e-10);
            agent += m.u * disc_int(m.r, t0, t1) - m.c * cost;
            principal += (theta == 1 ? m.H : -m.L) * disc_int(m.r, t0, t1);
            p = xs + (pe - xs) * std::exp(-kappa * (t1 - t0));
            return;
        }
        bool approved = sol.approve(p);
        double eta = sol.effort(p);
        double agent_rate = (approved ? m.u : 0.0) - eta * m.c;
        agent += agent_rate * disc_int(m.r, t0, t1);
        principal += (approved ? (theta == 1 ? m.H : -m.L) : 0.0) *
                     disc_int(m.r, t0, t1);
        bool pinned_at_zero = sol.cls == EqClass::Disclosure && p == 0.0;
        if (eta >= 1.0 && p < 1.0 && !pinned_at_zero) {
            p = 1.0 - (1.0 - p) * std::exp(-m.lambda * (t1 - t0));
        } else if (eta <= 0.0 && p > 0.0) {
            p = p * std::exp(-m.lambda * (t1 - t0));
        }
    };

    for (const PathEvent& ev : rec.events) {
        integrate_segment(t, ev.t);
        t = ev.t;
        switch (ev.kind) {
            case EventKind::Transition:
                theta = 1 - theta;
                break;
            case EventKind::Inspection:
                principal -= m.k * std::exp(-m.r * t);
                p = ev.p_after;
                break;
            case EventKind::Report:
            case EventKind::RegionCross:
                p = ev.p_after;
                break;
            case EventKind::Absorb:
                absorbed = true;
                break;
        }
    }
    if (!absorbed) {
        integrate_segment(t, horizon);
        if (cfg.truncation == TruncationPolicy::AnalyticTail) {
            double disc = std::exp(-m.r * horizon);
            agent += disc * sol.agent_value(p, theta);
            principal += disc * sol.value(p);
        }
    }
}

ValueEstimates estimate_values(const EquilibriumSolution& sol, const ModelParams& m,
                               const SimConfig& cfg) {
    ValueEstimates est;
    est.n_paths = cfg.n_paths;
    auto run = [&](double p0, int theta0, std::uint64_t stream_base, Estimate& agent,
                   Estimate& principal) {
        double sa = 0.0, sa2 = 0.0, sp = 0.0, sp2 = 0.0;
        for (long i = 0; i < cfg.n_paths; ++i) {
            PathRecord rec = simulate_path(sol, m, cfg,
                                           stream_base + static_cast<std::uint64_t>(i),
                                           p0, theta0);
            sa += rec.agent_payoff;
            sa2 += rec.agent_payoff * rec.agent_payoff;
            sp += rec.principal_payoff;
            sp2 += rec.principal_payoff * rec.principal_payoff;
        }
        double n = static_cast<double>(cfg.n_paths);
        agent.mean = sa / n;
        principal.mean = sp / n;
        double va = std::max(0.0, sa2 / n - agent.mean * agent.mean);
        double vp = std::max(0.0, sp2 / n - principal.mean * principal.mean);
        agent.se = std::sqrt(va / n);
        principal.se = std::sqrt(vp / n);
    };
    run(1.0, 1, 0, est.U11, est.V1);
    run(0.0, 0, static_cast<std::uint64_t>(cfg.n_paths), est.U00, est.V0);
    return est;
}

CycleStatistics cycle_statistics(const std::vector<PathRecord>& records) {
    CycleStatistics cs;
    double inter_sum = 0.0;
    long inter_n = 0;
    long passed = 0;
    double recovery_sum = 0.0;
    long recovery_n = 0;
    double t_blind = 0.0, t_insp = 0.0, t_dis = 0.0;
    long absorbed = 0;
    for (const PathRecord& rec : records) {
        double last_ins = -1.0;
        double last_fail = -1.0;
        for (const PathEvent& ev : rec.events) {
            if (ev.kind == EventKind::Report) cs.n_reports += 1;
            if (ev.kind != EventKind::Inspection) continue;
            cs.n_inspections += 1;
            if (ev.p_after == 1.0) passed += 1;
            if (last_ins >= 0.0) {
                inter_sum += ev.t - last_ins;
                inter_n += 1;
            }
            last_ins = ev.t;
            if (last_fail >= 0.0) {
                recovery_sum += ev.t - last_fail;
                recovery_n += 1;
            }
            last_fail = ev.p_after == 0.0 ? ev.t : -1.0;
        }
        t_blind += rec.time_blind_trust;
        t_insp += rec.time_inspection_region;
        t_dis += rec.time_blind_distrust;
        if (rec.absorbed) absorbed += 1;
    }
    double n = records.empty() ? 1.0 : static_cast<double>(records.size());
    if (cs.n_inspections > 0) {
        cs.fraction_inspections_passed =
            static_cast<double>(passed) / static_cast<double>(cs.n_inspections);
    }
    if (inter_n > 0) cs.mean_inter_inspection_time = inter_sum / inter_n;
    if (recovery_n > 0) cs.mean_recovery_cycle = recovery_sum / recovery_n;
    cs.mean_time_blind_trust = t_blind / n;
    cs.mean_time_inspection_region = t_insp / n;
    cs.mean_time_blind_distrust = t_dis / n;
    cs.breakdown_frequency = static_cast<double>(absorbed) / n;
    if (t_dis > 0.0) {
        cs.report_rate_at_zero = static_cast<double>(cs.n_reports) / t_dis;
    }
    return cs;
}

std::vector<MixingDwell> mixing_inspection_dwells(const std::vector<PathRecord>& records,
                                                  const EquilibriumSolution& sol) {
    std::vector<MixingDwell> dwells;
    if (!sol.cutoffs.x_bar || !sol.sigma_star) return dwells;
    double xb = *sol.cutoffs.x_bar;
    for (const PathRecord& rec : records) {
        double entry = -1.0;
        for (const PathEvent& ev : rec.events) {
            if (ev.kind == EventKind::RegionCross && ev.p_after == xb) {
                entry = ev.t;
            } else if (ev.kind == EventKind::Inspection && entry >= 0.0) {
                dwells.push_back(MixingDwell{entry, ev.t - entry});
                entry = -1.0;
            }
        }
    }
    return dwells;
}

}  // namespace trustgame
