#include "trustgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trustgame/errors.hpp"
#include "trustgame/model.hpp"

namespace trustgame {

namespace {

enum class NodeKind : std::uint8_t { Regular, Immediate, Report };

// weight on events arriving before dt, with the arrival time discounted
// exactly; w_stay carries the no-event branch
inline void step_weights(double r, double R, double dt, double& w_event,
                         double& w_stay) {
    double e = std::exp(-(r + R) * dt);
    w_event = (1.0 - e) / (r + R);
    w_stay = e;
}

// Per-node constants of the evaluation operator. Event arrivals within a step
// use exact exponential probabilities with exact discounting of the arrival
// time: for total event rate R, a jump at the first arrival contributes
// rate_e * (1 - e^{-(r+R)dt}) / (r+R), the no-event branch carries weight
// e^{-(r+R)dt}, and flow accrues until the first arrival. This is exact
// wherever continuation values are flat in p. All weights depend only on the
// profile, so they are premultiplied here and the sweep itself is free of
// transcendentals.
struct SweepPlan {
    std::vector<NodeKind> kind;
    std::vector<std::size_t> dest;  // lower interpolation index after drift
    std::vector<double> w_lo;       // weight on dest (1-w on dest+1)
    std::vector<double> fu0, fu1;   // flow_u * w_event per state
    std::vector<double> fv;         // flow_v * w_event (principal)
    std::vector<double> a0, a1;     // transition rate * w_event per state
    std::vector<double> s0, s1;     // inspection hazard * w_event per state
    std::vector<double> sv;         // inspection hazard * w_event (principal)
    std::vector<double> e0, e1, ev; // no-event weights
    double jump_p = 0.0;            // posterior after a report
    std::size_t i0 = 0, i1 = 0;
    double dt = 0.0;
    double r = 0.0;
    double k = 0.0;
    // raw profile data kept for the deviation audit
    std::vector<double> eta;
    std::vector<double> sigma;
    std::vector<std::uint8_t> alpha;
};

SweepPlan make_plan(const GridModel& g, const GridProfile& prof, const ModelParams& m) {
    std::size_t n = g.size();
    SweepPlan plan;
    plan.kind.resize(n);
    plan.dest.resize(n);
    plan.w_lo.resize(n);
    plan.fu0.assign(n, 0.0);
    plan.fu1.assign(n, 0.0);
    plan.fv.assign(n, 0.0);
    plan.a0.assign(n, 0.0);
    plan.a1.assign(n, 0.0);
    plan.s0.assign(n, 0.0);
    plan.s1.assign(n, 0.0);
    plan.sv.assign(n, 0.0);
    plan.e0.assign(n, 0.0);
    plan.e1.assign(n, 0.0);
    plan.ev.assign(n, 0.0);
    plan.jump_p = prof.report_jump_p;
    plan.i0 = g.i0;
    plan.i1 = g.i1;
    plan.dt = g.dt;
    plan.r = m.r;
    plan.k = m.k;
    plan.eta = prof.eta;
    plan.sigma = prof.sigma;
    plan.alpha = prof.alpha;
    for (std::size_t i = 0; i < n; ++i) {
        double p = g.p[i];
        double eta = prof.eta[i];
        double sigma = prof.sigma[i];
        bool report = prof.has_reports && prof.report_immediate_theta1[i];
        if (std::isinf(sigma)) {
            plan.kind[i] = NodeKind::Immediate;
            plan.dest[i] = i;
            plan.w_lo[i] = 1.0;
            continue;
        }
        if (!(sigma * g.dt < 0.5)) {
            throw StepTooCoarse("policy_evaluate: hazard*dt must stay below 0.5");
        }
        plan.kind[i] = report ? NodeKind::Report : NodeKind::Regular;
        double rate0 = m.lambda * eta;          // theta 0 -> 1
        double rate1 = m.lambda * (1.0 - eta);  // theta 1 -> 0
        double flow_u = (prof.alpha[i] ? m.u : 0.0) - eta * m.c;
        double flow_v = prof.alpha[i] ? flow_value(p, m) : 0.0;
        if (report) {
            // reputation pinned while reports reveal the state; the only U
            // event is the theta flip, the only V event is a report arrival
            plan.dest[i] = i;
            plan.w_lo[i] = 1.0;
            double w, e;
            step_weights(m.r, rate0, g.dt, w, e);
            plan.fu0[i] = flow_u * w;
            plan.a0[i] = rate0 * w;
            plan.e0[i] = e;
            double report_rate = rate0 + prof.report_false_hazard[i];
            double wv, evv;
            step_weights(m.r, report_rate, g.dt, wv, evv);
            plan.fv[i] = flow_v * wv;
            plan.sv[i] = report_rate * wv;
            plan.ev[i] = evv;
            continue;
        }
        double w0, e0, w1, e1, wv, ev;
        step_weights(m.r, rate0 + sigma, g.dt, w0, e0);
        step_weights(m.r, rate1 + sigma, g.dt, w1, e1);
        step_weights(m.r, sigma, g.dt, wv, ev);
        plan.fu0[i] = flow_u * w0;
        plan.fu1[i] = flow_u * w1;
        plan.fv[i] = flow_v * wv;
        plan.a0[i] = rate0 * w0;
        plan.a1[i] = rate1 * w1;
        plan.s0[i] = sigma * w0;
        plan.s1[i] = sigma * w1;
        plan.sv[i] = sigma * wv;
        plan.e0[i] = e0;
        plan.e1[i] = e1;
        plan.ev[i] = ev;
        double pdest = p + m.lambda * (eta - p) * g.dt;
        pdest = std::clamp(pdest, 0.0, 1.0);
        std::size_t j = g.locate(pdest);
        double cell = g.p[j + 1] - g.p[j];
        plan.dest[i] = j;
        plan.w_lo[i] = cell > 0.0 ? (g.p[j + 1] - pdest) / cell : 1.0;
    }
    return plan;
}

inline double interp(const std::vector<double>& v, std::size_t j, double w) {
    return w * v[j] + (1.0 - w) * v[j + 1];
}

// one Jacobi sweep; returns the sup-norm change
double sweep_once(const GridModel& g, const SweepPlan& plan, const GridValues& in,
                  GridValues& out) {
    std::size_t n = g.size();
    double U0_at_0 = in.U0[plan.i0];
    double U1_at_1 = in.U1[plan.i1];
    double V_at_0 = in.V[plan.i0];
    double V_at_1 = in.V[plan.i1];
    double phi_jump = plan.jump_p * V_at_1 + (1.0 - plan.jump_p) * V_at_0 - plan.k;
    double delta = 0.0;
    const double* pg = g.p.data();
    for (std::size_t i = 0; i < n; ++i) {
        double u0n, u1n, vn;
        switch (plan.kind[i]) {
            case NodeKind::Immediate: {
                double p = pg[i];
                u0n = U0_at_0;
                u1n = U1_at_1;
                vn = p * V_at_1 + (1.0 - p) * V_at_0 - plan.k;
                break;
            }
            case NodeKind::Report: {
                u0n = plan.fu0[i] + plan.a0[i] * U1_at_1 + plan.e0[i] * in.U0[i];
                u1n = U1_at_1;
                vn = plan.fv[i] + plan.sv[i] * phi_jump + plan.ev[i] * in.V[i];
                break;
            }
            default: {
                std::size_t j = plan.dest[i];
                double w = plan.w_lo[i];
                double i0v = interp(in.U0, j, w);
                double i1v = interp(in.U1, j, w);
                double ivv = interp(in.V, j, w);
                double p = pg[i];
                double phi = p * V_at_1 + (1.0 - p) * V_at_0 - plan.k;
                u0n = plan.fu0[i] + plan.a0[i] * i1v + plan.s0[i] * U0_at_0 +
                      plan.e0[i] * i0v;
                u1n = plan.fu1[i] + plan.a1[i] * i0v + plan.s1[i] * U1_at_1 +
                      plan.e1[i] * i1v;
                vn = plan.fv[i] + plan.sv[i] * phi + plan.ev[i] * ivv;
                break;
            }
        }
        delta = std::max(delta, std::fabs(u0n - in.U0[i]));
        delta = std::max(delta, std::fabs(u1n - in.U1[i]));
        delta = std::max(delta, std::fabs(vn - in.V[i]));
        out.U0[i] = u0n;
        out.U1[i] = u1n;
        out.V[i] = vn;
    }
    return delta;
}

}  // namespace

void apply_evaluation_operator(const GridModel& g, const GridProfile& prof,
                               const ModelParams& m, const GridValues& in,
                               GridValues& out) {
    SweepPlan plan = make_plan(g, prof, m);
    out.U0.resize(g.size());
    out.U1.resize(g.size());
    out.V.resize(g.size());
    sweep_once(g, plan, in, out);
}

GridValues policy_evaluate(const GridModel& g, const GridProfile& prof,
                           const ModelParams& m, double tol, std::size_t max_iter) {
    SweepPlan plan = make_plan(g, prof, m);
    std::size_t n = g.size();
    GridValues cur;
    cur.U0.assign(n, 0.0);
    cur.U1.assign(n, 0.0);
    cur.V.assign(n, 0.0);
    GridValues next = cur;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        double d = sweep_once(g, plan, cur, next);
        std::swap(cur, next);
        if (d < tol) {
            cur.iterations = it;
            cur.final_delta = d;
            return cur;
        }
    }
    throw NoConvergence("policy_evaluate: iteration cap reached");
}

DeviationGaps deviation_gap(const GridModel& g, const GridProfile& prof,
                            const GridValues& vals, const ModelParams& m) {
    SweepPlan plan = make_plan(g, prof, m);
    std::size_t n = g.size();
    DeviationGaps gaps;
    const double menu[3] = {0.0, 0.5, 1.0};
    for (std::size_t i = 0; i < n; ++i) {
        double p = g.p[i];
        double phi = p * vals.V[plan.i1] + (1.0 - p) * vals.V[plan.i0] - plan.k;
        if (plan.kind[i] == NodeKind::Immediate) {
            // zero-dwell: the one-step audit is vacuous; surface the effort
            // restriction at inspected reputations separately
            double D = vals.U1[plan.i1] - vals.U0[plan.i0];
            double slope = m.lambda * D - m.c;
            for (double e : menu) {
                double adv = (e - plan.eta[i]) * slope * g.dt;
                gaps.flagged_agent_gap_immediate =
                    std::max(gaps.flagged_agent_gap_immediate, adv);
            }
            // the principal could deviate by waiting one step
            double pdest = p + m.lambda * (plan.eta[i] - p) * g.dt;
            pdest = std::clamp(pdest, 0.0, 1.0);
            std::size_t j = g.locate(pdest);
            double cell = g.p[j + 1] - g.p[j];
            double w = cell > 0.0 ? (g.p[j + 1] - pdest) / cell : 1.0;
            double wv, ev;
            step_weights(plan.r, 0.0, plan.dt, wv, ev);
            double wait = flow_value_pos(p, m) * wv + ev * interp(vals.V, j, w);
            gaps.principal_gap = std::max(gaps.principal_gap, wait - vals.V[i]);
            continue;
        }
        std::size_t j = plan.dest[i];
        double wl = plan.w_lo[i];
        bool report = plan.kind[i] == NodeKind::Report;
        double i0v, i1v, ivv;
        if (report) {
            i0v = vals.U0[i];
            i1v = vals.U1[plan.i1];
            ivv = vals.V[i];
        } else {
            i0v = interp(vals.U0, j, wl);
            i1v = interp(vals.U1, j, wl);
            ivv = interp(vals.V, j, wl);
        }
        double sg = plan.sigma[i];
        double alpha_u = plan.alpha[i] ? m.u : 0.0;
        // agent: own effort moves the transition rate and the cost, not the
        // believed drift
        auto q0 = [&](double e) {
            double rate = m.lambda * e;
            double w, stay;
            step_weights(plan.r, rate + sg, plan.dt, w, stay);
            return (alpha_u - e * m.c) * w +
                   w * (rate * i1v + sg * vals.U0[plan.i0]) + stay * i0v;
        };
        auto q1 = [&](double e) {
            double rate = m.lambda * (1.0 - e);
            double w, stay;
            step_weights(plan.r, rate + sg, plan.dt, w, stay);
            return (alpha_u - e * m.c) * w +
                   w * (rate * i0v + sg * vals.U1[plan.i1]) + stay * i1v;
        };
        double base0 = q0(plan.eta[i]);
        double base1 = q1(plan.eta[i]);
        for (double e : menu) {
            gaps.agent_gap = std::max(gaps.agent_gap, q0(e) - base0);
            // theta = 1 at a report node is zero-dwell (the report fires at once)
            if (!report) {
                gaps.agent_gap = std::max(gaps.agent_gap, q1(e) - base1);
            }
        }
        // principal: inspect now versus wait one step with the better alpha
        double wv, ev;
        step_weights(plan.r, 0.0, plan.dt, wv, ev);
        double wait = flow_value_pos(p, m) * wv + ev * ivv;
        double best = std::max(phi, wait);
        gaps.principal_gap = std::max(gaps.principal_gap, best - vals.V[i]);
    }
    return gaps;
}

}  // namespace trustgame
