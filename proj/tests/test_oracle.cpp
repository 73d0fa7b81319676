#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "trustgame/grid.hpp"
#include "trustgame/model.hpp"
#include "trustgame/oracle.hpp"
#include "trustgame/solver.hpp"

using namespace trustgame;

namespace {

ModelParams p0() { return validate_params(1, 1, 0.05, 0.5, 0.1, 1, 0.1); }

struct SupErr {
    double V = 0.0;
    double U = 0.0;
};

SupErr closed_form_error(const EquilibriumSolution& s, const ModelParams& m,
                         const GridModel& g, const GridValues& vals) {
    (void)m;
    SupErr e;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double p = g.p[i];
        e.V = std::max(e.V, std::fabs(vals.V[i] - s.value(p)));
        e.U = std::max(e.U, std::fabs(vals.U0[i] - s.agent_value(p, 0)));
        e.U = std::max(e.U, std::fabs(vals.U1[i] - s.agent_value(p, 1)));
    }
    return e;
}

}  // namespace

TEST_CASE("build_grid includes exact nodes and validates inputs") {
    ModelParams m = p0();
    auto s = solve_breakdown(m);
    REQUIRE(s.has_value());
    GridModel g = build_grid(m, 101, 0.01, solution_exact_nodes(*s));
    CHECK(g.p.front() == 0.0);
    CHECK(g.p.back() == 1.0);
    auto contains = [&](double x) {
        for (double v : g.p) {
            if (std::fabs(v - x) < 1e-12) return true;
        }
        return false;
    };
    CHECK(contains(m.p_dagger()));
    CHECK(contains(*s->cutoffs.x_low));
    CHECK(contains(*s->cutoffs.x_star));
    CHECK(contains(*s->cutoffs.x_bar));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.p[i] > g.p[i - 1]);

    CHECK_THROWS_AS(build_grid(m, 101, 0.3, {}), StepTooCoarse);  // lambda*dt = 0.15
    CHECK_THROWS_AS(build_grid(m, 50, 0.01, {}), StepTooCoarse);
}

TEST_CASE("hazard too coarse for the step is rejected at evaluation") {
    ModelParams m = p0();
    GridModel g = build_grid(m, 101, 0.01, {});
    GridProfile prof;
    std::size_t n = g.size();
    prof.eta.assign(n, 0.0);
    prof.sigma.assign(n, 60.0);  // sigma*dt = 0.6
    prof.alpha.assign(n, 1);
    prof.report_immediate_theta1.assign(n, 0);
    prof.report_false_hazard.assign(n, 0.0);
    CHECK_THROWS_AS(policy_evaluate(g, prof, m), StepTooCoarse);
}

TEST_CASE("stationary node keeps its own value under the operator") {
    // p = 0 with zero effort has zero drift; with zero flow the node's value
    // must map to exactly discount * value
    ModelParams m = p0();
    GridModel g = build_grid(m, 101, 0.01, {});
    EquilibriumSolution none = *solve_class(EqClass::NoInspection, m);
    GridProfile prof = profile_from_solution(none, g);
    GridValues in;
    in.U0.assign(g.size(), 1.0);
    in.U1.assign(g.size(), 1.0);
    in.V.assign(g.size(), 1.0);
    GridValues out;
    apply_evaluation_operator(g, prof, m, in, out);
    CHECK(out.V[g.i0] == doctest::Approx(g.discount).epsilon(1e-12));
}

TEST_CASE("policy evaluation matches the never-inspect closed form") {
    ModelParams m = p0();
    EquilibriumSolution none = *solve_class(EqClass::NoInspection, m);
    GridModel g = build_grid(m, 501, 4e-3, {});
    GridProfile prof = profile_from_solution(none, g);
    GridValues vals = policy_evaluate(g, prof, m);
    SupErr e = closed_form_error(none, m, g, vals);
    CHECK(e.V < 5e-3);
    CHECK(e.U < 2e-2);
    CHECK(vals.V[g.i0] == doctest::Approx(0.0).epsilon(1e-10));
    // no inspections leave no payoff channel for theta: the discrete values
    // may differ by discretization only
    double dmax = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        dmax = std::max(dmax, std::fabs(vals.U1[i] - vals.U0[i]));
    }
    CHECK(dmax < 5e-3);
}

TEST_CASE("policy evaluation reproduces each solved class and refines linearly") {
    ModelParams m = p0();
    SUBCASE("periodic") {
        EquilibriumSolution s = solve_periodic(m);
        GridModel g1 = build_grid(m, 501, 4e-3, solution_exact_nodes(s));
        GridProfile pr1 = profile_from_solution(s, g1);
        SupErr e1 = closed_form_error(s, m, g1, policy_evaluate(g1, pr1, m));
        CHECK(e1.V < 1e-2);
        CHECK(e1.U < 1e-2);
        GridModel g2 = build_grid(m, 1001, 2e-3, solution_exact_nodes(s));
        GridProfile pr2 = profile_from_solution(s, g2);
        SupErr e2 = closed_form_error(s, m, g2, policy_evaluate(g2, pr2, m));
        CHECK(std::max(e1.V, e1.U) / std::max(e2.V, e2.U) >= 1.5);
    }
    SUBCASE("breakdown") {
        auto s = solve_breakdown(m);
        REQUIRE(s.has_value());
        GridModel g = build_grid(m, 501, 4e-3, solution_exact_nodes(*s));
        GridProfile pr = profile_from_solution(*s, g);
        SupErr e = closed_form_error(*s, m, g, policy_evaluate(g, pr, m));
        CHECK(e.V < 1e-2);
        CHECK(e.U < 1e-2);
    }
    SUBCASE("recovery") {
        ModelParams m2 = m;
        m2.k = 0.02;
        auto s = solve_recovery(m2);
        REQUIRE(s.has_value());
        GridModel g = build_grid(m2, 501, 4e-3, solution_exact_nodes(*s));
        GridProfile pr = profile_from_solution(*s, g);
        SupErr e = closed_form_error(*s, m2, g, policy_evaluate(g, pr, m2));
        CHECK(e.V < 1e-2);
        CHECK(e.U < 1e-2);
    }
    SUBCASE("disclosure") {
        ModelParams m3 = m;
        m3.k = 0.02;
        m3.u = 2.0;
        auto s = solve_disclosure(m3);
        REQUIRE(s.has_value());
        GridModel g = build_grid(m3, 501, 4e-3, solution_exact_nodes(*s));
        GridProfile pr = profile_from_solution(*s, g);
        SupErr e = closed_form_error(*s, m3, g, policy_evaluate(g, pr, m3));
        CHECK(e.V < 2e-2);
        CHECK(e.U < 2e-2);
    }
}

TEST_CASE("evaluation operator is a contraction with modulus at most e^{-r dt}") {
    ModelParams m = p0();
    EquilibriumSolution s = solve_periodic(m);
    GridModel g = build_grid(m, 301, 0.01, solution_exact_nodes(s));
    GridProfile prof = profile_from_solution(s, g);
    GridValues x0;
    x0.U0.assign(g.size(), 0.0);
    x0.U1.assign(g.size(), 0.0);
    x0.V.assign(g.size(), 0.0);
    GridValues x1, x2;
    apply_evaluation_operator(g, prof, m, x0, x1);
    apply_evaluation_operator(g, prof, m, x1, x2);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        d1 = std::max(d1, std::fabs(x1.V[i] - x0.V[i]));
        d1 = std::max(d1, std::fabs(x1.U0[i] - x0.U0[i]));
        d1 = std::max(d1, std::fabs(x1.U1[i] - x0.U1[i]));
        d2 = std::max(d2, std::fabs(x2.V[i] - x1.V[i]));
        d2 = std::max(d2, std::fabs(x2.U0[i] - x1.U0[i]));
        d2 = std::max(d2, std::fabs(x2.U1[i] - x1.U1[i]));
    }
    CHECK(d2 <= g.discount * d1 * (1.0 + 1e-12));
}

TEST_CASE("closed forms are a near-fixed-point, improving under refinement") {
    ModelParams m = p0();
    auto s = solve_breakdown(m);
    REQUIRE(s.has_value());
    auto residual = [&](std::size_t n, double dt) {
        GridModel g = build_grid(m, n, dt, solution_exact_nodes(*s));
        GridProfile prof = profile_from_solution(*s, g);
        GridValues in;
        in.U0.resize(g.size());
        in.U1.resize(g.size());
        in.V.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            in.U0[i] = s->agent_value(g.p[i], 0);
            in.U1[i] = s->agent_value(g.p[i], 1);
            in.V[i] = s->value(g.p[i]);
        }
        GridValues out;
        apply_evaluation_operator(g, prof, m, in, out);
        double move = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            move = std::max(move, std::fabs(out.V[i] - in.V[i]));
            move = std::max(move, std::fabs(out.U0[i] - in.U0[i]));
            move = std::max(move, std::fabs(out.U1[i] - in.U1[i]));
        }
        double dp = 1.0 / static_cast<double>(n - 1);
        return move / (dt + dp);
    };
    double c1 = residual(501, 4e-3);
    double c2 = residual(1001, 2e-3);
    CHECK(c1 < 10.0 * std::max({m.H, m.L, m.u}));
    CHECK(c2 <= c1 * 1.05);
}

TEST_CASE("grid V is nondecreasing in p for equilibrium profiles") {
    ModelParams m = p0();
    auto s = solve_breakdown(m);
    REQUIRE(s.has_value());
    GridModel g = build_grid(m, 501, 4e-3, solution_exact_nodes(*s));
    GridProfile prof = profile_from_solution(*s, g);
    GridValues vals = policy_evaluate(g, prof, m);
    for (std::size_t i = 1; i < g.size(); ++i) {
        CHECK(vals.V[i] >= vals.V[i - 1] - 1e-9);
    }
    // D(p) = U1 - U0 nonnegative everywhere
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(vals.U1[i] - vals.U0[i] >= -1e-9);
    }
}

TEST_CASE("D approaches c/lambda on the mixing region under refinement") {
    ModelParams m = p0();
    auto s = solve_breakdown(m);
    REQUIRE(s.has_value());
    auto mixing_D_err = [&](std::size_t n, double dt) {
        GridModel g = build_grid(m, n, dt, solution_exact_nodes(*s));
        GridProfile prof = profile_from_solution(*s, g);
        GridValues vals = policy_evaluate(g, prof, m);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.p[i] >= *s->cutoffs.x_star && g.p[i] <= *s->cutoffs.x_bar) {
                err = std::max(err,
                               std::fabs(vals.U1[i] - vals.U0[i] - m.c / m.lambda));
            }
        }
        return err;
    };
    // the exact-event-probability step makes the flat mixing region nearly
    // exact already; both levels sit at interpolation-noise scale
    CHECK(mixing_D_err(501, 4e-3) < 1e-6);
    CHECK(mixing_D_err(1001, 2e-3) < 1e-6);
}

TEST_CASE("deviation gaps of an equilibrium profile sit below the bound") {
    ModelParams m = p0();
    auto s = solve_breakdown(m);
    REQUIRE(s.has_value());
    GridModel g = build_grid(m, 501, 4e-3, solution_exact_nodes(*s));
    GridProfile prof = profile_from_solution(*s, g);
    GridValues vals = policy_evaluate(g, prof, m);
    DeviationGaps gaps = deviation_gap(g, prof, vals, m);
    double dp = 1.0 / 500.0;
    double bound = 10.0 * (4e-3 + dp) * std::max({m.H, m.L, m.u});
    CHECK(gaps.agent_gap <= bound);
    CHECK(gaps.principal_gap <= bound);
}

TEST_CASE("negative control: suppressing all inspections leaves a fat principal gap") {
    ModelParams m = p0();
    auto s = solve_breakdown(m);
    REQUIRE(s.has_value());
    GridModel g = build_grid(m, 501, 4e-3, solution_exact_nodes(*s));
    GridProfile prof = profile_from_solution(*s, g);
    for (double& sg : prof.sigma) sg = 0.0;  // sigma == 0 with breakdown effort
    GridValues vals = policy_evaluate(g, prof, m);
    DeviationGaps gaps = deviation_gap(g, prof, vals, m);
    // the forgone inspection value near p_dagger is order one, far above any
    // refinement-scaled certification bound
    CHECK(gaps.principal_gap > 0.3);
}

TEST_CASE("negative control: forced effort in blind trust leaves a per-step agent gap") {
    ModelParams m = p0();
    auto s = solve_breakdown(m);
    REQUIRE(s.has_value());
    auto rate_gap = [&](std::size_t n, double dt) {
        GridModel g = build_grid(m, n, dt, solution_exact_nodes(*s));
        GridProfile prof = profile_from_solution(*s, g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.p[i] > *s->cutoffs.x_bar) prof.eta[i] = 1.0;
        }
        GridValues vals = policy_evaluate(g, prof, m);
        DeviationGaps gaps = deviation_gap(g, prof, vals, m);
        return gaps.agent_gap / dt;
    };
    // the one-step advantage is O(dt); its rate stays bounded away from zero
    double r1 = rate_gap(501, 4e-3);
    double r2 = rate_gap(1001, 2e-3);
    CHECK(r1 > 0.01);
    CHECK(r2 > 0.01);
    CHECK(std::fabs(r1 - r2) < 0.5 * std::max(r1, r2));
}
