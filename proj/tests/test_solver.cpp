#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "trustgame/model.hpp"
#include "trustgame/solver.hpp"

using namespace trustgame;

namespace {

ModelParams p0() { return validate_params(1, 1, 0.05, 0.5, 0.1, 1, 0.1); }

// central finite-difference slope of the principal value map
double fd_slope(const EquilibriumSolution& s, double p, double h = 1e-6) {
    return (s.value(p + h) - s.value(p - h)) / (2.0 * h);
}

double one_sided_slope_left(const EquilibriumSolution& s, double p, double h = 1e-6) {
    return (s.value(p) - s.value(p - h)) / h;
}

}  // namespace

TEST_CASE("solve_x_bar_no_effort: endpoint signs and frozen root") {
    ModelParams m = p0();
    // bracket signs per the smooth-pasting rearrangement: positive at
    // p_dagger, exactly -k at 1
    CHECK(sp_bracket_no_effort(m.p_dagger(), m) > 0.0);
    CHECK(sp_bracket_no_effort(1.0, m) == doctest::Approx(-m.k).epsilon(1e-14));
    auto xb = solve_x_bar_no_effort(m);
    REQUIRE(xb.has_value());
    // frozen reference from an independent high-precision bisection
    CHECK(*xb == doctest::Approx(0.73736313339397716).epsilon(1e-12));
    CHECK(std::fabs(sp_bracket_no_effort(*xb, m)) < 1e-12);

    // 1e-6-step grid scan confirms a unique sign change at the root
    int changes = 0;
    double prev = sp_bracket_no_effort(m.p_dagger(), m);
    double where = 0.0;
    for (int i = 1; i <= 1000000; ++i) {
        double x = m.p_dagger() + (1.0 - m.p_dagger()) * i / 1000000.0;
        double f = sp_bracket_no_effort(x, m);
        if (prev > 0.0 && f <= 0.0) {
            ++changes;
            where = x;
        }
        prev = f;
    }
    CHECK(changes == 1);
    CHECK(std::fabs(where - *xb) < 2e-6);
}

TEST_CASE("solve_x_bar_no_effort: NoRoot at large k") {
    ModelParams m = p0();
    m.k = 0.6;  // above the viability bound ~0.5553
    CHECK(!solve_x_bar_no_effort(m).has_value());
    CHECK(sp_bracket_no_effort(m.p_dagger(), m) <= 0.0);
}

TEST_CASE("periodic solution at the base point") {
    ModelParams m = p0();
    EquilibriumSolution s = solve_periodic(m);
    REQUIRE(s.cls == EqClass::Periodic);
    double xb = *s.cutoffs.x_bar;
    double xl = *s.cutoffs.x_low;
    CHECK(xb > 0.5);
    CHECK(xb < 1.0);
    CHECK(xl > 0.0);
    CHECK(xl < 0.5);
    // frozen references
    CHECK(s.bv.V1 == doctest::Approx(1.0956299206263734).epsilon(1e-12));
    CHECK(xl == doctest::Approx(0.091271695047201555).epsilon(1e-12));
    CHECK(s.bv.U11 == doctest::Approx(1.9304522703232937).epsilon(1e-12));
    // inspection payoff at x_low is exactly zero
    CHECK(std::fabs(xl * s.bv.V1 - m.k) < 1e-12);

    // V(1) recursion identity of the closed form
    double b = std::pow(xb, m.r / m.lambda);
    double beta = std::pow(xb, m.gamma());
    double rhs = -(m.L / m.r) * (1.0 - b) +
                 (m.H + m.L) / (m.r + m.lambda) * (1.0 - beta) +
                 b * (xb * s.bv.V1 - m.k);
    CHECK(std::fabs(s.bv.V1 - rhs) < 1e-10);

    // smooth pasting at x_bar from above; value matching on the region
    CHECK(std::fabs(fd_slope(s, xb) - s.bv.V1) < 1e-6);
    for (double x : {xl, 0.3, 0.5, xb}) {
        CHECK(std::fabs(s.value(x) - (x * s.bv.V1 - m.k)) < 1e-10);
    }
    // no smooth pasting at x_low from below: the left slope is zero
    CHECK(std::fabs(one_sided_slope_left(s, xl - 1e-6)) < 1e-9);
    // eta_bar vanishes at x_bar by construction of the root
    CHECK(std::fabs(eta_bar(xb, s.bv, m)) < 1e-10);
}

TEST_CASE("periodic collapses to NoInspection at large k") {
    ModelParams m = p0();
    m.k = 0.7;
    EquilibriumSolution s = solve_periodic(m);
    CHECK(s.cls == EqClass::NoInspection);
    // value is the discounted positive flow down to p_dagger, zero below
    CHECK(s.value(0.3) == 0.0);
    CHECK(s.value(m.p_dagger()) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(s.value(1.0) == doctest::Approx(s.bv.V1));
    CHECK(s.bv.V1 > 0.0);
    // agent value independent of theta
    CHECK(s.agent_value(0.8, 0) == s.agent_value(0.8, 1));
}

TEST_CASE("sigma fixed point: gap of 2c/lambda implies candidate rate r+lambda") {
    ModelParams m = p0();
    double cl = m.c / m.lambda;
    double gap = 2.0 * cl;
    double implied = (m.r + m.lambda) * cl / (gap - cl);
    CHECK(implied == doctest::Approx(m.r + m.lambda).epsilon(1e-14));
}

TEST_CASE("sigma fixed point for breakdown: residual and double evaluation") {
    ModelParams m = p0();
    auto xb = solve_x_bar_no_effort(m);
    auto fp = sigma_star_fixed_point(*xb, std::nullopt, MixRegime::Breakdown, m);
    REQUIRE(fp.has_value());
    CHECK(fp->sigma == doctest::Approx(0.0063794927299785834).epsilon(1e-9));
    CHECK(std::fabs(fp->h_residual) < 1e-10);
    // re-evaluate the recursions at sigma* and close the loop
    double U11 = 0.0, U00 = 0.0;
    agent_values_at_rate(fp->sigma, *xb, std::nullopt, MixRegime::Breakdown, m, U11,
                         U00);
    double implied = (m.r + m.lambda) * (m.c / m.lambda) /
                     (U11 - U00 - m.c / m.lambda);
    CHECK(std::fabs(implied - fp->sigma) < 1e-9);
}

TEST_CASE("sigma fixed point vanishes below the breakdown threshold") {
    ModelParams m = p0();
    auto xb = solve_x_bar_no_effort(m);
    // monotone search downward in u: the fixed point must disappear
    ModelParams low = m;
    low.u = 0.03;
    CHECK(!sigma_star_fixed_point(*xb, std::nullopt, MixRegime::Breakdown, low)
               .has_value());
    ModelParams high = m;
    high.u = 0.5;
    CHECK(sigma_star_fixed_point(*xb, std::nullopt, MixRegime::Breakdown, high)
              .has_value());
}

TEST_CASE("breakdown solution at the base point") {
    ModelParams m = p0();
    auto s = solve_breakdown(m);
    REQUIRE(s.has_value());
    double xb = *s->cutoffs.x_bar;
    double xs = *s->cutoffs.x_star;
    double xl = *s->cutoffs.x_low;
    CHECK(xs == doctest::Approx(0.52368843597712855).epsilon(1e-12));
    CHECK(m.p_dagger() < xs);
    CHECK(xs < xb);
    CHECK(xl < m.p_dagger());
    // effort endpoints of the linear rule
    CHECK(s->effort(xb) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s->effort(xs) == doctest::Approx(xs).epsilon(1e-12));
    // agent indifference identity
    double sg = *s->sigma_star;
    double resid = (m.r + m.lambda) * m.c / m.lambda + sg * m.c / m.lambda -
                   sg * (s->bv.U11 - s->bv.U00);
    CHECK(std::fabs(resid) < 1e-9);
    // eta_bar coincides with the linear effort rule on the mixing region
    for (int i = 0; i <= 20; ++i) {
        double p = xs + (xb - xs) * i / 20.0;
        CHECK(std::fabs(eta_bar(p, s->bv, m) - mixing_effort(p, xs, xb)) < 1e-8);
    }
    // spread condition of any equilibrium with inspections
    CHECK((m.r + m.lambda) * (s->bv.V1 - s->bv.V0) < m.H + m.L);
}

TEST_CASE("breakdown agent value consistency at the mixing entry") {
    // the blind-trust formula and the closed recursion agree at sigma*
    ModelParams m = p0();
    auto s = solve_breakdown(m);
    REQUIRE(s.has_value());
    CHECK(s->agent_value(1.0, 1) == doctest::Approx(s->bv.U11).epsilon(1e-9));
}

TEST_CASE("recovery solution at k = 0.02") {
    ModelParams m = p0();
    m.k = 0.02;
    auto s = solve_recovery(m);
    REQUIRE(s.has_value());
    double xl = *s->cutoffs.x_low;
    double x0 = *s->cutoffs.x_zero;
    double xs = *s->cutoffs.x_star;
    double xb = *s->cutoffs.x_bar;
    // frozen references
    CHECK(xl == doctest::Approx(0.19340566684338866).epsilon(1e-10));
    CHECK(xb == doctest::Approx(0.88610717831809874).epsilon(1e-10));
    CHECK(s->bv.V0 == doctest::Approx(3.2582047693963059).epsilon(1e-9));
    CHECK(s->bv.V1 == doctest::Approx(4.1015825809225478).epsilon(1e-9));
    CHECK(*s->sigma_star == doctest::Approx(0.034266713539611888).epsilon(1e-8));
    // orderings
    CHECK(0.0 < xl);
    CHECK(xl < m.p_dagger());
    CHECK(m.p_dagger() < x0);
    CHECK(x0 < xs);
    CHECK(xs < xb);
    CHECK(xb < 1.0);
    // cutoff identity
    CHECK(std::fabs(x0 - (1.0 + xb - xb / xs)) < 1e-12);
    // residuals of the two-equation system
    CHECK(std::fabs(recovery_xU_residual(xl, xb, m)) < 1e-10);
    CHECK(std::fabs(recovery_xO_residual(xl, xb, m)) < 1e-10);
    // smooth pasting at both ends of the inspection region
    double dV = s->bv.V1 - s->bv.V0;
    CHECK(std::fabs(fd_slope(*s, xb) - dV) < 1e-6);
    CHECK(std::fabs(fd_slope(*s, xl) - dV) < 1e-6);
    // eta_bar crosses 1 exactly at x_low and 0 exactly at x_bar
    CHECK(eta_bar(xl, s->bv, m) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::fabs(eta_bar(xb, s->bv, m)) < 1e-10);
    // value matching across the whole inspection region
    for (double x : {xl, 0.4, x0, xs, xb}) {
        CHECK(std::fabs(s->value(x) - (s->bv.V0 + x * dV - m.k)) < 1e-10);
    }
    // effort profile per class
    CHECK(s->effort(0.0) == 1.0);
    CHECK(s->effort(x0 - 1e-9) == 1.0);
    CHECK(s->effort(x0 + 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s->effort(xb) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s->effort(0.95) == 0.0);
}

TEST_CASE("recovery cutoffs cross-checked by a 400x400 sign-pattern scan") {
    ModelParams m = p0();
    m.k = 0.02;
    auto s = solve_recovery(m);
    REQUIRE(s.has_value());
    double xl_sol = *s->cutoffs.x_low;
    double xb_sol = *s->cutoffs.x_bar;
    // scan the admissible rectangle; every cell where both residual surfaces
    // change sign must contain the solved pair
    int n = 400;
    double pd = m.p_dagger();
    std::vector<std::vector<double>> fu(n + 1), fo(n + 1);
    for (int i = 0; i <= n; ++i) {
        double xl = 1e-6 + (pd - 2e-6) * i / n;
        fu[i].resize(n + 1);
        fo[i].resize(n + 1);
        for (int j = 0; j <= n; ++j) {
            double xb = pd + 1e-6 + (1.0 - pd - 2e-6) * j / n;
            fu[i][j] = recovery_xU_residual(xl, xb, m);
            fo[i][j] = recovery_xO_residual(xl, xb, m);
        }
    }
    int cells = 0;
    bool found_near_solution = false;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            auto changes = [&](const std::vector<std::vector<double>>& f) {
                double a = f[i][j], b = f[i + 1][j], c = f[i][j + 1],
                       d = f[i + 1][j + 1];
                double lo = std::min(std::min(a, b), std::min(c, d));
                double hi = std::max(std::max(a, b), std::max(c, d));
                return lo <= 0.0 && hi >= 0.0;
            };
            if (changes(fu) && changes(fo)) {
                ++cells;
                double xl_lo = 1e-6 + (pd - 2e-6) * i / n;
                double xl_hi = 1e-6 + (pd - 2e-6) * (i + 1) / n;
                double xb_lo = pd + 1e-6 + (1.0 - pd - 2e-6) * j / n;
                double xb_hi = pd + 1e-6 + (1.0 - pd - 2e-6) * (j + 1) / n;
                if (xl_sol >= xl_lo - 1e-9 && xl_sol <= xl_hi + 1e-9 &&
                    xb_sol >= xb_lo - 1e-9 && xb_sol <= xb_hi + 1e-9) {
                    found_near_solution = true;
                }
            }
        }
    }
    CHECK(found_near_solution);
    // the zero contours cross transversally: candidate cells hug the crossing
    CHECK(cells >= 1);
    CHECK(cells <= 8);
}

TEST_CASE("recovery refuses oversized inspection costs") {
    ModelParams m = p0();
    m.k = 0.5;
    CHECK(!solve_recovery(m).has_value());
}

TEST_CASE("disclosure solution at k = 0.02, u = 2") {
    ModelParams m = p0();
    m.k = 0.02;
    m.u = 2.0;
    auto s = solve_disclosure(m);
    REQUIRE(s.has_value());
    // frozen references from the independent fixed-point solve
    CHECK(s->bv.V0 == doctest::Approx(3.6838711783439427).epsilon(1e-8));
    CHECK(s->bv.V1 == doctest::Approx(4.4519817426444461).epsilon(1e-8));
    CHECK(*s->cutoffs.x_bar == doctest::Approx(0.88776378042049825).epsilon(1e-8));
    CHECK(*s->cutoffs.x_zero == doctest::Approx(0.63823686032442368).epsilon(1e-8));
    CHECK(*s->cutoffs.x_low == doctest::Approx(0.038336851353223481).epsilon(1e-6));
    CHECK(*s->sigma_star == doctest::Approx(0.018555792376782503).epsilon(1e-8));
    CHECK(s->bv.V0 > 0.0);

    // V0 fixed-point residual
    double x0 = *s->cutoffs.x_zero;
    double resid = s->bv.V0 -
                   (m.lambda / x0) * (x0 * s->bv.V1 - m.k) / (m.r + m.lambda);
    CHECK(std::fabs(resid) < 1e-9);

    // posterior after a report from p = 0 is exactly x_zero
    double false_rate = s->report_false_hazard_at_zero();
    double posterior = m.lambda / (m.lambda + false_rate);
    CHECK(posterior == doctest::Approx(x0).epsilon(1e-12));

    // reporting probability stays within [0,1] below x_zero, 1 at x_zero
    for (double p : {0.01, 0.02, 0.03}) {
        double q = p / (1.0 - p) * (1.0 - x0) / x0;
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
    }
    double q_at_x0 = x0 / (1.0 - x0) * (1.0 - x0) / x0;
    CHECK(q_at_x0 == doctest::Approx(1.0));

    // agent incentive at p = 0
    CHECK(m.r / (m.r + m.lambda) * s->bv.U11 >= m.c / m.lambda);

    // orderings
    CHECK(0.0 < *s->cutoffs.x_low);
    CHECK(*s->cutoffs.x_low < x0);
    CHECK(x0 < *s->cutoffs.x_star);
    CHECK(*s->cutoffs.x_star < *s->cutoffs.x_bar);

    // smooth pasting at both ends of the stored value map
    double dV = s->bv.V1 - s->bv.V0;
    CHECK(std::fabs(fd_slope(*s, *s->cutoffs.x_bar) - dV) < 1e-6);
    CHECK(std::fabs(fd_slope(*s, *s->cutoffs.x_low) - dV) < 1e-6);
}

TEST_CASE("disclosure dominates recovery pointwise where both solve") {
    ModelParams m = p0();
    m.k = 0.02;
    m.u = 2.0;
    auto rec = solve_recovery(m);
    auto dis = solve_disclosure(m);
    REQUIRE(rec.has_value());
    REQUIRE(dis.has_value());
    for (int i = 0; i <= 1000; ++i) {
        double p = static_cast<double>(i) / 1000.0;
        CHECK(rec->value(p) <= dis->value(p) + 1e-9);
    }
}

TEST_CASE("thresholds at the base cost: formulas and orderings") {
    ModelParams m = p0();
    Thresholds th = thresholds(m, 0.1);
    REQUIRE(th.u_bar_P.has_value());
    REQUIRE(th.u_low_B.has_value());
    // closed form for the periodic bound
    auto xb = solve_x_bar_no_effort(m);
    double b = std::pow(*xb, m.r / m.lambda);
    double beta = std::pow(*xb, m.gamma());
    double closed = (m.c / m.lambda) * m.r * (1.0 - beta) / (1.0 - b);
    CHECK(*th.u_bar_P == doctest::Approx(closed).epsilon(1e-9));
    // bisection of the periodic gap condition agrees with the closed form
    {
        double lo = 1e-9 * m.c, hi = 1e4 * m.c;
        for (int i = 0; i < 200; ++i) {
            double mid = std::sqrt(lo * hi);
            double up = (1.0 - b) / (1.0 - beta) * mid / m.r;
            (up > m.c / m.lambda ? hi : lo) = mid;
        }
        CHECK(0.5 * (lo + hi) == doctest::Approx(closed).epsilon(1e-9));
    }
    // the incentivizability bound reduces to c (r/lambda + x_bar^gamma)
    CHECK(*th.u_low_B ==
          doctest::Approx(m.c * (m.r / m.lambda + beta)).epsilon(1e-9));
    CHECK(*th.u_low_B < *th.u_bar_P);

    Thresholds th2 = thresholds(m, 0.02);
    REQUIRE(th2.u_low_R_rl.has_value());
    REQUIRE(th2.u_low_R_r.has_value());
    CHECK(*th2.u_low_B < *th2.u_low_R_rl);
    CHECK(*th2.u_low_R_r < *th2.u_low_R_rl);

    // both bounds strictly larger at the smaller inspection cost
    CHECK(*th2.u_bar_P > *th.u_bar_P);
    CHECK(*th2.u_low_B > *th.u_low_B);
}

TEST_CASE("thresholds absent when the class is infeasible at this cost") {
    ModelParams m = p0();
    Thresholds th = thresholds(m, 0.6);  // above the periodic viability bound
    CHECK(!th.u_bar_P.has_value());
    CHECK(!th.u_low_B.has_value());
    Thresholds th2 = thresholds(m, 0.3);  // periodic fine, recovery infeasible
    CHECK(th2.u_bar_P.has_value());
    CHECK(!th2.u_low_R_rl.has_value());
}

TEST_CASE("existence map: flags respect thresholds and staircase structure") {
    ModelParams base = p0();
    std::vector<double> ks{0.02, 0.1};
    std::vector<double> us{0.01, 0.03, 0.06, 0.1, 0.3, 1.0, 3.0};
    auto cells = existence_map(base, ks, us);
    REQUIRE(cells.size() == ks.size() * us.size());
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        bool prev_breakdown = false;
        bool prev_recovery = false;
        bool prev_disclosure = false;
        bool prev_periodic = true;
        for (std::size_t ui = 0; ui < us.size(); ++ui) {
            const ExistenceCell& cell = cells[ki * us.size() + ui];
            // monotone staircases in u per column
            if (prev_breakdown) CHECK(cell.breakdown);
            if (prev_recovery) CHECK(cell.recovery);
            if (prev_disclosure) CHECK(cell.disclosure);
            if (!prev_periodic) CHECK(!cell.periodic);
            prev_breakdown = cell.breakdown;
            prev_recovery = cell.recovery;
            prev_disclosure = cell.disclosure;
            prev_periodic = cell.periodic;
            // threshold implications
            if (cell.breakdown) CHECK(cell.u >= *cell.th.u_low_B);
            if (cell.recovery) CHECK(cell.u >= *cell.th.u_low_R_rl);
            if (cell.periodic) CHECK(cell.u <= *cell.th.u_bar_P);
        }
    }
}

TEST_CASE("solve_class dispatch") {
    ModelParams m = p0();
    CHECK(solve_class(EqClass::Periodic, m).has_value());
    CHECK(solve_class(EqClass::Breakdown, m).has_value());
    CHECK(solve_class(EqClass::NoInspection, m).has_value());
    m.k = 0.02;
    CHECK(solve_class(EqClass::Recovery, m).has_value());
    m.u = 2.0;
    CHECK(solve_class(EqClass::Disclosure, m).has_value());
}
