#include "trustgame/solver.hpp"

#include <cmath>
#include <limits>

#include "trustgame/model.hpp"
#include "trustgame/roots.hpp"

namespace trustgame {

namespace {
constexpr double kEdge = 1e-9;       // keeps brackets off absorbing endpoints
constexpr int kOuterScan = 400;      // sign-pattern scan resolution
constexpr double kSigmaLo = 1e-8;    // initial sigma bracket
constexpr double kSigmaCap = 1e8;    // bracket expansion ceiling
}  // namespace

double sp_bracket_no_effort(double x, const ModelParams& m) {
    double beta = std::pow(x, m.gamma());
    double a = (m.L - m.r * m.k) / (m.r + m.lambda);
    return a - x * m.L / m.r + beta * (m.lambda / m.r) * a;
}

double sp_bracket_with_floor(double x, double w, const ModelParams& m) {
    double beta = std::pow(x, m.gamma());
    return (m.L + m.r * (w - m.k)) * (1.0 - beta) / (m.r + m.lambda) -
           (m.L / m.r) * (x - beta) + beta * (w - m.k) - w * x;
}

double v1_given_x_bar(double x_bar, double w, const ModelParams& m) {
    double b = std::pow(x_bar, m.r / m.lambda);
    double beta = std::pow(x_bar, m.gamma());
    return -m.L / m.r * (1.0 - b) / (1.0 - beta) + (m.H + m.L) / (m.r + m.lambda) +
           b * ((1.0 - x_bar) * w - m.k) / (1.0 - beta);
}

namespace {

// Largest root of the floor-w smooth-pasting bracket in (p_dagger, 1).
std::optional<double> solve_x_bar_with_floor(double w, const ModelParams& m) {
    double pd = m.p_dagger();
    auto f = [&](double x) { return sp_bracket_with_floor(x, w, m); };
    if (f(pd) <= 0.0) return std::nullopt;  // cost above the viability bound
    auto brackets = scan_sign_changes(f, pd, 1.0 - kEdge, kOuterScan);
    if (brackets.empty()) {
        // f(pd) > 0 and f(1) = -k < 0, so the scan endpoint must catch it
        brackets = scan_sign_changes(f, pd, 1.0, kOuterScan);
        if (brackets.empty()) return std::nullopt;
    }
    auto [lo, hi] = brackets.back();
    return bisect(f, lo, hi);
}

struct MixGeometry {
    double x_star;
    double x_zero;
};

// Upper-branch solutions of eta_bar(p) = p and eta_bar(p) = 1.
MixGeometry mix_geometry(double V0, double V1, const ModelParams& m) {
    double dV = V1 - V0;
    double num = m.L + m.r * (V0 - m.k);
    MixGeometry g;
    g.x_star = num / (m.H + m.L - m.r * dV);
    double den_bar = m.H + m.L - (m.r + m.lambda) * dV;
    g.x_zero = (num - m.lambda * dV) / den_bar;
    return g;
}

// Lower-branch solution of eta_bar(p) = 1, the bottom of the inspection
// region in classes with recovery.
double x_low_eta_one(double V0, double V1, const ModelParams& m) {
    double dV = V1 - V0;
    return (m.lambda * dV - m.r * (V0 - m.k)) / ((m.r + m.lambda) * dV);
}

EquilibriumSolution make_no_inspection(const ModelParams& m) {
    EquilibriumSolution s;
    s.cls = EqClass::NoInspection;
    s.params = m;
    double pd = m.p_dagger();
    s.bv.V0 = 0.0;
    s.bv.V1 = (m.H + m.L) / (m.r + m.lambda) * (1.0 - std::pow(pd, m.gamma())) -
              m.L / m.r * (1.0 - std::pow(pd, m.r / m.lambda));
    s.bv.U11 = m.u / m.r * (1.0 - std::pow(pd, m.r / m.lambda));
    s.bv.U00 = 0.0;
    return s;
}

void store_common_diagnostics(EquilibriumSolution& s) {
    const ModelParams& m = s.params;
    if (!s.cutoffs.x_bar) return;
    double xb = *s.cutoffs.x_bar;
    s.diagnostics["eta_bar_at_x_bar"] = eta_bar(xb, s.bv, m);
    if (s.cutoffs.x_low) {
        double phi = s.bv.V0 + *s.cutoffs.x_low * (s.bv.V1 - s.bv.V0) - m.k;
        s.diagnostics["value_matching_x_low"] = s.value(*s.cutoffs.x_low) - phi;
    }
    s.diagnostics["spread_margin"] =
        (m.H + m.L) - (m.r + m.lambda) * (s.bv.V1 - s.bv.V0);
}

}  // namespace

std::optional<double> solve_x_bar_no_effort(const ModelParams& m) {
    double pd = m.p_dagger();
    auto f = [&](double x) { return sp_bracket_no_effort(x, m); };
    if (f(pd) <= 0.0) return std::nullopt;
    // bracket is decreasing with f(1) = -k < 0: unique root
    double root = bisect(f, pd, 1.0);
    return root;
}

void agent_values_at_rate(double sigma, double x_bar, std::optional<double> x_low,
                          MixRegime regime, const ModelParams& m, double& U11,
                          double& U00) {
    double b = std::pow(x_bar, m.r / m.lambda);
    double A = m.u / m.r * (1.0 - b) + b * (m.u - x_bar * m.c) / (m.r + sigma);
    double B = b * sigma / (m.r + sigma);
    switch (regime) {
        case MixRegime::Breakdown:
            U00 = 0.0;
            U11 = A / (1.0 - B * x_bar);
            return;
        case MixRegime::Recovery: {
            double a = std::pow(1.0 - *x_low, m.r / m.lambda);
            // U11 (1 - B xbar) - B (1-xbar) U00 = A
            // -a xlow U11 + (1 - a(1-xlow)) U00 = -(c/r)(1-a)
            double a11 = 1.0 - B * x_bar;
            double a12 = -B * (1.0 - x_bar);
            double a21 = -a * *x_low;
            double a22 = 1.0 - a * (1.0 - *x_low);
            double r1 = A;
            double r2 = -(m.c / m.r) * (1.0 - a);
            double det = a11 * a22 - a12 * a21;
            U11 = (r1 * a22 - a12 * r2) / det;
            U00 = (a11 * r2 - a21 * r1) / det;
            return;
        }
        case MixRegime::Disclosure: {
            // U00 = (-c + lambda U11)/(r + lambda)
            double denom = 1.0 - B * x_bar - B * (1.0 - x_bar) * m.lambda / (m.r + m.lambda);
            U11 = (A - B * (1.0 - x_bar) * m.c / (m.r + m.lambda)) / denom;
            U00 = (-m.c + m.lambda * U11) / (m.r + m.lambda);
            return;
        }
    }
}

double sigma_fixed_point_h(double sigma, double x_bar, std::optional<double> x_low,
                           MixRegime regime, const ModelParams& m) {
    double U11 = 0.0, U00 = 0.0;
    agent_values_at_rate(sigma, x_bar, x_low, regime, m, U11, U00);
    double cl = m.c / m.lambda;
    return (U11 - U00 - cl) / ((m.r + m.lambda) * cl) - 1.0 / sigma;
}

std::optional<SigmaStarResult> sigma_star_fixed_point(double x_bar,
                                                      std::optional<double> x_low,
                                                      MixRegime regime,
                                                      const ModelParams& m) {
    auto h = [&](double s) { return sigma_fixed_point_h(s, x_bar, x_low, regime, m); };
    // h -> -inf as sigma -> 0+ and may dip below zero again for large sigma,
    // so bracket by a log-spaced scan and keep the smallest root (the branch
    // that varies continuously in u; larger roots are recorded as a count).
    constexpr int kScan = 600;
    double lo = kSigmaLo;
    double hi = kSigmaCap;
    double step = std::pow(hi / lo, 1.0 / kScan);
    double prev = lo;
    double h_prev = h(prev);
    std::optional<double> sigma;
    int crossings = 0;
    for (int i = 1; i <= kScan; ++i) {
        double cur = prev * step;
        double h_cur = h(cur);
        if (h_prev < 0.0 && h_cur >= 0.0) {
            ++crossings;
            if (!sigma) sigma = bisect(h, prev, cur);
        } else if (h_prev >= 0.0 && h_cur < 0.0) {
            ++crossings;
        }
        prev = cur;
        h_prev = h_cur;
    }
    if (!sigma) return std::nullopt;
    SigmaStarResult res;
    res.sigma = *sigma;
    agent_values_at_rate(*sigma, x_bar, x_low, regime, m, res.U11, res.U00);
    res.h_residual = h(*sigma);
    res.sign_changes = crossings;
    return res;
}

EquilibriumSolution solve_periodic(const ModelParams& m) {
    auto x_bar = solve_x_bar_no_effort(m);
    if (!x_bar) return make_no_inspection(m);
    EquilibriumSolution s;
    s.params = m;
    s.cls = EqClass::Periodic;
    double xb = *x_bar;
    double V1 = v1_given_x_bar(xb, 0.0, m);
    double b = std::pow(xb, m.r / m.lambda);
    double beta = std::pow(xb, m.gamma());
    s.bv.V0 = 0.0;
    s.bv.V1 = V1;
    s.bv.U11 = (1.0 - b) / (1.0 - beta) * m.u / m.r;
    s.bv.U00 = 0.0;
    s.cutoffs.x_bar = xb;
    s.cutoffs.x_low = m.k / V1;
    s.diagnostics["sp_bracket_residual"] = sp_bracket_no_effort(xb, m);
    s.diagnostics["x_low_payoff_residual"] = *s.cutoffs.x_low * V1 - m.k;
    s.diagnostics["u_bar_P"] = (m.c / m.lambda) * m.r * (1.0 - beta) / (1.0 - b);
    s.diagnostics["incentive_ok"] = (s.bv.U11 <= m.c / m.lambda) ? 1.0 : 0.0;
    store_common_diagnostics(s);
    return s;
}

std::optional<EquilibriumSolution> solve_breakdown(const ModelParams& m) {
    auto x_bar = solve_x_bar_no_effort(m);
    if (!x_bar) return std::nullopt;
    double xb = *x_bar;
    double V1 = v1_given_x_bar(xb, 0.0, m);
    auto fp = sigma_star_fixed_point(xb, std::nullopt, MixRegime::Breakdown, m);
    if (!fp) return std::nullopt;

    EquilibriumSolution s;
    s.cls = EqClass::Breakdown;
    s.params = m;
    s.bv = BoundaryValues{0.0, V1, fp->U11, fp->U00};
    MixGeometry g = mix_geometry(0.0, V1, m);
    if (!(g.x_star > m.p_dagger() && g.x_star < xb)) return std::nullopt;
    s.cutoffs.x_bar = xb;
    s.cutoffs.x_low = m.k / V1;
    s.cutoffs.x_star = g.x_star;
    s.sigma_star = fp->sigma;
    s.diagnostics["sp_bracket_residual"] = sp_bracket_no_effort(xb, m);
    s.diagnostics["sigma_h_residual"] = fp->h_residual;
    s.diagnostics["indifference_residual"] =
        (m.r + m.lambda) * m.c / m.lambda + fp->sigma * m.c / m.lambda -
        fp->sigma * (fp->U11 - fp->U00);
    store_common_diagnostics(s);
    return s;
}

double recovery_xU_residual(double x_low, double x_bar, const ModelParams& m) {
    double g = m.gamma();
    double N = m.lambda * (m.H + m.L) * std::pow(x_bar, g) + m.H * m.r - m.lambda * m.L;
    double M = (m.lambda + m.r) *
               (m.lambda * (std::pow(x_bar, g) + std::pow(1.0 - x_low, g)) + m.r);
    double q = N / M;
    return q * (m.r * x_low +
                m.lambda * (std::pow(1.0 - x_low, g) - (1.0 - x_low))) -
           m.r * m.k;
}

double recovery_xO_residual(double x_low, double x_bar, const ModelParams& m) {
    double g = m.gamma();
    double N = m.lambda * (m.H + m.L) * std::pow(x_bar, g) + m.H * m.r - m.lambda * m.L;
    double M = (m.lambda + m.r) *
               (m.lambda * (std::pow(x_bar, g) + std::pow(1.0 - x_low, g)) + m.r);
    double q = N / M;
    return q * (m.r * x_bar + m.lambda * (std::pow(1.0 - x_low, g) + x_bar)) -
           m.r * m.k - m.H * x_bar + m.L * (1.0 - x_bar);
}

namespace {

// Inner root of the xU condition given x_bar: the residual is -rk at
// x_low = 0 and increasing whenever the shared numerator is positive.
std::optional<double> recovery_inner_x_low(double x_bar, const ModelParams& m) {
    double g = m.gamma();
    double N = m.lambda * (m.H + m.L) * std::pow(x_bar, g) + m.H * m.r - m.lambda * m.L;
    if (N <= 0.0) return std::nullopt;
    double pd = m.p_dagger();
    auto f = [&](double xl) { return recovery_xU_residual(xl, x_bar, m); };
    double hi = pd - kEdge;
    if (f(hi) <= 0.0) return std::nullopt;  // k too large for this x_bar
    return bisect(f, kEdge, hi);
}

struct RecoveryCutoffs {
    double x_low;
    double x_bar;
    int outer_sign_changes;
};

std::optional<RecoveryCutoffs> solve_recovery_cutoffs(const ModelParams& m) {
    double pd = m.p_dagger();
    auto outer = [&](double xb) -> double {
        auto xl = recovery_inner_x_low(xb, m);
        if (!xl) return std::numeric_limits<double>::quiet_NaN();
        return recovery_xO_residual(*xl, xb, m);
    };
    auto brackets = scan_sign_changes(outer, pd + kEdge, 1.0 - kEdge, kOuterScan);
    if (brackets.empty()) return std::nullopt;
    // several sign changes would contradict the monotonicity argument; take
    // the largest root and record the count so deviations stay visible
    auto [lo, hi] = brackets.back();
    double xb = bisect(outer, lo, hi);
    auto xl = recovery_inner_x_low(xb, m);
    if (!xl) return std::nullopt;
    return RecoveryCutoffs{*xl, xb, static_cast<int>(brackets.size())};
}

// W(0), W(1) from value matching at both cutoffs and the two waiting ODEs.
void recovery_boundary_values(double x_low, double x_bar, const ModelParams& m,
                              double& W0, double& W1) {
    double b = std::pow(x_bar, m.r / m.lambda);
    double beta = std::pow(x_bar, m.gamma());
    double a = std::pow(1.0 - x_low, m.r / m.lambda);
    // W1 = rhs1 + b*xbar*W1 + b*(1-xbar)*W0 ; W0 = a*(W0 + xlow*(W1-W0) - k)
    double a11 = 1.0 - b * x_bar;
    double a12 = -b * (1.0 - x_bar);
    double rhs1 = -m.L / m.r * (1.0 - b) + (m.H + m.L) / (m.r + m.lambda) * (1.0 - beta) -
                  b * m.k;
    double a21 = -a * x_low;
    double a22 = 1.0 - a * (1.0 - x_low);
    double rhs2 = -a * m.k;
    double det = a11 * a22 - a12 * a21;
    W1 = (rhs1 * a22 - a12 * rhs2) / det;
    W0 = (a11 * rhs2 - a21 * rhs1) / det;
}

}  // namespace

std::optional<EquilibriumSolution> solve_recovery(const ModelParams& m) {
    auto cut = solve_recovery_cutoffs(m);
    if (!cut) return std::nullopt;
    double W0, W1;
    recovery_boundary_values(cut->x_low, cut->x_bar, m, W0, W1);
    if (!(W1 > W0)) return std::nullopt;
    auto fp = sigma_star_fixed_point(cut->x_bar, cut->x_low, MixRegime::Recovery, m);
    if (!fp) return std::nullopt;

    // The recovery leg pays off only at the deterministic inspection at
    // x_low; effort at p = 0 must still be worthwhile after that delay.
    double gap = fp->U11 - fp->U00;
    double disc_rl = std::pow(1.0 - cut->x_low, m.gamma());
    double disc_r = std::pow(1.0 - cut->x_low, m.r / m.lambda);
    if (!(disc_rl * gap >= m.c / m.lambda)) return std::nullopt;

    EquilibriumSolution s;
    s.cls = EqClass::Recovery;
    s.params = m;
    s.bv = BoundaryValues{W0, W1, fp->U11, fp->U00};
    MixGeometry g = mix_geometry(W0, W1, m);
    if (!(g.x_star > m.p_dagger() && g.x_star < cut->x_bar)) return std::nullopt;
    double x_zero = 1.0 + cut->x_bar - cut->x_bar / g.x_star;
    if (!(x_zero > cut->x_low)) return std::nullopt;
    s.cutoffs = Cutoffs{cut->x_low, x_zero, g.x_star, cut->x_bar};
    s.sigma_star = fp->sigma;
    s.diagnostics["xU_residual"] = recovery_xU_residual(cut->x_low, cut->x_bar, m);
    s.diagnostics["xO_residual"] = recovery_xO_residual(cut->x_low, cut->x_bar, m);
    s.diagnostics["outer_sign_changes"] = cut->outer_sign_changes;
    s.diagnostics["sigma_h_residual"] = fp->h_residual;
    s.diagnostics["indifference_residual"] =
        (m.r + m.lambda) * m.c / m.lambda + fp->sigma * m.c / m.lambda -
        fp->sigma * gap;
    s.diagnostics["D0_r_lambda"] = disc_rl * gap;
    s.diagnostics["D0_r"] = disc_r * gap;
    s.diagnostics["x_zero_crossing_diff"] = x_zero - mix_geometry(W0, W1, m).x_zero;
    s.diagnostics["eta_bar_at_x_low"] = eta_bar(cut->x_low, s.bv, m);
    store_common_diagnostics(s);
    return s;
}

std::optional<EquilibriumSolution> solve_disclosure(const ModelParams& m) {
    double pd = m.p_dagger();
    double w = 0.0;
    double x_bar = 0.0, V1 = 0.0, x_star = 0.0, x_zero = 0.0;
    bool converged = false;
    int iters = 0;
    for (; iters < 10000; ++iters) {
        auto xb = solve_x_bar_with_floor(w, m);
        if (!xb) return std::nullopt;
        x_bar = *xb;
        V1 = v1_given_x_bar(x_bar, w, m);
        double dV = V1 - w;
        if (!(dV > 0.0)) return std::nullopt;
        MixGeometry g = mix_geometry(w, V1, m);
        x_star = g.x_star;
        if (!(x_star > 0.0 && x_star < x_bar)) return std::nullopt;
        x_zero = 1.0 + x_bar - x_bar / x_star;
        if (!(x_zero > 0.0)) return std::nullopt;
        double w_target = (m.lambda / x_zero) * (x_zero * V1 - m.k) / (m.r + m.lambda);
        if (std::fabs(w_target - w) < 1e-10) {
            w += 0.5 * (w_target - w);
            converged = true;
            break;
        }
        w += 0.5 * (w_target - w);
    }
    if (!converged) return std::nullopt;
    // admissibility of the converged geometry: the interior-effort line must
    // cross 1 above the approval threshold for reports to target x_zero
    if (!(x_star > pd && x_zero >= pd)) return std::nullopt;

    auto fp = sigma_star_fixed_point(x_bar, std::nullopt, MixRegime::Disclosure, m);
    if (!fp) return std::nullopt;

    // Effort at p = 0 pays off at the inspection triggered by the next
    // truthful report.
    double D0 = m.r / (m.r + m.lambda) * fp->U11;
    if (!(D0 >= m.c / m.lambda)) return std::nullopt;

    EquilibriumSolution s;
    s.cls = EqClass::Disclosure;
    s.params = m;
    s.bv = BoundaryValues{w, V1, fp->U11, fp->U00};
    double x_low = x_low_eta_one(w, V1, m);
    if (!(x_low > 0.0 && x_low < x_zero)) return std::nullopt;
    s.cutoffs = Cutoffs{x_low, x_zero, x_star, x_bar};
    s.sigma_star = fp->sigma;
    s.diagnostics["fixed_point_iters"] = iters;
    s.diagnostics["sp_bracket_residual"] = sp_bracket_with_floor(x_bar, w, m);
    s.diagnostics["sigma_h_residual"] = fp->h_residual;
    s.diagnostics["indifference_residual"] =
        (m.r + m.lambda) * m.c / m.lambda + fp->sigma * m.c / m.lambda -
        fp->sigma * (fp->U11 - fp->U00);
    s.diagnostics["D0_reported"] = D0;
    s.diagnostics["D0_exact"] = (m.r * fp->U11 + m.c) / (m.r + m.lambda);
    s.diagnostics["x_zero_crossing_diff"] =
        x_zero - mix_geometry(w, V1, m).x_zero;
    s.diagnostics["eta_bar_at_x_low"] = eta_bar(x_low, s.bv, m);
    s.diagnostics["v0_recursion_residual"] =
        w - (m.lambda / x_zero) * (x_zero * V1 - m.k) / (m.r + m.lambda);
    store_common_diagnostics(s);
    return s;
}

std::optional<EquilibriumSolution> solve_class(EqClass cls, const ModelParams& m) {
    switch (cls) {
        case EqClass::NoInspection:
            return make_no_inspection(m);
        case EqClass::Periodic: {
            EquilibriumSolution s = solve_periodic(m);
            if (s.cls != EqClass::Periodic) return std::nullopt;
            return s;
        }
        case EqClass::Breakdown: return solve_breakdown(m);
        case EqClass::Recovery: return solve_recovery(m);
        case EqClass::Disclosure: return solve_disclosure(m);
    }
    return std::nullopt;
}

namespace {

// Monotone-in-u predicate bisection on a log grid; `pred(u)` must be
// false below the threshold and true above (or the reverse via negation).
std::optional<double> bisect_u_threshold(const std::function<bool(double)>& pred,
                                         double lo, double hi, bool* warn) {
    bool plo = pred(lo);
    bool phi = pred(hi);
    if (plo) {
        if (warn) *warn = true;  // threshold below the search range
        return lo;
    }
    if (!phi) {
        // expand logarithmically before giving up
        double cap = hi * 1e8;
        while (!phi && hi < cap) {
            hi *= 10.0;
            phi = pred(hi);
        }
        if (!phi) {
            if (warn) *warn = true;
            return std::nullopt;
        }
    }
    for (int i = 0; i < 200; ++i) {
        double mid = std::sqrt(lo * hi);
        if (mid <= lo || mid >= hi) break;
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Thresholds thresholds(const ModelParams& base, double k) {
    Thresholds th;
    ModelParams m = base;
    m.k = k;
    auto x_bar = solve_x_bar_no_effort(m);
    if (x_bar) {
        double b = std::pow(*x_bar, m.r / m.lambda);
        double beta = std::pow(*x_bar, m.gamma());
        th.u_bar_P = (m.c / m.lambda) * m.r * (1.0 - beta) / (1.0 - b);
        // incentivizability at x_bar: the gap is largest in the low-rate
        // limit, where the closed recursions are linear in u
        auto breakdown_pred = [&](double u) {
            ModelParams mu = m;
            mu.u = u;
            double U11 = 0.0, U00 = 0.0;
            agent_values_at_rate(0.0, *x_bar, std::nullopt, MixRegime::Breakdown, mu,
                                 U11, U00);
            return U11 - U00 > m.c / m.lambda;
        };
        th.u_low_B = bisect_u_threshold(breakdown_pred, 1e-9 * m.c, 1e4 * m.c,
                                        &th.endpoint_warning);
    }
    auto cut = solve_recovery_cutoffs(m);
    if (cut) {
        auto recovery_pred = [&](double u, double expo) {
            ModelParams mu = m;
            mu.u = u;
            double U11 = 0.0, U00 = 0.0;
            agent_values_at_rate(0.0, cut->x_bar, cut->x_low, MixRegime::Recovery, mu,
                                 U11, U00);
            double disc = std::pow(1.0 - cut->x_low, expo / m.lambda);
            return disc * (U11 - U00) > m.c / m.lambda;
        };
        th.u_low_R_r = bisect_u_threshold(
            [&](double u) { return recovery_pred(u, m.r); }, 1e-9 * m.c, 1e4 * m.c,
            &th.endpoint_warning);
        th.u_low_R_rl = bisect_u_threshold(
            [&](double u) { return recovery_pred(u, m.r + m.lambda); }, 1e-9 * m.c,
            1e4 * m.c, &th.endpoint_warning);
    }
    return th;
}

std::vector<ExistenceCell> existence_map(const ModelParams& base,
                                         const std::vector<double>& k_grid,
                                         const std::vector<double>& u_grid) {
    std::vector<ExistenceCell> cells;
    cells.reserve(k_grid.size() * u_grid.size());
    for (double k : k_grid) {
        Thresholds th = thresholds(base, k);
        for (double u : u_grid) {
            ExistenceCell cell;
            cell.k = k;
            cell.u = u;
            cell.th = th;
            ModelParams m = base;
            m.k = k;
            m.u = u;
            EquilibriumSolution per = solve_periodic(m);
            cell.periodic = per.cls == EqClass::Periodic &&
                            per.bv.U11 <= m.c / m.lambda;
            cell.breakdown = solve_breakdown(m).has_value();
            cell.recovery = solve_recovery(m).has_value();
            cell.disclosure = solve_disclosure(m).has_value();
            cells.push_back(cell);
        }
    }
    return cells;
}

}  // namespace trustgame
