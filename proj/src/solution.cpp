#include "trustgame/solution.hpp"

#include <cmath>
#include <stdexcept>

#include "trustgame/model.hpp"

namespace trustgame {

const char* to_string(EqClass c) {
    switch (c) {
        case EqClass::NoInspection: return "no_inspection";
        case EqClass::Periodic: return "periodic";
        case EqClass::Breakdown: return "breakdown";
        case EqClass::Recovery: return "recovery";
        case EqClass::Disclosure: return "disclosure";
    }
    return "?";
}

std::optional<EqClass> eq_class_from_string(const std::string& name) {
    if (name == "no_inspection") return EqClass::NoInspection;
    if (name == "periodic") return EqClass::Periodic;
    if (name == "breakdown") return EqClass::Breakdown;
    if (name == "recovery") return EqClass::Recovery;
    if (name == "disclosure") return EqClass::Disclosure;
    return std::nullopt;
}

namespace {

double inspection_payoff(const BoundaryValues& bv, double k, double p) {
    return bv.V0 + p * (bv.V1 - bv.V0) - k;
}

// Blind-trust piece: solution of rV = v(p) - V'(p) lambda p on (xbar, 1]
// with V(xbar) matched to the inspection payoff.
double top_piece(double p, double x_bar, const BoundaryValues& bv, const ModelParams& m) {
    double phi_bar = inspection_payoff(bv, m.k, x_bar);
    double coef = m.L / m.r - x_bar * (m.H + m.L) / (m.r + m.lambda) + phi_bar;
    return -m.L / m.r + p * (m.H + m.L) / (m.r + m.lambda) +
           std::pow(x_bar / p, m.r / m.lambda) * coef;
}

// Full-effort waiting piece: solution of rV = V'(p) lambda (1-p) on [0, xlow)
// with V(xlow) matched to the inspection payoff.
double low_piece(double p, double x_low, const BoundaryValues& bv, const ModelParams& m) {
    double phi_low = inspection_payoff(bv, m.k, x_low);
    return std::pow((1.0 - x_low) / (1.0 - p), m.r / m.lambda) * phi_low;
}

double no_inspection_value(double p, const ModelParams& m) {
    double pd = m.p_dagger();
    if (p <= pd) return 0.0;
    double ratio = pd / p;
    double disc_r = std::pow(ratio, m.r / m.lambda);
    double disc_rl = std::pow(ratio, m.gamma());
    return p * (m.H + m.L) / (m.r + m.lambda) * (1.0 - disc_rl) -
           m.L / m.r * (1.0 - disc_r);
}

}  // namespace

double EquilibriumSolution::mixing_value_low_state() const {
    double s = sigma_star.value();
    // Breakdown has U00 = 0, so the two cases coincide formally.
    return (params.u + s * bv.U00) / (params.r + s);
}

double EquilibriumSolution::value(double p) const {
    const ModelParams& m = params;
    switch (cls) {
        case EqClass::NoInspection:
            return no_inspection_value(p, m);
        case EqClass::Periodic:
        case EqClass::Breakdown: {
            double xl = *cutoffs.x_low, xb = *cutoffs.x_bar;
            if (p > xb) return top_piece(p, xb, bv, m);
            if (p >= xl) return inspection_payoff(bv, m.k, p);
            return 0.0;
        }
        case EqClass::Recovery: {
            double xl = *cutoffs.x_low, xb = *cutoffs.x_bar;
            if (p > xb) return top_piece(p, xb, bv, m);
            if (p >= xl) return inspection_payoff(bv, m.k, p);
            return low_piece(p, xl, bv, m);
        }
        case EqClass::Disclosure: {
            double xl = *cutoffs.x_low, xb = *cutoffs.x_bar;
            if (p == 0.0) return bv.V0;  // on-path value under reporting
            if (p > xb) return top_piece(p, xb, bv, m);
            if (p >= xl) return inspection_payoff(bv, m.k, p);
            return low_piece(p, xl, bv, m);
        }
    }
    return 0.0;
}

double EquilibriumSolution::effort(double p) const {
    switch (cls) {
        case EqClass::NoInspection:
        case EqClass::Periodic:
            return 0.0;
        case EqClass::Breakdown: {
            double xs = *cutoffs.x_star, xb = *cutoffs.x_bar;
            if (p >= xs && p <= xb) return mixing_effort(p, xs, xb);
            return 0.0;
        }
        case EqClass::Recovery:
        case EqClass::Disclosure: {
            double x0 = *cutoffs.x_zero, xs = *cutoffs.x_star, xb = *cutoffs.x_bar;
            if (p < x0) return 1.0;
            if (p <= xb) return mixing_effort(p, xs, xb);
            return 0.0;
        }
    }
    return 0.0;
}

InspectionAction EquilibriumSolution::inspection(double p) const {
    using K = InspectionAction::Kind;
    switch (cls) {
        case EqClass::NoInspection:
            return {K::None, 0.0};
        case EqClass::Periodic: {
            if (p >= *cutoffs.x_low && p <= *cutoffs.x_bar) return {K::Immediate, 0.0};
            return {K::None, 0.0};
        }
        case EqClass::Breakdown: {
            if (p >= *cutoffs.x_low && p < *cutoffs.x_star) return {K::Immediate, 0.0};
            if (p >= *cutoffs.x_star && p <= *cutoffs.x_bar) return {K::Hazard, *sigma_star};
            return {K::None, 0.0};
        }
        case EqClass::Recovery:
        case EqClass::Disclosure: {
            if (p >= *cutoffs.x_low && p <= *cutoffs.x_zero) return {K::Immediate, 0.0};
            if (p > *cutoffs.x_zero && p <= *cutoffs.x_bar) return {K::Hazard, *sigma_star};
            return {K::None, 0.0};
        }
    }
    return {K::None, 0.0};
}

bool EquilibriumSolution::approve(double p) const { return approves(p, params); }

double EquilibriumSolution::agent_value(double p, int theta) const {
    const ModelParams& m = params;
    switch (cls) {
        case EqClass::NoInspection: {
            double pd = m.p_dagger();
            if (p <= pd) return 0.0;
            return m.u / m.r * (1.0 - std::pow(pd / p, m.r / m.lambda));
        }
        case EqClass::Periodic: {
            double xl = *cutoffs.x_low, xb = *cutoffs.x_bar;
            if (p > xb) {
                double disc_r = std::pow(xb / p, m.r / m.lambda);
                double base = m.u / m.r * (1.0 - disc_r);
                if (theta == 1) base += std::pow(xb / p, m.gamma()) * bv.U11;
                return base;
            }
            if (p >= xl) return theta == 1 ? bv.U11 : bv.U00;
            return 0.0;
        }
        case EqClass::Breakdown: {
            double xl = *cutoffs.x_low, xs = *cutoffs.x_star, xb = *cutoffs.x_bar;
            double umix0 = mixing_value_low_state();
            if (p > xb) {
                double disc_r = std::pow(xb / p, m.r / m.lambda);
                double base = m.u / m.r * (1.0 - disc_r) + disc_r * umix0;
                if (theta == 1) base += std::pow(xb / p, m.gamma()) * m.c / m.lambda;
                return base;
            }
            if (p >= xs) return theta == 1 ? umix0 + m.c / m.lambda : umix0;
            if (p >= xl) return theta == 1 ? bv.U11 : bv.U00;
            return 0.0;
        }
        case EqClass::Recovery:
        case EqClass::Disclosure: {
            double xl = *cutoffs.x_low, x0 = *cutoffs.x_zero, xb = *cutoffs.x_bar;
            double umix0 = mixing_value_low_state();
            if (p > xb) {
                double disc_r = std::pow(xb / p, m.r / m.lambda);
                double base = m.u / m.r * (1.0 - disc_r) + disc_r * umix0;
                if (theta == 1) base += std::pow(xb / p, m.gamma()) * m.c / m.lambda;
                return base;
            }
            if (p > x0) return theta == 1 ? umix0 + m.c / m.lambda : umix0;
            if (p >= xl) return theta == 1 ? bv.U11 : bv.U00;
            if (cls == EqClass::Disclosure && p == 0.0) {
                return theta == 1 ? bv.U11 : bv.U00;
            }
            // full-effort leg up to the deterministic inspection at x_low
            double a_r = std::pow((1.0 - xl) / (1.0 - p), m.r / m.lambda);
            double stay = (1.0 - xl) / (1.0 - p);  // P(theta still 0 at inspection)
            double base = -m.c / m.r * (1.0 - a_r);
            if (theta == 1) return base + a_r * bv.U11;
            return base + a_r * ((1.0 - stay) * bv.U11 + stay * bv.U00);
        }
    }
    return 0.0;
}

double EquilibriumSolution::report_false_hazard_at_zero() const {
    if (cls != EqClass::Disclosure) return 0.0;
    double x0 = *cutoffs.x_zero;
    return params.lambda * (1.0 - x0) / x0;
}

double EquilibriumSolution::report_prob(double p, int theta) const {
    if (cls != EqClass::Disclosure) return 0.0;
    if (!(p > 0.0 && p < *cutoffs.x_low)) return 0.0;
    if (theta == 1) return 1.0;
    double x0 = *cutoffs.x_zero;
    return p / (1.0 - p) * (1.0 - x0) / x0;
}

double EquilibriumSolution::report_posterior() const {
    return cls == EqClass::Disclosure ? *cutoffs.x_zero : 0.0;
}

PolicyAt eval_solution(const EquilibriumSolution& sol, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("eval_solution: p outside [0,1]");
    return PolicyAt{sol.value(p), sol.effort(p), sol.inspection(p),
                    sol.approve(p) ? 1 : 0};
}

}  // namespace trustgame
