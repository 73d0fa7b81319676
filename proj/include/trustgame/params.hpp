#pragma once

#include <string>

#include "trustgame/errors.hpp"

namespace trustgame {

// The seven model primitives. All rates are per unit time; no internal
// rescaling is ever applied.
struct ModelParams {
    double H;       // principal flow payoff while approving in the high state
    double L;       // principal flow loss while approving in the low state (stored positive)
    double c;       // agent marginal effort cost
    double lambda;  // quality transition intensity
    double r;       // common discount rate
    double u;       // agent flow utility from approval
    double k;       // lump-sum inspection cost

    // L/(H+L): approval is myopically optimal above this reputation.
    double p_dagger() const { return L / (H + L); }
    // (r+lambda)/lambda, the exponent that shows up in every discount factor.
    double gamma() const { return (r + lambda) / lambda; }
};

struct ReputationState {
    double p;   // reputation in [0,1]
    int theta;  // true quality in {0,1}
};

// Post-inspection continuation values. V1 > V0 in any solution with
// inspections; U11 >= U00.
struct BoundaryValues {
    double V0 = 0.0;
    double V1 = 0.0;
    double U11 = 0.0;
    double U00 = 0.0;
};

// Validates the seven primitives. Throws instead of clamping.
inline ModelParams validate_params(double H, double L, double c, double lambda,
                                   double r, double u, double k) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) {
            throw ValidationError(ValidationError::Code::NonPositiveParam, name,
                                  std::string(name) + " must be > 0");
        }
    };
    positive(H, "H");
    positive(L, "L");
    positive(c, "c");
    positive(lambda, "lambda");
    positive(r, "r");
    positive(u, "u");
    positive(k, "k");
    if (!(u / (r + lambda) > c / r)) {
        throw ValidationError(ValidationError::Code::EffortNeverWorthwhile, "u",
                              "u/(r+lambda) <= c/r: effort can never be worthwhile");
    }
    return ModelParams{H, L, c, lambda, r, u, k};
}

inline ModelParams validate_params(const ModelParams& raw) {
    return validate_params(raw.H, raw.L, raw.c, raw.lambda, raw.r, raw.u, raw.k);
}

}  // namespace trustgame
