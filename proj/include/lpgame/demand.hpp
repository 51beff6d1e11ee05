#pragma once

namespace lpgame {

enum class CurveKind { linear, logarithmic };

// Aggregate trading demand over one horizon: a base component that trades
// regardless of pool depth plus a liquidity-sensitive component.
//   linear:       D(V) = base_demand + gamma * V
//   logarithmic:  D(V) = base_demand + ln(gamma * V),  V > 0
struct DemandCurve {
    CurveKind kind{CurveKind::linear};
    double base_demand{0.0};
    double gamma{0.0};

    static DemandCurve linear(double base_demand, double gamma);
    static DemandCurve logarithmic(double base_demand, double gamma);

    bool is_linear() const { return kind == CurveKind::linear; }

    // Smallest liquidity with nonnegative traded volume. Solvers restrict
    // their search to V >= min_liquidity() so volume never goes negative.
    double min_liquidity() const;
};

// Traded volume at the given liquidity. Throws std::domain_error when the
// curve is logarithmic and liquidity <= 0 or gamma == 0.
double demand_value(const DemandCurve& curve, double liquidity);

// dD/dV at the given liquidity (gamma for linear, 1/V for logarithmic).
double demand_slope(const DemandCurve& curve, double liquidity);

}  // namespace lpgame
