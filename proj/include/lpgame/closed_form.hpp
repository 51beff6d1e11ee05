#pragma once

#include <string>

#include "lpgame/game.hpp"

namespace lpgame {

// Equilibrium regime under linear demand, classified from primitives:
//   full_deposit:  A + r <= f*gamma
//   interior:      f*gamma < A + r <= f*(B_D + gamma)
//   no_deposit:    A + r > f*(B_D + gamma)
enum class Regime { full_deposit, interior, no_deposit };

std::string to_string(Regime regime);

struct EquilibriumReport {
    Regime regime;
    double weight;               // symmetric equilibrium fraction of endowment
    double aggregate_liquidity;  // V at equilibrium
    double profit;               // pi(V), 0 when V == 0 (no pool, no trading)
    double performance;          // P(V), 0 when V == 0
    bool clamped;                // endowment constraint binds
};

struct PoAReport {
    double cooperative_liquidity;
    double equilibrium_liquidity;
    double cooperative_performance;
    double equilibrium_performance;
    double poa;  // cooperative over equilibrium performance; may be +inf
};

// Excess LVR in the interior regime: A * (V_equilibrium - V_cooperate),
// with its sensitivities to A and to f (the latter folds in dA/df).
struct LvrExcess {
    double value;
    double d_dA;
    double d_df;
};

// Excess traded volume in the interior regime.
struct VolumeExcess {
    double value;
    double limit_as_n_grows;
    double d_dBD;
};

// Effect of a mechanism that rebates a fraction p of adverse selection:
// lvr_ratio = (1-p)*A*V_rebate / (A*V_equilibrium), +inf when the original
// equilibrium supplies no liquidity but the mitigated game does (or when a
// regime boundary is crossed downward).
struct RebateReport {
    double mitigation_fraction;
    double rebate_liquidity;
    double lvr_ratio;
    Regime regime_before;
    Regime regime_after;
};

// poa from the two performance arms: ratio when the denominator is positive,
// +inf when it is <= 0 with a positive numerator, 1 when the arms coincide.
double poa_from_performances(double cooperative, double equilibrium);

namespace closed_form {

// All operations below require a linear demand curve and throw
// std::invalid_argument otherwise. Equilibrium operations require N >= 2.

Regime classify_regime(const MarketParams& m, const DemandCurve& curve);

// Best response weight against aggregate opposing liquidity S:
//   1                                   if A + r <= f*gamma
//   (sqrt(B_D*S*f/(A+r-f*gamma)) - S)/E if f*gamma < A + r <= f*(B_D/S + gamma)
//   0                                   otherwise
// clamped to [0,1]. The interior branch is undefined at S == 0.
double best_response(const MarketParams& m, const DemandCurve& curve, const GameSetup& setup,
                     double others_liquidity);

// Symmetric equilibrium fraction: interior value
// (N-1)/N^2 * (B_D/E) * f/(A+r-f*gamma), clamped to [0,1].
double equilibrium_weight(const MarketParams& m, const DemandCurve& curve,
                          const GameSetup& setup);

// Aggregate equilibrium liquidity: N*E*w, i.e. the interior value
// (N-1)/N * B_D * f/(A+r-f*gamma) capped at N*E.
double equilibrium_liquidity(const MarketParams& m, const DemandCurve& curve,
                             const GameSetup& setup);

// Interior-regime limit of the aggregate liquidity as N grows:
// B_D * f/(A+r-f*gamma).
double equilibrium_liquidity_limit(const MarketParams& m, const DemandCurve& curve);

// Liquidity a cooperative provides: N*E (full_deposit), epsilon (interior),
// 0 (no_deposit).
double cooperative_liquidity(const MarketParams& m, const DemandCurve& curve,
                             const GameSetup& setup);

EquilibriumReport equilibrium(const MarketParams& m, const DemandCurve& curve,
                              const GameSetup& setup);

// Interior: poa = N * (f*B_D + eps*(f*gamma - A - r)) / (f*B_D); 1 in the
// boundary regimes, where both arms coincide.
PoAReport price_of_anarchy(const MarketParams& m, const DemandCurve& curve,
                           const GameSetup& setup);

// Interior regime only (throws std::domain_error otherwise). Evaluated on
// the uncapped interior liquidity; sensitivities are exact derivatives of
// value, so they match finite differences including the epsilon terms.
LvrExcess excess_lvr(const MarketParams& m, const DemandCurve& curve, const GameSetup& setup);

VolumeExcess excess_volume(const MarketParams& m, const DemandCurve& curve,
                           const GameSetup& setup);

// dD(V_equilibrium)/dB_D = 1 + (N-1)/N * f*gamma/(A+r-f*gamma), interior only.
double demand_multiplier(const MarketParams& m, const DemandCurve& curve, const GameSetup& setup);

// Equilibrium effect of rebating a fraction p of adverse selection.
RebateReport rebate_analysis(const MarketParams& m, const DemandCurve& curve,
                             const GameSetup& setup, double mitigation_fraction);

}  // namespace closed_form
}  // namespace lpgame
