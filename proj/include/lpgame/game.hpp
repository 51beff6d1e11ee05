#pragma once

#include <vector>

#include "lpgame/demand.hpp"

namespace lpgame {

// Market-level primitives shared by every operation.
//   fee:               f, fee per unit volume, in price units
//   adverse_selection: A, arbitrage cost per unit liquidity per horizon
//   external_return:   r, return per unit capital per horizon
//   adverse_selection_fee_sensitivity: dA/df, <= 0, user supplied
struct MarketParams {
    double fee;
    double adverse_selection;
    double external_return;
    double adverse_selection_fee_sensitivity;

    MarketParams(double fee, double adverse_selection, double external_return,
                 double adverse_selection_fee_sensitivity = 0.0);
};

// Converts an adverse-selection intensity quoted in daily basis points
// into a per-horizon decimal: bp_daily * 1e-4 * horizon_days.
double adverse_selection_from_bp(double bp_daily, double horizon_days);

// Game dimensions: N symmetric investors, each with endowment E, plus the
// liquidity a cooperative/monopolist posts to capture base demand (epsilon).
struct GameSetup {
    int n_investors;
    double endowment;
    double epsilon;

    GameSetup(int n_investors, double endowment, double epsilon = 1e-6);
};

// Per-investor deposit fractions, each in [0,1].
struct Allocation {
    std::vector<double> weights;
    explicit Allocation(std::vector<double> weights);
};

double aggregate_liquidity(const GameSetup& setup, const Allocation& alloc);

// pi(V) = f * D(V) - A * V
double aggregate_profit(const MarketParams& m, const DemandCurve& curve, double liquidity);

// P(V) = pi(V) - r * V
double lp_performance(const MarketParams& m, const DemandCurve& curve, double liquidity);

// Profit/performance attributed to liquidity providers: an empty pool trades
// nothing, so both are zero at V == 0 and equal the Eq. values for V > 0.
// Solver reports use these; the raw operations above evaluate the formulas.
double attributed_profit(const MarketParams& m, const DemandCurve& curve, double liquidity);
double attributed_performance(const MarketParams& m, const DemandCurve& curve, double liquidity);

// Investor objective: w*E * pi(V)/V + (1-w)*E*r with V = w*E + others_liquidity.
// Returns E*r when the investor deposits nothing (outside option only).
double investor_payoff(const MarketParams& m, const DemandCurve& curve, const GameSetup& setup,
                       double own_weight, double others_liquidity);

// Marginal benefit of one more unit of own liquidity in the N-player game,
// linear demand only:
//   f*(B_D + gamma)              at the all-zero point
//   f*S*B_D/(v+S)^2 + f*gamma    otherwise (competition + liquidity effect)
double marginal_benefit_n(const MarketParams& m, const DemandCurve& curve, double own_liquidity,
                          double others_liquidity);

// Marginal cost of providing liquidity: A. The opportunity-cost-inclusive
// value used in the regime thresholds is A + r; callers add r themselves.
double marginal_cost(const MarketParams& m);

// Monopolist marginal benefit, linear demand only: f*(B_D + gamma) at zero
// liquidity, f*gamma otherwise.
double monopolist_marginal_benefit(const MarketParams& m, const DemandCurve& curve, bool at_zero);

}  // namespace lpgame
