#include "lpgame/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lpgame {

MarketParams::MarketParams(double fee_, double adverse_selection_, double external_return_,
                           double adverse_selection_fee_sensitivity_)
    : fee(fee_),
      adverse_selection(adverse_selection_),
      external_return(external_return_),
      adverse_selection_fee_sensitivity(adverse_selection_fee_sensitivity_) {
    if (!(fee > 0.0)) throw std::invalid_argument("market: fee must be > 0");
    if (!(adverse_selection >= 0.0))
        throw std::invalid_argument("market: adverse_selection must be >= 0");
    if (!(external_return >= 0.0))
        throw std::invalid_argument("market: external_return must be >= 0");
    if (!(adverse_selection_fee_sensitivity <= 0.0))
        throw std::invalid_argument("market: adverse_selection_fee_sensitivity must be <= 0");
}

double adverse_selection_from_bp(double bp_daily, double horizon_days) {
    if (!(bp_daily >= 0.0)) throw std::invalid_argument("market: bp_daily must be >= 0");
    if (!(horizon_days > 0.0)) throw std::invalid_argument("market: horizon_days must be > 0");
    return bp_daily * 1e-4 * horizon_days;
}

GameSetup::GameSetup(int n_investors_, double endowment_, double epsilon_)
    : n_investors(n_investors_), endowment(endowment_), epsilon(epsilon_) {
    if (n_investors < 1) throw std::invalid_argument("setup: n_investors must be >= 1");
    if (!(endowment > 0.0)) throw std::invalid_argument("setup: endowment must be > 0");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("setup: epsilon must be >= 0");
    if (!(epsilon < static_cast<double>(n_investors) * endowment))
        throw std::invalid_argument("setup: epsilon must be < n_investors * endowment");
}

Allocation::Allocation(std::vector<double> weights_) : weights(std::move(weights_)) {
    for (double w : weights) {
        if (!(w >= 0.0 && w <= 1.0))
            throw std::invalid_argument("allocation: weights must lie in [0,1]");
    }
}

double aggregate_liquidity(const GameSetup& setup, const Allocation& alloc) {
    if (alloc.weights.size() != static_cast<size_t>(setup.n_investors))
        throw std::invalid_argument("allocation: weight count must equal n_investors");
    double sum = 0.0;
    for (double w : alloc.weights) sum += w;
    return setup.endowment * sum;
}

double aggregate_profit(const MarketParams& m, const DemandCurve& curve, double liquidity) {
    return m.fee * demand_value(curve, liquidity) - m.adverse_selection * liquidity;
}

double lp_performance(const MarketParams& m, const DemandCurve& curve, double liquidity) {
    return aggregate_profit(m, curve, liquidity) - m.external_return * liquidity;
}

double attributed_profit(const MarketParams& m, const DemandCurve& curve, double liquidity) {
    return liquidity > 0.0 ? aggregate_profit(m, curve, liquidity) : 0.0;
}

double attributed_performance(const MarketParams& m, const DemandCurve& curve, double liquidity) {
    return liquidity > 0.0 ? lp_performance(m, curve, liquidity) : 0.0;
}

double investor_payoff(const MarketParams& m, const DemandCurve& curve, const GameSetup& setup,
                       double own_weight, double others_liquidity) {
    if (!(own_weight >= 0.0 && own_weight <= 1.0))
        throw std::domain_error("game: own_weight must lie in [0,1]");
    if (!(others_liquidity >= 0.0))
        throw std::domain_error("game: others_liquidity must be >= 0");
    const double endowment = setup.endowment;
    if (own_weight == 0.0) return endowment * m.external_return;
    const double own = own_weight * endowment;
    const double total = own + others_liquidity;
    return own * aggregate_profit(m, curve, total) / total +
           (1.0 - own_weight) * endowment * m.external_return;
}

namespace {

void require_linear(const DemandCurve& curve, const char* op) {
    if (!curve.is_linear())
        throw std::invalid_argument(std::string("game: ") + op + " requires a linear demand curve");
}

}  // namespace

double marginal_benefit_n(const MarketParams& m, const DemandCurve& curve, double own_liquidity,
                          double others_liquidity) {
    require_linear(curve, "marginal_benefit_n");
    if (!(own_liquidity >= 0.0 && others_liquidity >= 0.0))
        throw std::domain_error("game: liquidity arguments must be >= 0");
    if (own_liquidity == 0.0 && others_liquidity == 0.0)
        return m.fee * (curve.base_demand + curve.gamma);
    const double total = own_liquidity + others_liquidity;
    return m.fee * others_liquidity * curve.base_demand / (total * total) + m.fee * curve.gamma;
}

double marginal_cost(const MarketParams& m) { return m.adverse_selection; }

double monopolist_marginal_benefit(const MarketParams& m, const DemandCurve& curve, bool at_zero) {
    require_linear(curve, "monopolist_marginal_benefit");
    return at_zero ? m.fee * (curve.base_demand + curve.gamma) : m.fee * curve.gamma;
}

}  // namespace lpgame
