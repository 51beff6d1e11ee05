#include "lpgame/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpgame {

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::full_deposit: return "full_deposit";
        case Regime::interior: return "interior";
        case Regime::no_deposit: return "no_deposit";
    }
    return "unknown";
}

double poa_from_performances(double cooperative, double equilibrium) {
    const double scale =
        std::max({1.0, std::fabs(cooperative), std::fabs(equilibrium)});
    if (std::fabs(cooperative - equilibrium) <= 1e-12 * scale) return 1.0;
    if (equilibrium > 0.0) return cooperative / equilibrium;
    if (cooperative > 0.0) return std::numeric_limits<double>::infinity();
    return 1.0;
}

namespace closed_form {
namespace {

void require_linear(const DemandCurve& curve, const char* op) {
    if (!curve.is_linear())
        throw std::invalid_argument(std::string("closed_form: ") + op +
                                    " requires a linear demand curve");
}

void require_two_players(const GameSetup& setup, const char* op) {
    if (setup.n_investors < 2)
        throw std::invalid_argument(std::string("closed_form: ") + op + " requires N >= 2");
}

// Interior-case aggregate liquidity before the endowment cap.
double interior_liquidity_raw(const MarketParams& m, const DemandCurve& curve,
                              const GameSetup& setup) {
    const double n = static_cast<double>(setup.n_investors);
    const double spread = m.adverse_selection + m.external_return - m.fee * curve.gamma;
    return (n - 1.0) / n * curve.base_demand * m.fee / spread;
}

void require_interior(const MarketParams& m, const DemandCurve& curve, const char* op) {
    if (classify_regime(m, curve) != Regime::interior)
        throw std::domain_error(std::string("closed_form: ") + op +
                                " is defined only in the interior regime");
}

}  // namespace

Regime classify_regime(const MarketParams& m, const DemandCurve& curve) {
    require_linear(curve, "classify_regime");
    const double cost = m.adverse_selection + m.external_return;
    if (cost <= m.fee * curve.gamma) return Regime::full_deposit;
    if (cost <= m.fee * (curve.base_demand + curve.gamma)) return Regime::interior;
    return Regime::no_deposit;
}

double best_response(const MarketParams& m, const DemandCurve& curve, const GameSetup& setup,
                     double others_liquidity) {
    require_linear(curve, "best_response");
    require_two_players(setup, "best_response");
    if (!(others_liquidity >= 0.0))
        throw std::domain_error("closed_form: others_liquidity must be >= 0");

    const double cost = m.adverse_selection + m.external_return;
    const double fg = m.fee * curve.gamma;
    if (cost <= fg) return 1.0;

    if (others_liquidity == 0.0) {
        // The interior branch divides by S; with no base demand the
        // competition term vanishes and depositing cannot pay.
        if (curve.base_demand == 0.0) return 0.0;
        throw std::domain_error(
            "closed_form: interior best response is undefined at zero opposing liquidity");
    }

    if (cost <= m.fee * (curve.base_demand / others_liquidity + curve.gamma)) {
        const double own = std::sqrt(curve.base_demand * others_liquidity * m.fee / (cost - fg)) -
                           others_liquidity;
        return std::clamp(own / setup.endowment, 0.0, 1.0);
    }
    return 0.0;
}

double equilibrium_weight(const MarketParams& m, const DemandCurve& curve,
                          const GameSetup& setup) {
    require_linear(curve, "equilibrium_weight");
    require_two_players(setup, "equilibrium_weight");
    switch (classify_regime(m, curve)) {
        case Regime::full_deposit: return 1.0;
        case Regime::no_deposit: return 0.0;
        case Regime::interior: break;
    }
    const double n = static_cast<double>(setup.n_investors);
    const double spread = m.adverse_selection + m.external_return - m.fee * curve.gamma;
    const double weight =
        (n - 1.0) / (n * n) * curve.base_demand / setup.endowment * m.fee / spread;
    return std::min(weight, 1.0);
}

double equilibrium_liquidity(const MarketParams& m, const DemandCurve& curve,
                             const GameSetup& setup) {
    require_linear(curve, "equilibrium_liquidity");
    require_two_players(setup, "equilibrium_liquidity");
    const double capacity = static_cast<double>(setup.n_investors) * setup.endowment;
    switch (classify_regime(m, curve)) {
        case Regime::full_deposit: return capacity;
        case Regime::no_deposit: return 0.0;
        case Regime::interior: break;
    }
    return std::min(interior_liquidity_raw(m, curve, setup), capacity);
}

double equilibrium_liquidity_limit(const MarketParams& m, const DemandCurve& curve) {
    require_linear(curve, "equilibrium_liquidity_limit");
    const double spread = m.adverse_selection + m.external_return - m.fee * curve.gamma;
    if (!(spread > 0.0))
        throw std::domain_error("closed_form: liquidity limit requires A + r > f*gamma");
    return curve.base_demand * m.fee / spread;
}

double cooperative_liquidity(const MarketParams& m, const DemandCurve& curve,
                             const GameSetup& setup) {
    require_linear(curve, "cooperative_liquidity");
    switch (classify_regime(m, curve)) {
        case Regime::full_deposit:
            return static_cast<double>(setup.n_investors) * setup.endowment;
        case Regime::interior: return setup.epsilon;
        case Regime::no_deposit: return 0.0;
    }
    return 0.0;
}

EquilibriumReport equilibrium(const MarketParams& m, const DemandCurve& curve,
                              const GameSetup& setup) {
    const Regime regime = classify_regime(m, curve);
    const double weight = equilibrium_weight(m, curve, setup);
    const double liquidity = equilibrium_liquidity(m, curve, setup);
    bool clamped = false;
    if (regime == Regime::interior) {
        const double capacity = static_cast<double>(setup.n_investors) * setup.endowment;
        clamped = interior_liquidity_raw(m, curve, setup) > capacity;
    }
    return EquilibriumReport{regime,
                             weight,
                             liquidity,
                             attributed_profit(m, curve, liquidity),
                             attributed_performance(m, curve, liquidity),
                             clamped};
}

PoAReport price_of_anarchy(const MarketParams& m, const DemandCurve& curve,
                           const GameSetup& setup) {
    require_linear(curve, "price_of_anarchy");
    require_two_players(setup, "price_of_anarchy");
    const Regime regime = classify_regime(m, curve);
    const double coop_liq = cooperative_liquidity(m, curve, setup);
    const double eq_liq = equilibrium_liquidity(m, curve, setup);
    // An interior cooperative captures base demand even as epsilon -> 0, so
    // its performance is the formula value rather than the empty-pool zero.
    const double coop_perf = regime == Regime::interior
                                 ? lp_performance(m, curve, coop_liq)
                                 : attributed_performance(m, curve, coop_liq);
    const double eq_perf = attributed_performance(m, curve, eq_liq);

    double poa;
    const double capacity = static_cast<double>(setup.n_investors) * setup.endowment;
    if (regime == Regime::interior && interior_liquidity_raw(m, curve, setup) <= capacity) {
        const double n = static_cast<double>(setup.n_investors);
        const double fee_base = m.fee * curve.base_demand;
        const double margin = m.fee * curve.gamma - m.adverse_selection - m.external_return;
        poa = n * (fee_base + setup.epsilon * margin) / fee_base;
    } else {
        poa = poa_from_performances(coop_perf, eq_perf);
    }
    return PoAReport{coop_liq, eq_liq, coop_perf, eq_perf, poa};
}

LvrExcess excess_lvr(const MarketParams& m, const DemandCurve& curve, const GameSetup& setup) {
    require_linear(curve, "excess_lvr");
    require_two_players(setup, "excess_lvr");
    require_interior(m, curve, "excess_lvr");

    const double n = static_cast<double>(setup.n_investors);
    const double a = m.adverse_selection;
    const double r = m.external_return;
    const double fg = m.fee * curve.gamma;
    const double spread = a + r - fg;
    const double scale = (n - 1.0) / n * curve.base_demand;  // V = scale * f / spread
    const double liquidity = scale * m.fee / spread;
    const double sens = m.adverse_selection_fee_sensitivity;

    LvrExcess out;
    out.value = a * (liquidity - setup.epsilon);
    out.d_dA = liquidity * (1.0 - a / spread) - setup.epsilon;
    // d/df of A(f) * (V(f) - eps) with A'(f) = sens:
    out.d_df = scale / (spread * spread) * (sens * m.fee * (r - fg) + a * (a + r)) -
               sens * setup.epsilon;
    return out;
}

VolumeExcess excess_volume(const MarketParams& m, const DemandCurve& curve,
                           const GameSetup& setup) {
    require_linear(curve, "excess_volume");
    require_two_players(setup, "excess_volume");
    require_interior(m, curve, "excess_volume");

    const double n = static_cast<double>(setup.n_investors);
    const double spread = m.adverse_selection + m.external_return - m.fee * curve.gamma;
    const double liquidity = interior_liquidity_raw(m, curve, setup);

    VolumeExcess out;
    out.value = curve.gamma * (liquidity - setup.epsilon);
    out.limit_as_n_grows =
        curve.gamma * (curve.base_demand * m.fee / spread - setup.epsilon);
    out.d_dBD = curve.gamma * (n - 1.0) / n * m.fee / spread;
    return out;
}

double demand_multiplier(const MarketParams& m, const DemandCurve& curve,
                         const GameSetup& setup) {
    require_linear(curve, "demand_multiplier");
    require_two_players(setup, "demand_multiplier");
    require_interior(m, curve, "demand_multiplier");
    const double n = static_cast<double>(setup.n_investors);
    const double fg = m.fee * curve.gamma;
    const double spread = m.adverse_selection + m.external_return - fg;
    return 1.0 + (n - 1.0) / n * fg / spread;
}

RebateReport rebate_analysis(const MarketParams& m, const DemandCurve& curve,
                             const GameSetup& setup, double mitigation_fraction) {
    require_linear(curve, "rebate_analysis");
    require_two_players(setup, "rebate_analysis");
    if (!(mitigation_fraction >= 0.0 && mitigation_fraction < 1.0))
        throw std::invalid_argument("closed_form: mitigation_fraction must lie in [0,1)");

    const double keep = 1.0 - mitigation_fraction;
    const MarketParams mitigated(m.fee, keep * m.adverse_selection, m.external_return,
                                 m.adverse_selection_fee_sensitivity);
    const Regime before = classify_regime(m, curve);
    const Regime after = classify_regime(mitigated, curve);
    const double rebate_liq = equilibrium_liquidity(mitigated, curve, setup);
    const double eq_liq = equilibrium_liquidity(m, curve, setup);

    const double cost = m.adverse_selection + m.external_return;
    const double mitigated_cost = keep * m.adverse_selection + m.external_return;
    const double fg = m.fee * curve.gamma;
    const double fbd = m.fee * (curve.base_demand + curve.gamma);
    const double inf = std::numeric_limits<double>::infinity();

    double ratio;
    if (cost > fbd && fbd > mitigated_cost) {
        ratio = inf;  // mitigation revives a game that supplied nothing
    } else if (cost > fg && fg > mitigated_cost) {
        ratio = inf;  // mitigated agents deposit everything they have
    } else if (before == Regime::interior && after == Regime::interior) {
        const double capacity = static_cast<double>(setup.n_investors) * setup.endowment;
        const bool uncapped =
            interior_liquidity_raw(m, curve, setup) <= capacity &&
            interior_liquidity_raw(mitigated, curve, setup) <= capacity;
        if (uncapped) {
            ratio = keep * (cost - fg) / (mitigated_cost - fg);
        } else {
            ratio = eq_liq > 0.0 ? keep * rebate_liq / eq_liq : inf;
        }
    } else {
        ratio = eq_liq > 0.0 ? keep * rebate_liq / eq_liq : inf;
    }
    return RebateReport{mitigation_fraction, rebate_liq, ratio, before, after};
}

}  // namespace closed_form
}  // namespace lpgame
