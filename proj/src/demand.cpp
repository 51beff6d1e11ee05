#include "lpgame/demand.hpp"

#include <cmath>
#include <stdexcept>

namespace lpgame {

DemandCurve DemandCurve::linear(double base_demand, double gamma) {
    if (!(base_demand >= 0.0)) throw std::invalid_argument("demand: base_demand must be >= 0");
    if (!(gamma >= 0.0)) throw std::invalid_argument("demand: gamma must be >= 0");
    return DemandCurve{CurveKind::linear, base_demand, gamma};
}

DemandCurve DemandCurve::logarithmic(double base_demand, double gamma) {
    if (!(base_demand >= 0.0)) throw std::invalid_argument("demand: base_demand must be >= 0");
    if (!(gamma >= 0.0)) throw std::invalid_argument("demand: gamma must be >= 0");
    return DemandCurve{CurveKind::logarithmic, base_demand, gamma};
}

double DemandCurve::min_liquidity() const {
    if (kind == CurveKind::linear) return 0.0;
    if (!(gamma > 0.0)) throw std::domain_error("demand: logarithmic curve requires gamma > 0");
    return std::exp(-base_demand) / gamma;
}

double demand_value(const DemandCurve& curve, double liquidity) {
    if (curve.kind == CurveKind::linear) {
        if (!(liquidity >= 0.0)) throw std::domain_error("demand: liquidity must be >= 0");
        return curve.base_demand + curve.gamma * liquidity;
    }
    if (!(curve.gamma > 0.0)) throw std::domain_error("demand: logarithmic curve requires gamma > 0");
    if (!(liquidity > 0.0)) throw std::domain_error("demand: logarithmic curve requires liquidity > 0");
    return curve.base_demand + std::log(curve.gamma * liquidity);
}

double demand_slope(const DemandCurve& curve, double liquidity) {
    if (curve.kind == CurveKind::linear) {
        if (!(liquidity >= 0.0)) throw std::domain_error("demand: liquidity must be >= 0");
        return curve.gamma;
    }
    if (!(curve.gamma > 0.0)) throw std::domain_error("demand: logarithmic curve requires gamma > 0");
    if (!(liquidity > 0.0)) throw std::domain_error("demand: logarithmic curve requires liquidity > 0");
    return 1.0 / liquidity;
}

}  // namespace lpgame
