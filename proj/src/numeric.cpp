#include "lpgame/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace lpgame {

void SolverConfig::validate() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("solver: tolerance must be > 0");
    if (max_iterations < 1) throw std::invalid_argument("solver: max_iterations must be >= 1");
    if (!(damping > 0.0 && damping <= 1.0))
        throw std::invalid_argument("solver: damping must lie in (0,1]");
    if (grid_points < 2) throw std::invalid_argument("solver: grid_points must be >= 2");
}

SolverError::SolverError(const std::string& message, double last_iterate, double residual)
    : std::runtime_error(message + " (last iterate " + std::to_string(last_iterate) +
                         ", residual " + std::to_string(residual) + ")"),
      last_iterate_(last_iterate),
      residual_(residual) {}

namespace numeric {
namespace {

constexpr double kTieRelTol = 1e-12;

// Smallest weight whose total liquidity stays in the demand curve's domain.
double feasible_weight_floor(const DemandCurve& curve, const GameSetup& setup,
                             double others_liquidity) {
    if (curve.is_linear()) return 0.0;
    const double v_min = curve.min_liquidity();
    if (others_liquidity >= v_min) return 0.0;
    return (v_min - others_liquidity) / setup.endowment;
}

struct Candidate {
    double x = 0.0;
    double value = -std::numeric_limits<double>::infinity();
};

// Keep the better candidate; prefer the smaller point on a near-tie.
void offer(Candidate& best, double x, double value) {
    if (std::isnan(value)) return;
    if (std::isinf(best.value)) {
        best = Candidate{x, value};
        return;
    }
    const double scale = std::max({1.0, std::fabs(best.value), std::fabs(value)});
    if (value > best.value + kTieRelTol * scale) {
        best = Candidate{x, value};
    } else if (value > best.value - kTieRelTol * scale && x < best.x) {
        best = Candidate{x, value};
    }
}

// Bisection on a decreasing-through-zero derivative inside [a,b].
template <typename DF>
double bisect_derivative(DF&& derivative, double a, double b) {
    for (int it = 0; it < 200 && b - a > 1e-18; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (derivative(mid) > 0.0)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

// Golden-section maximization fallback for brackets without a usable
// derivative sign change.
template <typename F>
double golden_section_max(F&& objective, double a, double b) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = objective(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

// Grid scan + refinement over [lo, hi]. `derivative` may be null when no
// analytic derivative is available at the interval edges.
template <typename F, typename DF>
Candidate maximize_on_interval(F&& objective, DF&& derivative, double lo, double hi,
                               int grid_points, bool log_spacing) {
    Candidate best;
    const int n = std::max(2, grid_points);
    std::vector<double> grid(static_cast<size_t>(n));
    if (log_spacing) {
        const double llo = std::log(lo);
        const double lhi = std::log(hi);
        for (int i = 0; i < n; ++i)
            grid[static_cast<size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
        grid.front() = lo;
        grid.back() = hi;
    } else {
        for (int i = 0; i < n; ++i) grid[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    }

    int arg = 0;
    std::vector<double> values(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        values[i] = objective(grid[i]);
        if (values[i] > values[static_cast<size_t>(arg)]) arg = static_cast<int>(i);
    }
    offer(best, grid[static_cast<size_t>(arg)], values[static_cast<size_t>(arg)]);

    const double a = grid[static_cast<size_t>(std::max(0, arg - 1))];
    const double b = grid[static_cast<size_t>(std::min(n - 1, arg + 1))];
    if (!(b > a)) return best;

    bool refined = false;
    if (derivative) {
        const double da = derivative(a);
        const double db = derivative(b);
        if (da > 0.0 && db < 0.0) {
            const double x = bisect_derivative(derivative, a, b);
            offer(best, x, objective(x));
            refined = true;
        } else if (da <= 0.0 && arg == 0) {
            refined = true;  // maximum sits on the left edge, already offered
        } else if (db >= 0.0 && arg == n - 1) {
            refined = true;  // right edge
        }
    }
    if (!refined) {
        const double x = golden_section_max(objective, a, b);
        offer(best, x, objective(x));
    }
    return best;
}

// Projected gradient ascent with backtracking; the fidelity mode behind
// SolverConfig::gradient_descent.
template <typename F, typename DF>
Candidate gradient_ascent(F&& objective, DF&& derivative, double start, double lo, double hi,
                          const SolverConfig& cfg) {
    double x = std::clamp(start, lo, hi);
    double value = objective(x);
    double step = 0.1 * (hi - lo);
    for (int it = 0; it < cfg.max_iterations && step > 1e-18; ++it) {
        const double g = derivative(x);
        const double dir = g > 0.0 ? 1.0 : (g < 0.0 ? -1.0 : 0.0);
        if (dir == 0.0) break;
        const double x_new = std::clamp(x + dir * step, lo, hi);
        const double v_new = objective(x_new);
        if (v_new > value) {
            if (std::fabs(x_new - x) <= cfg.tolerance && step <= cfg.tolerance) {
                x = x_new;
                value = v_new;
                break;
            }
            x = x_new;
            value = v_new;
            step *= 1.2;
            step = std::min(step, hi - lo);
        } else {
            step *= 0.5;
        }
    }
    return Candidate{x, value};
}

}  // namespace

double payoff_weight_derivative(const MarketParams& m, const DemandCurve& curve,
                                const GameSetup& setup, double own_weight,
                                double others_liquidity) {
    const double own = own_weight * setup.endowment;
    const double total = own + others_liquidity;
    if (!(total > 0.0))
        throw std::domain_error("numeric: payoff derivative requires positive total liquidity");
    const double profit = aggregate_profit(m, curve, total);
    const double profit_slope = m.fee * demand_slope(curve, total) - m.adverse_selection;
    const double d_dv = profit / total + own * (profit_slope * total - profit) / (total * total) -
                        m.external_return;
    return setup.endowment * d_dv;
}

double best_response(const MarketParams& m, const DemandCurve& curve, const GameSetup& setup,
                     double others_liquidity, const SolverConfig& cfg) {
    cfg.validate();
    if (!(others_liquidity >= 0.0))
        throw std::domain_error("numeric: others_liquidity must be >= 0");

    const double lo = feasible_weight_floor(curve, setup, others_liquidity);
    Candidate best;
    offer(best, 0.0, investor_payoff(m, curve, setup, 0.0, others_liquidity));
    if (lo > 1.0) return best.x;  // only the outside option is feasible

    auto payoff = [&](double w) { return investor_payoff(m, curve, setup, w, others_liquidity); };
    auto derivative = std::function<double(double)>([&](double w) -> double {
        if (w * setup.endowment + others_liquidity <= 0.0)
            return std::numeric_limits<double>::infinity();
        return payoff_weight_derivative(m, curve, setup, w, others_liquidity);
    });

    Candidate inner;
    if (cfg.gradient_descent) {
        // Coarse scan for a starting point, then projected ascent.
        Candidate coarse = maximize_on_interval(payoff, std::function<double(double)>{}, lo, 1.0,
                                                cfg.grid_points, false);
        inner = gradient_ascent(payoff, derivative, coarse.x, lo, 1.0, cfg);
        offer(inner, coarse.x, coarse.value);
    } else {
        inner = maximize_on_interval(payoff, derivative, lo, 1.0, cfg.grid_points, false);
    }
    offer(best, inner.x, inner.value);
    return best.x;
}

namespace {

// Fixed-point iteration w <- (1-d)*w + d*BR((N-1)*E*w) with slope-adaptive
// damping; a bracket on the residual g(w) = BR - w backs the iteration with
// bisection when damped steps misbehave.
double solve_symmetric_weight(const std::function<double(double)>& response, double start,
                              const SolverConfig& cfg) {
    // The response at exactly S = 0 can be a non-attained supremum (base
    // demand capture); keep iterates strictly positive and let the boundary
    // snap below report exact zeros.
    constexpr double kWeightFloor = 1e-16;
    double w = std::clamp(start, kWeightFloor, 1.0);
    double bracket_lo = std::numeric_limits<double>::quiet_NaN();  // g > 0 here
    double bracket_hi = std::numeric_limits<double>::quiet_NaN();  // g < 0 here
    double prev_w = std::numeric_limits<double>::quiet_NaN();
    double prev_b = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::infinity();

    for (int it = 0; it < cfg.max_iterations; ++it) {
        const double b = response(w);
        const double g = b - w;
        residual = std::fabs(g);
        if (residual <= cfg.tolerance) {
            // |BR(w) - w| <= tolerance: w is its own best response within the
            // 10x verification bound. Snap onto exact boundary fixed points.
            if (w <= 10.0 * cfg.tolerance && response(0.0) == 0.0) return 0.0;
            if (w >= 1.0 - 10.0 * cfg.tolerance && response(1.0) == 1.0) return 1.0;
            return w;
        }

        if (g > 0.0)
            bracket_lo = w;
        else
            bracket_hi = w;
        const bool have_bracket = !std::isnan(bracket_lo) && !std::isnan(bracket_hi);
        if (have_bracket && bracket_lo >= bracket_hi) {
            // residual not monotone here; drop the stale bracket
            bracket_lo = bracket_hi = std::numeric_limits<double>::quiet_NaN();
        }

        double step_fraction = cfg.damping;
        if (!std::isnan(prev_w) && std::fabs(w - prev_w) > 1e-12) {
            const double slope = (b - prev_b) / (w - prev_w);
            if (slope < 1.0 - 1e-9) step_fraction = std::clamp(1.0 / (1.0 - slope), 1e-4, 1.0);
        }
        double w_next = std::clamp(w + step_fraction * g, kWeightFloor, 1.0);
        if (!std::isnan(bracket_lo) && !std::isnan(bracket_hi) &&
            (w_next <= bracket_lo || w_next >= bracket_hi)) {
            w_next = 0.5 * (bracket_lo + bracket_hi);
        }
        if (w_next == w) {
            if (!std::isnan(bracket_lo) && !std::isnan(bracket_hi))
                w_next = 0.5 * (bracket_lo + bracket_hi);
            else
                break;
        }
        prev_w = w;
        prev_b = b;
        w = w_next;
    }
    throw SolverError("numeric: symmetric equilibrium iteration did not converge", w, residual);
}

}  // namespace

EquilibriumReport symmetric_equilibrium(const MarketParams& m, const DemandCurve& curve,
                                        const GameSetup& setup, const SolverConfig& cfg) {
    cfg.validate();
    if (setup.n_investors < 2)
        throw std::invalid_argument("numeric: symmetric_equilibrium requires N >= 2");

    const double opponents = static_cast<double>(setup.n_investors - 1) * setup.endowment;
    auto response = std::function<double(double)>([&](double w) {
        return best_response(m, curve, setup, opponents * w, cfg);
    });

    double weight = 0.0;
    bool solved = false;
    SolverError failure("numeric: unsolved", 0.0, 0.0);
    for (double start : {0.5, 0.01, 0.99}) {
        try {
            weight = solve_symmetric_weight(response, start, cfg);
            solved = true;
            break;
        } catch (const SolverError& err) {
            failure = err;
        }
    }
    if (!solved) throw failure;

    const double liquidity = static_cast<double>(setup.n_investors) * setup.endowment * weight;
    Regime regime;
    bool clamped = false;
    if (curve.is_linear()) {
        regime = closed_form::classify_regime(m, curve);
        if (regime == Regime::interior) {
            const double capacity = static_cast<double>(setup.n_investors) * setup.endowment;
            clamped = closed_form::equilibrium_liquidity_limit(m, curve) *
                          (setup.n_investors - 1.0) / setup.n_investors >
                      capacity;
        }
    } else {
        if (weight >= 1.0) {
            regime = Regime::full_deposit;
            clamped = payoff_weight_derivative(m, curve, setup, 1.0, opponents) > 0.0;
        } else if (weight <= 0.0) {
            regime = Regime::no_deposit;
        } else {
            regime = Regime::interior;
        }
    }
    return EquilibriumReport{regime,
                             weight,
                             liquidity,
                             attributed_profit(m, curve, liquidity),
                             attributed_performance(m, curve, liquidity),
                             clamped};
}

CooperativeOptimum cooperative_optimum(const MarketParams& m, const DemandCurve& curve,
                                       const GameSetup& setup, const SolverConfig& cfg) {
    cfg.validate();
    const double capacity = static_cast<double>(setup.n_investors) * setup.endowment;

    if (curve.is_linear()) {
        switch (closed_form::classify_regime(m, curve)) {
            case Regime::full_deposit:
                return CooperativeOptimum{capacity, lp_performance(m, curve, capacity)};
            case Regime::interior:
                // epsilon captures base demand even in the epsilon -> 0 limit
                return CooperativeOptimum{setup.epsilon,
                                          lp_performance(m, curve, setup.epsilon)};
            case Regime::no_deposit: return CooperativeOptimum{0.0, 0.0};
        }
    }

    const double lo = std::max(curve.min_liquidity(), 1e-300);
    Candidate best;
    offer(best, 0.0, 0.0);  // empty pool: nothing trades, nothing is earned
    if (lo < capacity) {
        auto performance = [&](double v) { return lp_performance(m, curve, v); };
        auto derivative = std::function<double(double)>([&](double v) {
            return m.fee * demand_slope(curve, v) - m.adverse_selection - m.external_return;
        });
        const bool log_spacing = lo > 0.0 && capacity / lo > 100.0;
        Candidate inner =
            maximize_on_interval(performance, derivative, lo, capacity, cfg.grid_points,
                                 log_spacing);
        offer(best, inner.x, inner.value);
    }
    return CooperativeOptimum{best.x, best.value};
}

PoAReport price_of_anarchy(const MarketParams& m, const DemandCurve& curve,
                           const GameSetup& setup, const SolverConfig& cfg) {
    const CooperativeOptimum coop = cooperative_optimum(m, curve, setup, cfg);
    const EquilibriumReport eq = symmetric_equilibrium(m, curve, setup, cfg);
    return PoAReport{coop.liquidity, eq.aggregate_liquidity, coop.performance, eq.performance,
                     poa_from_performances(coop.performance, eq.performance)};
}

}  // namespace numeric
}  // namespace lpgame
