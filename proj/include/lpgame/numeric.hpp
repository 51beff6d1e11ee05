#pragma once

#include <stdexcept>
#include <string>

#include "lpgame/closed_form.hpp"

namespace lpgame {

struct SolverConfig {
    double tolerance = 1e-10;   // convergence threshold on weights
    int max_iterations = 10000;
    double damping = 0.5;       // initial fixed-point step fraction
    int grid_points = 1024;     // bracketing scan resolution
    bool gradient_descent = false;  // use projected gradient ascent instead of
                                    // bracketed derivative bisection

    void validate() const;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& message, double last_iterate, double residual);
    double last_iterate() const { return last_iterate_; }
    double residual() const { return residual_; }

private:
    double last_iterate_;
    double residual_;
};

struct CooperativeOptimum {
    double liquidity;
    double performance;
};

// Demand-curve-agnostic solvers. The linear closed forms above serve as
// oracles for these on linear curves; the numeric path is the only route for
// the logarithmic curve.
namespace numeric {

// Analytic d/dw of the investor objective at (w, S); requires w*E + S > 0.
double payoff_weight_derivative(const MarketParams& m, const DemandCurve& curve,
                                const GameSetup& setup, double own_weight,
                                double others_liquidity);

// Weight maximizing the investor objective over [0,1]: coarse grid scan to
// bracket the maximum, then bisection on the analytic payoff derivative
// (golden-section fallback). Ties resolve to the smallest weight.
double best_response(const MarketParams& m, const DemandCurve& curve, const GameSetup& setup,
                     double others_liquidity, const SolverConfig& cfg = {});

// Damped fixed-point iteration on w -> best_response((N-1)*E*w), with
// slope-adaptive damping and a bracketing bisection safeguard on the
// best-response residual. The returned weight is verified to be a best
// response against itself within 10x tolerance.
EquilibriumReport symmetric_equilibrium(const MarketParams& m, const DemandCurve& curve,
                                        const GameSetup& setup, const SolverConfig& cfg = {});

// Maximizes LP performance over V in [0, N*E]. Linear curves resolve by
// regime (interior cooperatives post epsilon, the smallest amount that
// captures base demand); other curves are solved numerically.
CooperativeOptimum cooperative_optimum(const MarketParams& m, const DemandCurve& curve,
                                       const GameSetup& setup, const SolverConfig& cfg = {});

PoAReport price_of_anarchy(const MarketParams& m, const DemandCurve& curve,
                           const GameSetup& setup, const SolverConfig& cfg = {});

}  // namespace numeric
}  // namespace lpgame
