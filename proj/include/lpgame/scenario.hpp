#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpgame/numeric.hpp"

namespace lpgame {

enum class SweepParameter {
    n_investors,
    base_demand,
    fee,
    adverse_selection,
    gamma,
    mitigation_fraction
};

enum class SweepSpacing { linear, log };

std::string to_string(SweepParameter parameter);

struct SweepSpec {
    SweepParameter parameter;
    double start;
    double stop;
    int steps;
    SweepSpacing spacing = SweepSpacing::linear;
};

// Grid of swept values; integer parameters land on integer grids.
std::vector<double> sweep_grid(const SweepSpec& spec);

// One scenario per config file: market + curve + game dimensions + solver
// knobs, plus an optional sweep block and an optional rebate fraction.
struct Scenario {
    MarketParams market;
    DemandCurve curve;
    GameSetup setup;
    SolverConfig solver;
    std::optional<SweepSpec> sweep;
    std::optional<double> mitigation_fraction;
    std::string chart_y_column = "poa";

    Scenario(MarketParams market, DemandCurve curve, GameSetup setup,
             SolverConfig solver = {})
        : market(market), curve(curve), setup(setup), solver(solver) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& message, int line = 0);
    int line() const { return line_; }

private:
    int line_;
};

// Parses the flat dotted-key format (one `section.key = value` per line,
// `#` comments). Throws ConfigError with the offending line number.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace lpgame
