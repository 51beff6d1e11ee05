#include <doctest.h>

#include <string>

#include "lpgame/scenario.hpp"

using namespace lpgame;

namespace {

const std::string kMinimal =
    "market.fee = 0.1\n"
    "market.adverse_selection = 0.05\n"
    "market.external_return = 0.05\n"
    "curve.kind = linear\n"
    "curve.base_demand = 100\n"
    "curve.gamma = 0\n"
    "setup.n_investors = 2\n"
    "setup.endowment = 100\n";

int thrown_line(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ConfigError& err) {
        return err.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
    const Scenario scenario = parse_scenario(kMinimal);
    CHECK(scenario.market.fee == 0.1);
    CHECK(scenario.market.adverse_selection == 0.05);
    CHECK(scenario.market.adverse_selection_fee_sensitivity == 0.0);
    CHECK(scenario.curve.is_linear());
    CHECK(scenario.setup.epsilon == 1e-6);
    CHECK(scenario.solver.tolerance == 1e-10);
    CHECK(scenario.solver.max_iterations == 10000);
    CHECK(scenario.solver.damping == 0.5);
    CHECK(scenario.solver.grid_points == 1024);
    CHECK_FALSE(scenario.solver.gradient_descent);
    CHECK_FALSE(scenario.sweep.has_value());
    CHECK_FALSE(scenario.mitigation_fraction.has_value());
    CHECK(scenario.chart_y_column == "poa");
}

TEST_CASE("comments, spacing and blank lines are tolerated") {
    const Scenario scenario = parse_scenario(
        "# a comment\n"
        "\n"
        "  market.fee =   0.2   # trailing comment\n"
        "market.adverse_selection=0.01\n"
        "curve.kind= logarithmic\n"
        "curve.base_demand =10\n"
        "curve.gamma=1\n"
        "setup.n_investors = 3\n"
        "setup.endowment = 5\n");
    CHECK(scenario.market.fee == 0.2);
    CHECK_FALSE(scenario.curve.is_linear());
}

TEST_CASE("basis-point adverse selection") {
    const Scenario scenario = parse_scenario(
        "market.fee = 0.003\n"
        "market.adverse_selection_bp_daily = 3.125\n"
        "market.horizon_days = 1\n"
        "curve.kind = linear\n"
        "curve.base_demand = 1000000\n"
        "curve.gamma = 0.01\n"
        "setup.n_investors = 1000\n"
        "setup.endowment = 1000000\n");
    CHECK(scenario.market.adverse_selection == doctest::Approx(3.125e-4));

    // horizon defaults to one day
    const Scenario no_horizon = parse_scenario(
        "market.fee = 0.003\n"
        "market.adverse_selection_bp_daily = 2\n"
        "curve.kind = linear\n"
        "curve.base_demand = 10\n"
        "curve.gamma = 0\n"
        "setup.n_investors = 2\n"
        "setup.endowment = 1\n");
    CHECK(no_horizon.market.adverse_selection == doctest::Approx(2e-4));
}

TEST_CASE("config errors identify the line and field") {
    // both adverse-selection forms
    CHECK(thrown_line("market.fee = 0.1\n"
                      "market.adverse_selection = 0.05\n"
                      "market.adverse_selection_bp_daily = 3\n") == 3);
    // unknown key
    CHECK(thrown_line(kMinimal + "market.feee = 1\n") == 9);
    // duplicate key
    CHECK(thrown_line("market.fee = 0.1\nmarket.fee = 0.2\n") == 2);
    // malformed number
    CHECK(thrown_line("market.fee = fast\n") == 1);
    // missing '='
    CHECK(thrown_line("market.fee 0.1\n") == 1);
    // non-integer investor count
    CHECK(thrown_line("market.fee = 0.1\nmarket.adverse_selection = 0.05\n"
                      "curve.kind = linear\ncurve.base_demand = 1\ncurve.gamma = 0\n"
                      "setup.n_investors = 2.5\nsetup.endowment = 1\n") == 6);

    CHECK_THROWS_WITH_AS(parse_scenario("market.fee = 0.1\n"),
                         doctest::Contains("adverse_selection"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario(kMinimal + "curve.kind = nonsense\n"),
                         doctest::Contains("duplicate"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_scenario("market.fee = 0.1\nmarket.adverse_selection = 0.05\n"
                       "curve.kind = spline\ncurve.base_demand = 1\ncurve.gamma = 0\n"
                       "setup.n_investors = 2\nsetup.endowment = 1\n"),
        doctest::Contains("spline"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario(kMinimal + "market.horizon_days = 2\n"),
                         doctest::Contains("horizon_days"), ConfigError);
    // invariants surface as config errors with the field name
    CHECK_THROWS_WITH_AS(
        parse_scenario("market.fee = -0.1\nmarket.adverse_selection = 0.05\n"
                       "curve.kind = linear\ncurve.base_demand = 1\ncurve.gamma = 0\n"
                       "setup.n_investors = 2\nsetup.endowment = 1\n"),
        doctest::Contains("fee"), ConfigError);
}

TEST_CASE("sweep block parses and validates") {
    const Scenario scenario = parse_scenario(kMinimal +
                                             "sweep.parameter_name = base_demand\n"
                                             "sweep.start = 0\n"
                                             "sweep.stop = 100\n"
                                             "sweep.steps = 11\n");
    REQUIRE(scenario.sweep.has_value());
    CHECK(scenario.sweep->parameter == SweepParameter::base_demand);
    CHECK(scenario.sweep->spacing == SweepSpacing::linear);
    const std::vector<double> grid = sweep_grid(*scenario.sweep);
    CHECK(grid.size() == 11);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 100.0);
    CHECK(grid[5] == doctest::Approx(50.0));

    CHECK_THROWS_AS(parse_scenario(kMinimal + "sweep.parameter_name = volatility\n"
                                              "sweep.start = 0\nsweep.stop = 1\n"
                                              "sweep.steps = 2\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(kMinimal + "sweep.parameter_name = fee\n"
                                              "sweep.start = 0\nsweep.stop = 1\n"
                                              "sweep.steps = 2\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(kMinimal + "sweep.parameter_name = base_demand\n"
                                              "sweep.start = 5\nsweep.stop = 1\n"
                                              "sweep.steps = 2\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(kMinimal + "sweep.parameter_name = base_demand\n"
                                              "sweep.start = 0\nsweep.stop = 1\n"
                                              "sweep.steps = 1\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(kMinimal + "sweep.parameter_name = base_demand\n"
                                              "sweep.start = 0\nsweep.stop = 1\nsweep.steps = 2\n"
                                              "sweep.spacing = log\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(kMinimal + "sweep.parameter_name = mitigation_fraction\n"
                                              "sweep.start = 0\nsweep.stop = 1\nsweep.steps = 3\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(kMinimal + "sweep.start = 0\n"), ConfigError);
}

TEST_CASE("sweep grids") {
    SweepSpec log_spec{SweepParameter::fee, 1e-4, 1e-2, 3, SweepSpacing::log};
    const std::vector<double> log_grid = sweep_grid(log_spec);
    CHECK(log_grid[0] == 1e-4);
    CHECK(log_grid[1] == doctest::Approx(1e-3));
    CHECK(log_grid[2] == 1e-2);

    SweepSpec investors{SweepParameter::n_investors, 2, 1000, 999, SweepSpacing::linear};
    const std::vector<double> integer_grid = sweep_grid(investors);
    CHECK(integer_grid.size() == 999);
    CHECK(integer_grid.front() == 2.0);
    CHECK(integer_grid[1] == 3.0);
    CHECK(integer_grid.back() == 1000.0);

    SweepSpec dense{SweepParameter::n_investors, 2, 5, 10, SweepSpacing::linear};
    CHECK_THROWS_AS(sweep_grid(dense), std::invalid_argument);  // duplicate integers
}

TEST_CASE("rebate and chart keys") {
    const Scenario scenario =
        parse_scenario(kMinimal + "rebate.mitigation_fraction = 0.5\nchart.y_column = excess_lvr\n");
    CHECK(scenario.mitigation_fraction == 0.5);
    CHECK(scenario.chart_y_column == "excess_lvr");
    CHECK_THROWS_AS(parse_scenario(kMinimal + "rebate.mitigation_fraction = 1.0\n"), ConfigError);
}

TEST_CASE("missing config file") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/path.cfg"), ConfigError);
}
