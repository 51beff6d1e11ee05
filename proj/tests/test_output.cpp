#include <doctest.h>

#include <cmath>
#include <limits>

#include "lpgame/svg.hpp"
#include "lpgame/table.hpp"

using namespace lpgame;

namespace {

Scenario running_example() {
    Scenario scenario(MarketParams(0.1, 0.05, 0.05), DemandCurve::linear(100, 0),
                      GameSetup(2, 100, 0.0));
    return scenario;
}

double cell_value(const ResultTable& table, size_t row, const std::string& column) {
    const int idx = table.column_index(column);
    REQUIRE(idx >= 0);
    const Cell& cell = table.rows.at(row).at(static_cast<size_t>(idx));
    REQUIRE(std::holds_alternative<double>(cell));
    return std::get<double>(cell);
}

}  // namespace

TEST_CASE("single-point run produces one fully populated row") {
    const RunReport report = run_scenario(running_example());
    const ResultTable& table = report.table;
    REQUIRE(table.rows.size() == 1);
    CHECK(table.columns.front() == "n_investors");
    CHECK(table.columns.back() == "error");
    CHECK(report.failed_points == 0);
    CHECK(cell_value(table, 0, "equilibrium_weight") == doctest::Approx(0.25));
    CHECK(cell_value(table, 0, "equilibrium_liquidity") == doctest::Approx(50.0));
    CHECK(cell_value(table, 0, "profit") == doctest::Approx(7.5));
    CHECK(cell_value(table, 0, "poa") == doctest::Approx(2.0));
    const int regime = table.column_index("regime");
    CHECK(format_cell(table.rows[0][static_cast<size_t>(regime)]) == "interior");
    CHECK(table.column_index("lvr_ratio") == -1);  // no mitigation configured
}

TEST_CASE("sweep rows carry regime-dependent cells") {
    Scenario scenario = running_example();
    scenario.sweep = SweepSpec{SweepParameter::base_demand, 0.0, 100.0, 3, SweepSpacing::linear};
    const RunReport report = run_scenario(scenario);
    const ResultTable& table = report.table;
    REQUIRE(table.rows.size() == 3);
    CHECK(table.columns.front() == "base_demand");
    // B_D = 0 is no_deposit: excess columns stay empty
    const int excess = table.column_index("excess_lvr");
    CHECK(std::holds_alternative<std::monostate>(table.rows[0][static_cast<size_t>(excess)]));
    CHECK(format_cell(table.rows[0][1]) == "no_deposit");
    CHECK(cell_value(table, 0, "poa") == 1.0);
    // interior rows are fully populated
    CHECK(std::holds_alternative<double>(table.rows[2][static_cast<size_t>(excess)]));
    CHECK(report.failed_points == 0);
}

TEST_CASE("failed sweep points mark the error column and do not halt the run") {
    Scenario scenario(MarketParams(0.1, 0.05, 0.05), DemandCurve::linear(100, 0),
                      GameSetup(3, 100, 250.0));
    scenario.sweep = SweepSpec{SweepParameter::n_investors, 2, 4, 3, SweepSpacing::linear};
    const RunReport report = run_scenario(scenario);
    REQUIRE(report.table.rows.size() == 3);
    CHECK(report.failed_points == 1);  // N = 2 makes epsilon >= N*E invalid
    const size_t error_col = report.table.columns.size() - 1;
    CHECK(format_cell(report.table.rows[0][error_col]).find("epsilon") != std::string::npos);
    CHECK(format_cell(report.table.rows[1][error_col]).empty());
    CHECK(cell_value(report.table, 1, "equilibrium_liquidity") > 0.0);
}

TEST_CASE("mitigation sweeps add the lvr_ratio column") {
    Scenario scenario(MarketParams(0.1, 0.1, 0.05), DemandCurve::linear(100, 0.1),
                      GameSetup(2, 10000));
    scenario.sweep =
        SweepSpec{SweepParameter::mitigation_fraction, 0.0, 0.5, 3, SweepSpacing::linear};
    const RunReport report = run_scenario(scenario);
    const int ratio = report.table.column_index("lvr_ratio");
    REQUIRE(ratio >= 0);
    CHECK(cell_value(report.table, 0, "lvr_ratio") == doctest::Approx(1.0));
    CHECK(cell_value(report.table, 2, "lvr_ratio") == doctest::Approx(0.5 * 0.14 / 0.09));
}

TEST_CASE("cross-check agrees on linear scenarios") {
    Scenario scenario = running_example();
    scenario.sweep = SweepSpec{SweepParameter::n_investors, 2, 12, 11, SweepSpacing::linear};
    const RunReport report = run_scenario(scenario, /*cross_check=*/true);
    CHECK(report.failed_points == 0);
    CHECK(report.max_cross_discrepancy <= 1e-6);
}

TEST_CASE("csv formatting") {
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(0.1234567890123456) == "0.123456789012");
    CHECK(format_double(2.0) == "2");
    CHECK(format_cell(Cell{}) == "");

    ResultTable table;
    table.columns = {"a", "b"};
    CHECK(to_csv(table) == "a,b\n");  // header-only for an empty sweep

    table.rows.push_back({Cell{1.5}, Cell{std::numeric_limits<double>::infinity()}});
    table.rows.push_back({Cell{std::string("x,y")}, Cell{}});
    table.rows.push_back({Cell{-2.25e-9}, Cell{std::string("plain")}});
    const std::string csv = to_csv(table);
    CHECK(csv == "a,b\n1.5,inf\n\"x,y\",\n-2.25e-09,plain\n");
    CHECK(csv.substr(csv.find('\n') + 1).find("inf") != std::string::npos);

    // 3 rows -> 4 lines including the header
    int newlines = 0;
    for (char c : csv)
        if (c == '\n') ++newlines;
    CHECK(newlines == 4);
}

TEST_CASE("csv round-trip preserves every emitted digit") {
    Scenario scenario = running_example();
    scenario.sweep = SweepSpec{SweepParameter::base_demand, 1.0, 123.456, 7, SweepSpacing::log};
    const RunReport report = run_scenario(scenario);
    const std::string csv = to_csv(report.table);
    const ResultTable parsed = parse_csv(csv);
    CHECK(parsed.columns == report.table.columns);
    CHECK(to_csv(parsed) == csv);
}

TEST_CASE("run_scenario output is deterministic") {
    Scenario scenario = running_example();
    scenario.sweep = SweepSpec{SweepParameter::n_investors, 2, 20, 19, SweepSpacing::linear};
    const RunReport first = run_scenario(scenario);
    const RunReport second = run_scenario(scenario);
    CHECK(to_csv(first.table) == to_csv(second.table));
    CHECK(render_chart(first.table, "n_investors", "poa") ==
          render_chart(second.table, "n_investors", "poa"));
}

TEST_CASE("chart rendering") {
    ResultTable table;
    table.columns = {"x", "y"};
    table.rows.push_back({Cell{0.0}, Cell{1.0}});
    table.rows.push_back({Cell{1.0}, Cell{3.0}});
    const std::string svg = render_chart(table, "x", "y");
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") == 0);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find(">x</text>") != std::string::npos);
    CHECK(svg.find(">y</text>") != std::string::npos);
    CHECK(svg.rfind("</svg>\n") == svg.size() - 7);

    CHECK_THROWS_AS(render_chart(table, "missing", "y"), std::invalid_argument);

    ResultTable bad;
    bad.columns = {"x", "y"};
    bad.rows.push_back({Cell{0.0}, Cell{std::numeric_limits<double>::infinity()}});
    bad.rows.push_back({Cell{1.0}, Cell{std::numeric_limits<double>::infinity()}});
    CHECK_THROWS_AS(render_chart(bad, "x", "y"), std::invalid_argument);
}

TEST_CASE("io errors carry the path") {
    ResultTable table;
    table.columns = {"a"};
    CHECK_THROWS_WITH_AS(emit_csv(table, "/nonexistent-dir/out.csv"),
                         doctest::Contains("/nonexistent-dir/out.csv"), IoError);
    table.rows.push_back({Cell{1.0}});
    table.rows.push_back({Cell{2.0}});
    CHECK_THROWS_AS(emit_chart(table, "a", "a", "/nonexistent-dir/out.svg"), IoError);
}
