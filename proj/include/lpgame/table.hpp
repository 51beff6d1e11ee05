#pragma once

#include <string>
#include <variant>
#include <vector>

#include "lpgame/scenario.hpp"

namespace lpgame {

// A table cell is empty, numeric, or text (regime labels, error markers).
using Cell = std::variant<std::monostate, double, std::string>;

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    // Index of a named column, -1 when absent.
    int column_index(const std::string& name) const;
};

struct RunReport {
    ResultTable table;
    int failed_points = 0;
    // Max relative closed-form/numeric discrepancy over weight, liquidity and
    // poa; only populated by cross-check runs on linear scenarios.
    double max_cross_discrepancy = 0.0;
};

// Evaluates the scenario at every sweep point (or once, without a sweep).
// Linear curves take the closed-form path, other curves the numeric path;
// cross_check runs both on linear curves and records the discrepancy.
// A failing point yields a row with its error column set; remaining points
// still run.
RunReport run_scenario(const Scenario& scenario, bool cross_check = false);

// 12-significant-digit formatting shared by the CSV and chart writers;
// infinities render as "inf"/"-inf".
std::string format_double(double value);
std::string format_cell(const Cell& cell);

std::string to_csv(const ResultTable& table);
void emit_csv(const ResultTable& table, const std::string& path);

// Parses a CSV produced by to_csv; numeric-looking cells come back as
// doubles, everything else as text.
ResultTable parse_csv(const std::string& text);

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace lpgame
