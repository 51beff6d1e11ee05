#pragma once

#include <string>

#include "lpgame/table.hpp"

namespace lpgame {

// Standalone SVG line chart of y_column against x_column. Non-finite and
// empty cells are skipped; at least two finite points are required. Output
// is a pure function of the table and dimensions, so identical inputs give
// byte-identical files.
std::string render_chart(const ResultTable& table, const std::string& x_column,
                         const std::string& y_column, int width = 800, int height = 520);

void emit_chart(const ResultTable& table, const std::string& x_column,
                const std::string& y_column, const std::string& path);

}  // namespace lpgame
