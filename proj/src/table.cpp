#include "lpgame/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>

namespace lpgame {

int ResultTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0.0 ? "inf" : "-inf";
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

std::string format_cell(const Cell& cell) {
    if (std::holds_alternative<std::monostate>(cell)) return "";
    if (const double* value = std::get_if<double>(&cell)) return format_double(*value);
    return std::get<std::string>(cell);
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

double rel_diff(double a, double b) {
    if (a == b) return 0.0;
    if (!std::isfinite(a) || !std::isfinite(b)) return std::numeric_limits<double>::infinity();
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale > 0.0 ? std::fabs(a - b) / scale : 0.0;
}

struct PointResult {
    EquilibriumReport equilibrium;
    double cooperative_liquidity = 0.0;
    double cooperative_performance = 0.0;
    double poa = 0.0;
    bool has_excess = false;
    double excess_lvr = 0.0;
    double excess_volume = 0.0;
    double demand_multiplier = 0.0;
    bool has_ratio = false;
    double lvr_ratio = 0.0;
    double cross_discrepancy = 0.0;
};

PointResult evaluate_point(const MarketParams& market, const DemandCurve& curve,
                           const GameSetup& setup, const SolverConfig& solver,
                           const std::optional<double>& mitigation, bool cross_check) {
    PointResult out{};
    if (curve.is_linear()) {
        out.equilibrium = closed_form::equilibrium(market, curve, setup);
        const PoAReport poa = closed_form::price_of_anarchy(market, curve, setup);
        out.cooperative_liquidity = poa.cooperative_liquidity;
        out.cooperative_performance = poa.cooperative_performance;
        out.poa = poa.poa;
        if (out.equilibrium.regime == Regime::interior && !out.equilibrium.clamped) {
            out.has_excess = true;
            out.excess_lvr = closed_form::excess_lvr(market, curve, setup).value;
            out.excess_volume = closed_form::excess_volume(market, curve, setup).value;
            out.demand_multiplier = closed_form::demand_multiplier(market, curve, setup);
        }
        if (mitigation) {
            out.has_ratio = true;
            out.lvr_ratio =
                closed_form::rebate_analysis(market, curve, setup, *mitigation).lvr_ratio;
        }
        if (cross_check) {
            const EquilibriumReport numeric_eq =
                numeric::symmetric_equilibrium(market, curve, setup, solver);
            const CooperativeOptimum numeric_coop =
                numeric::cooperative_optimum(market, curve, setup, solver);
            const double numeric_poa = poa_from_performances(numeric_coop.performance,
                                                             numeric_eq.performance);
            out.cross_discrepancy =
                std::max({rel_diff(out.equilibrium.weight, numeric_eq.weight),
                          rel_diff(out.equilibrium.aggregate_liquidity,
                                   numeric_eq.aggregate_liquidity),
                          rel_diff(out.poa, numeric_poa)});
        }
    } else {
        out.equilibrium = numeric::symmetric_equilibrium(market, curve, setup, solver);
        const CooperativeOptimum coop = numeric::cooperative_optimum(market, curve, setup, solver);
        out.cooperative_liquidity = coop.liquidity;
        out.cooperative_performance = coop.performance;
        out.poa = poa_from_performances(coop.performance, out.equilibrium.performance);
        if (mitigation) {
            const double keep = 1.0 - *mitigation;
            const MarketParams mitigated(market.fee, keep * market.adverse_selection,
                                         market.external_return,
                                         market.adverse_selection_fee_sensitivity);
            const EquilibriumReport rebate_eq =
                numeric::symmetric_equilibrium(mitigated, curve, setup, solver);
            out.has_ratio = true;
            out.lvr_ratio = out.equilibrium.aggregate_liquidity > 0.0
                                ? keep * rebate_eq.aggregate_liquidity /
                                      out.equilibrium.aggregate_liquidity
                                : std::numeric_limits<double>::infinity();
        }
    }
    return out;
}

}  // namespace

RunReport run_scenario(const Scenario& scenario, bool cross_check) {
    const bool sweeping = scenario.sweep.has_value();
    const bool with_ratio =
        scenario.mitigation_fraction.has_value() ||
        (sweeping && scenario.sweep->parameter == SweepParameter::mitigation_fraction);

    RunReport report;
    ResultTable& table = report.table;
    table.columns = {sweeping ? to_string(scenario.sweep->parameter)
                              : std::string("n_investors"),
                     "regime",
                     "equilibrium_weight",
                     "equilibrium_liquidity",
                     "cooperative_liquidity",
                     "profit",
                     "equilibrium_performance",
                     "cooperative_performance",
                     "poa",
                     "excess_lvr",
                     "excess_volume",
                     "demand_multiplier"};
    if (with_ratio) table.columns.push_back("lvr_ratio");
    table.columns.push_back("error");

    const std::vector<double> grid =
        sweeping ? sweep_grid(*scenario.sweep)
                 : std::vector<double>{static_cast<double>(scenario.setup.n_investors)};

    for (double value : grid) {
        std::vector<Cell> row(table.columns.size());
        row[0] = value;
        try {
            MarketParams market = scenario.market;
            DemandCurve curve = scenario.curve;
            GameSetup setup = scenario.setup;
            std::optional<double> mitigation = scenario.mitigation_fraction;
            if (sweeping) {
                switch (scenario.sweep->parameter) {
                    case SweepParameter::n_investors:
                        setup = GameSetup(static_cast<int>(std::llround(value)), setup.endowment,
                                          setup.epsilon);
                        break;
                    case SweepParameter::base_demand:
                        curve = curve.is_linear()
                                    ? DemandCurve::linear(value, curve.gamma)
                                    : DemandCurve::logarithmic(value, curve.gamma);
                        break;
                    case SweepParameter::fee:
                        market = MarketParams(value, market.adverse_selection,
                                              market.external_return,
                                              market.adverse_selection_fee_sensitivity);
                        break;
                    case SweepParameter::adverse_selection:
                        market = MarketParams(market.fee, value, market.external_return,
                                              market.adverse_selection_fee_sensitivity);
                        break;
                    case SweepParameter::gamma:
                        curve = curve.is_linear()
                                    ? DemandCurve::linear(curve.base_demand, value)
                                    : DemandCurve::logarithmic(curve.base_demand, value);
                        break;
                    case SweepParameter::mitigation_fraction: mitigation = value; break;
                }
            }

            const PointResult point =
                evaluate_point(market, curve, setup, scenario.solver, mitigation, cross_check);
            row[1] = to_string(point.equilibrium.regime);
            row[2] = point.equilibrium.weight;
            row[3] = point.equilibrium.aggregate_liquidity;
            row[4] = point.cooperative_liquidity;
            row[5] = point.equilibrium.profit;
            row[6] = point.equilibrium.performance;
            row[7] = point.cooperative_performance;
            row[8] = point.poa;
            if (point.has_excess) {
                row[9] = point.excess_lvr;
                row[10] = point.excess_volume;
                row[11] = point.demand_multiplier;
            }
            if (with_ratio && point.has_ratio) row[12] = point.lvr_ratio;
            report.max_cross_discrepancy =
                std::max(report.max_cross_discrepancy, point.cross_discrepancy);
        } catch (const std::exception& err) {
            row.back() = std::string(err.what());
            ++report.failed_points;
        }
        table.rows.push_back(std::move(row));
    }
    return report;
}

std::string to_csv(const ResultTable& table) {
    std::string out;
    for (size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(table.columns[i]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(format_cell(row[i]));
        }
        out += '\n';
    }
    return out;
}

void emit_csv(const ResultTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << to_csv(table);
    out.flush();
    if (!out) throw IoError("failed writing CSV to '" + path + "'");
}

ResultTable parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    for (size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            record.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(record));
            record.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    if (!field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    if (records.empty()) throw std::invalid_argument("csv: empty input");

    ResultTable table;
    table.columns = records.front();
    for (size_t r = 1; r < records.size(); ++r) {
        std::vector<Cell> row;
        row.reserve(records[r].size());
        for (const std::string& cell : records[r]) {
            if (cell.empty()) {
                row.emplace_back(std::monostate{});
                continue;
            }
            if (cell == "inf") {
                row.emplace_back(std::numeric_limits<double>::infinity());
                continue;
            }
            if (cell == "-inf") {
                row.emplace_back(-std::numeric_limits<double>::infinity());
                continue;
            }
            if (cell == "nan") {
                row.emplace_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            char* end = nullptr;
            const double value = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() + cell.size()) {
                row.emplace_back(value);
            } else {
                row.emplace_back(cell);
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace lpgame
