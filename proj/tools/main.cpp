#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lpgame/svg.hpp"

namespace {

using namespace lpgame;

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    bool csv = false;
    bool svg = false;
    bool cross_check = false;
};

void add_common(CLI::App* sub, CommonOptions& opts) {
    auto* config = sub->add_option("--config", opts.config_path, "Scenario config file")
                       ->required()
                       ->check(CLI::ExistingFile);
    (void)config;
    auto* out = sub->add_option("--out", opts.out_path,
                                "Output path base; '.csv'/'.svg' are appended");
    sub->add_flag("--csv", opts.csv, "Write <out>.csv")->needs(out);
    sub->add_flag("--svg", opts.svg, "Write <out>.svg")->needs(out);
    sub->add_flag("--cross-check", opts.cross_check,
                  "Run closed-form and numeric paths and report the max discrepancy");
}

void print_kv(const std::string& key, const std::string& value) {
    std::printf("%-26s %s\n", key.c_str(), value.c_str());
}

void print_kv(const std::string& key, double value) { print_kv(key, format_double(value)); }

std::string single_cell(const ResultTable& table, const std::string& column) {
    const int idx = table.column_index(column);
    if (idx < 0 || table.rows.empty()) return "";
    return format_cell(table.rows.front()[static_cast<size_t>(idx)]);
}

void emit_outputs(const RunReport& report, const Scenario& scenario, const CommonOptions& opts) {
    if (opts.csv) {
        const std::string path = opts.out_path + ".csv";
        emit_csv(report.table, path);
        std::printf("wrote %s\n", path.c_str());
    }
    if (opts.svg) {
        const std::string path = opts.out_path + ".svg";
        emit_chart(report.table, report.table.columns.front(), scenario.chart_y_column, path);
        std::printf("wrote %s\n", path.c_str());
    }
}

int finish(const RunReport& report, const Scenario& scenario, const CommonOptions& opts) {
    emit_outputs(report, scenario, opts);
    if (opts.cross_check)
        print_kv("cross_check_discrepancy", report.max_cross_discrepancy);
    if (report.failed_points == static_cast<int>(report.table.rows.size()) &&
        !report.table.rows.empty()) {
        std::fprintf(stderr, "error: all %d points failed; first error: %s\n",
                     report.failed_points, single_cell(report.table, "error").c_str());
        return 2;
    }
    if (report.failed_points > 0)
        std::fprintf(stderr, "warning: %d of %zu points failed (see error column)\n",
                     report.failed_points, report.table.rows.size());
    return 0;
}

int run_equilibrium(const CommonOptions& opts) {
    Scenario scenario = load_scenario(opts.config_path);
    scenario.sweep.reset();
    const RunReport report = run_scenario(scenario, opts.cross_check);
    for (const char* column : {"regime", "equilibrium_weight", "equilibrium_liquidity",
                               "profit", "equilibrium_performance"})
        print_kv(column, single_cell(report.table, column));
    return finish(report, scenario, opts);
}

int run_poa(const CommonOptions& opts) {
    Scenario scenario = load_scenario(opts.config_path);
    scenario.sweep.reset();
    const RunReport report = run_scenario(scenario, opts.cross_check);
    for (const char* column : {"regime", "cooperative_liquidity", "equilibrium_liquidity",
                               "cooperative_performance", "equilibrium_performance", "poa"})
        print_kv(column, single_cell(report.table, column));
    return finish(report, scenario, opts);
}

int run_rebate(const CommonOptions& opts) {
    Scenario scenario = load_scenario(opts.config_path);
    scenario.sweep.reset();
    if (!scenario.mitigation_fraction)
        throw ConfigError("the rebate command requires rebate.mitigation_fraction");
    if (scenario.curve.is_linear()) {
        const RebateReport report = closed_form::rebate_analysis(
            scenario.market, scenario.curve, scenario.setup, *scenario.mitigation_fraction);
        print_kv("mitigation_fraction", report.mitigation_fraction);
        print_kv("regime_before", to_string(report.regime_before));
        print_kv("regime_after", to_string(report.regime_after));
        print_kv("rebate_liquidity", report.rebate_liquidity);
        print_kv("lvr_ratio", report.lvr_ratio);
    } else {
        print_kv("mitigation_fraction", *scenario.mitigation_fraction);
    }
    const RunReport report = run_scenario(scenario, opts.cross_check);
    if (!scenario.curve.is_linear()) print_kv("lvr_ratio", single_cell(report.table, "lvr_ratio"));
    return finish(report, scenario, opts);
}

int run_sweep(const CommonOptions& opts) {
    const Scenario scenario = load_scenario(opts.config_path);
    if (!scenario.sweep)
        throw ConfigError("the sweep command requires a sweep block (sweep.parameter_name, ...)");
    const RunReport report = run_scenario(scenario, opts.cross_check);
    std::printf("%zu sweep points over %s, %d failed\n", report.table.rows.size(),
                to_string(scenario.sweep->parameter).c_str(), report.failed_points);
    return finish(report, scenario, opts);
}

int run_check(const CommonOptions& opts) {
    const Scenario scenario = load_scenario(opts.config_path);
    if (!scenario.curve.is_linear())
        throw ConfigError("the check command requires a linear demand curve "
                          "(closed forms exist only there)");
    const RunReport report = run_scenario(scenario, /*cross_check=*/true);
    print_kv("points", static_cast<double>(report.table.rows.size()));
    print_kv("failed_points", static_cast<double>(report.failed_points));
    print_kv("max_rel_discrepancy", report.max_cross_discrepancy);
    const bool ok = report.failed_points == 0 && report.max_cross_discrepancy <= 1e-6;
    std::printf("cross-validation %s (threshold 1e-06)\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Nash equilibria, cooperative optima and welfare metrics for the N-player "
        "AMM liquidity-provision game"};
    app.require_subcommand(1);

    CommonOptions opts;
    CLI::App* equilibrium = app.add_subcommand("equilibrium", "Solve a single symmetric equilibrium");
    CLI::App* poa = app.add_subcommand("poa", "Price of anarchy at the configured point");
    CLI::App* sweep = app.add_subcommand("sweep", "Evaluate the configured parameter sweep");
    CLI::App* rebate = app.add_subcommand("rebate", "Equilibrium effect of an LVR rebate");
    CLI::App* check = app.add_subcommand("check", "Cross-validate closed-form vs numeric solvers");
    for (CLI::App* sub : {equilibrium, poa, sweep, rebate, check}) add_common(sub, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (equilibrium->parsed()) return run_equilibrium(opts);
        if (poa->parsed()) return run_poa(opts);
        if (sweep->parsed()) return run_sweep(opts);
        if (rebate->parsed()) return run_rebate(opts);
        if (check->parsed()) return run_check(opts);
    } catch (const lpgame::ConfigError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    } catch (const lpgame::IoError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 3;
    } catch (const lpgame::SolverError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
    return 0;
}
