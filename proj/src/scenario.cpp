#include "lpgame/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lpgame {

ConfigError::ConfigError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "config: line " + std::to_string(line) + ": " + message
                                  : "config: " + message),
      line_(line) {}

std::string to_string(SweepParameter parameter) {
    switch (parameter) {
        case SweepParameter::n_investors: return "n_investors";
        case SweepParameter::base_demand: return "base_demand";
        case SweepParameter::fee: return "fee";
        case SweepParameter::adverse_selection: return "adverse_selection";
        case SweepParameter::gamma: return "gamma";
        case SweepParameter::mitigation_fraction: return "mitigation_fraction";
    }
    return "unknown";
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
    if (spec.steps < 2) throw std::invalid_argument("sweep: steps must be >= 2");
    if (!(spec.start < spec.stop)) throw std::invalid_argument("sweep: start must be < stop");
    if (spec.spacing == SweepSpacing::log && !(spec.start > 0.0))
        throw std::invalid_argument("sweep: log spacing requires start > 0");

    std::vector<double> values(static_cast<size_t>(spec.steps));
    for (int i = 0; i < spec.steps; ++i) {
        const double t = static_cast<double>(i) / (spec.steps - 1);
        if (spec.spacing == SweepSpacing::linear) {
            values[static_cast<size_t>(i)] = spec.start + (spec.stop - spec.start) * t;
        } else {
            values[static_cast<size_t>(i)] =
                std::exp(std::log(spec.start) + (std::log(spec.stop) - std::log(spec.start)) * t);
        }
    }
    values.front() = spec.start;
    values.back() = spec.stop;

    if (spec.parameter == SweepParameter::n_investors) {
        for (double& v : values) v = static_cast<double>(std::llround(v));
        for (size_t i = 0; i + 1 < values.size(); ++i) {
            if (!(values[i] < values[i + 1]))
                throw std::invalid_argument(
                    "sweep: n_investors grid must be strictly increasing integers; "
                    "reduce steps");
        }
        if (values.front() < 2.0)
            throw std::invalid_argument("sweep: n_investors grid must start at >= 2");
    }
    return values;
}

namespace {

struct Entry {
    std::string value;
    int line;
    mutable bool used = false;
};

using EntryMap = std::map<std::string, Entry>;

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

EntryMap tokenize(const std::string& text) {
    EntryMap entries;
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line_no);
        if (value.empty()) throw ConfigError("empty value for key '" + key + "'", line_no);
        auto [it, inserted] = entries.emplace(key, Entry{value, line_no});
        if (!inserted)
            throw ConfigError("duplicate key '" + key + "' (first set on line " +
                                  std::to_string(it->second.line) + ")",
                              line_no);
    }
    return entries;
}

const Entry* find(const EntryMap& entries, const std::string& key) {
    const auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
}

double parse_double(const Entry& entry, const std::string& key) {
    const char* begin = entry.value.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(value))
        throw ConfigError("key '" + key + "' expects a finite number, got '" + entry.value + "'",
                          entry.line);
    return value;
}

double require_double(const EntryMap& entries, const std::string& key) {
    const Entry* entry = find(entries, key);
    if (!entry) throw ConfigError("missing required key '" + key + "'");
    return parse_double(*entry, key);
}

std::optional<double> optional_double(const EntryMap& entries, const std::string& key) {
    const Entry* entry = find(entries, key);
    if (!entry) return std::nullopt;
    return parse_double(*entry, key);
}

int parse_int(const Entry& entry, const std::string& key) {
    const double value = parse_double(entry, key);
    const double rounded = std::nearbyint(value);
    if (value != rounded || std::fabs(value) > 2e9)
        throw ConfigError("key '" + key + "' expects an integer, got '" + entry.value + "'",
                          entry.line);
    return static_cast<int>(rounded);
}

bool parse_bool(const Entry& entry, const std::string& key) {
    if (entry.value == "true" || entry.value == "1") return true;
    if (entry.value == "false" || entry.value == "0") return false;
    throw ConfigError("key '" + key + "' expects true/false, got '" + entry.value + "'",
                      entry.line);
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    const EntryMap entries = tokenize(text);

    // --- market ---
    const double fee = require_double(entries, "market.fee");
    const auto direct_a = optional_double(entries, "market.adverse_selection");
    const Entry* bp_entry = find(entries, "market.adverse_selection_bp_daily");
    const auto horizon = optional_double(entries, "market.horizon_days");
    if (direct_a && bp_entry)
        throw ConfigError(
            "market.adverse_selection and market.adverse_selection_bp_daily are mutually "
            "exclusive",
            bp_entry->line);
    if (horizon && !bp_entry)
        throw ConfigError("market.horizon_days requires market.adverse_selection_bp_daily");
    double adverse = 0.0;
    if (direct_a) {
        adverse = *direct_a;
    } else if (bp_entry) {
        adverse = adverse_selection_from_bp(parse_double(*bp_entry, "adverse_selection_bp_daily"),
                                            horizon.value_or(1.0));
    } else {
        throw ConfigError(
            "one of market.adverse_selection or market.adverse_selection_bp_daily is required");
    }
    const double external = optional_double(entries, "market.external_return").value_or(0.0);
    const double sensitivity =
        optional_double(entries, "market.adverse_selection_fee_sensitivity").value_or(0.0);

    // --- curve ---
    const Entry* kind_entry = find(entries, "curve.kind");
    if (!kind_entry) throw ConfigError("missing required key 'curve.kind'");
    const double base_demand = require_double(entries, "curve.base_demand");
    const double gamma = require_double(entries, "curve.gamma");

    // --- setup ---
    const Entry* n_entry = find(entries, "setup.n_investors");
    if (!n_entry) throw ConfigError("missing required key 'setup.n_investors'");
    const int n_investors = parse_int(*n_entry, "setup.n_investors");
    const double endowment = require_double(entries, "setup.endowment");
    const double epsilon = optional_double(entries, "setup.epsilon").value_or(1e-6);

    // --- solver ---
    SolverConfig solver;
    if (auto v = optional_double(entries, "solver.tolerance")) solver.tolerance = *v;
    if (const Entry* e = find(entries, "solver.max_iterations"))
        solver.max_iterations = parse_int(*e, "solver.max_iterations");
    if (auto v = optional_double(entries, "solver.damping")) solver.damping = *v;
    if (const Entry* e = find(entries, "solver.grid_points"))
        solver.grid_points = parse_int(*e, "solver.grid_points");
    if (const Entry* e = find(entries, "solver.gradient_descent"))
        solver.gradient_descent = parse_bool(*e, "solver.gradient_descent");

    try {
        MarketParams market(fee, adverse, external, sensitivity);
        DemandCurve curve = [&] {
            if (kind_entry->value == "linear") return DemandCurve::linear(base_demand, gamma);
            if (kind_entry->value == "logarithmic")
                return DemandCurve::logarithmic(base_demand, gamma);
            throw ConfigError("curve.kind must be 'linear' or 'logarithmic', got '" +
                                  kind_entry->value + "'",
                              kind_entry->line);
        }();
        GameSetup setup(n_investors, endowment, epsilon);
        solver.validate();
        Scenario scenario(market, curve, setup, solver);

        // --- sweep (optional) ---
        const Entry* param_entry = find(entries, "sweep.parameter_name");
        if (param_entry) {
            SweepSpec spec{};
            const std::string& name = param_entry->value;
            if (name == "n_investors") spec.parameter = SweepParameter::n_investors;
            else if (name == "base_demand") spec.parameter = SweepParameter::base_demand;
            else if (name == "fee") spec.parameter = SweepParameter::fee;
            else if (name == "adverse_selection") spec.parameter = SweepParameter::adverse_selection;
            else if (name == "gamma") spec.parameter = SweepParameter::gamma;
            else if (name == "mitigation_fraction")
                spec.parameter = SweepParameter::mitigation_fraction;
            else
                throw ConfigError("unknown sweep.parameter_name '" + name + "'",
                                  param_entry->line);
            spec.start = require_double(entries, "sweep.start");
            spec.stop = require_double(entries, "sweep.stop");
            const Entry* steps_entry = find(entries, "sweep.steps");
            if (!steps_entry) throw ConfigError("missing required key 'sweep.steps'");
            spec.steps = parse_int(*steps_entry, "sweep.steps");
            if (const Entry* e = find(entries, "sweep.spacing")) {
                if (e->value == "linear") spec.spacing = SweepSpacing::linear;
                else if (e->value == "log") spec.spacing = SweepSpacing::log;
                else
                    throw ConfigError("sweep.spacing must be 'linear' or 'log', got '" +
                                          e->value + "'",
                                      e->line);
            }
            if (spec.parameter == SweepParameter::fee && !(spec.start > 0.0))
                throw ConfigError("sweep over fee requires start > 0", param_entry->line);
            if (spec.parameter == SweepParameter::mitigation_fraction &&
                !(spec.start >= 0.0 && spec.stop < 1.0))
                throw ConfigError("sweep over mitigation_fraction requires [start, stop) in [0,1)",
                                  param_entry->line);
            if ((spec.parameter == SweepParameter::base_demand ||
                 spec.parameter == SweepParameter::gamma ||
                 spec.parameter == SweepParameter::adverse_selection) &&
                !(spec.start >= 0.0))
                throw ConfigError("sweep over " + name + " requires start >= 0",
                                  param_entry->line);
            sweep_grid(spec);  // validates the grid, including integer rounding
            scenario.sweep = spec;
        } else {
            for (const char* key : {"sweep.start", "sweep.stop", "sweep.steps", "sweep.spacing"}) {
                if (entries.count(key))
                    throw ConfigError(std::string("key '") + key +
                                          "' requires sweep.parameter_name",
                                      entries.at(key).line);
            }
        }

        // --- rebate / chart (optional) ---
        if (auto v = optional_double(entries, "rebate.mitigation_fraction")) {
            if (!(*v >= 0.0 && *v < 1.0))
                throw ConfigError("rebate.mitigation_fraction must lie in [0,1)");
            scenario.mitigation_fraction = *v;
        }
        if (const Entry* e = find(entries, "chart.y_column")) scenario.chart_y_column = e->value;

        for (const auto& [key, entry] : entries) {
            if (!entry.used) throw ConfigError("unknown key '" + key + "'", entry.line);
        }
        return scenario;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

}  // namespace lpgame
