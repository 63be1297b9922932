#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kschemo/errors.hpp"
#include "kschemo/harness/catalog.hpp"
#include "kschemo/harness/commands.hpp"
#include "kschemo/harness/config.hpp"

namespace {

namespace fs = std::filesystem;
using namespace kschemo;
using namespace kschemo::harness;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str());
    } catch (const ConfigError& e) {
        throw ConfigError(0, path + ": " + e.what());
    }
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw ConfigError(0, "bad sweep value '" + item + "'");
        values.push_back(v);
    }
    return values;
}

int cmd_analyze(const std::string& config_path, std::optional<double> lambda_max, const std::string& csv_path) {
    const AnalyticsReport report = analyze(load_config(config_path), lambda_max);
    print_analytics_table(std::cout, report);
    if (csv_path == "-") {
        write_analytics_csv(std::cout, report);
    } else if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw Error("cannot write " + csv_path);
        write_analytics_csv(out, report);
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    const ScenarioConfig config = load_config(config_path);
    const SimulationResult result = simulate(config, out_dir);
    print_run_summary(std::cout, config, result.report);
    std::cout << "wrote " << result.files.size() << " files to " << out_dir << '\n';
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& axis_name, const std::string& values_text,
              const std::string& out_dir, unsigned threads) {
    const ScenarioConfig base = load_config(config_path);
    const SweepAxis axis = parse_sweep_axis(axis_name);
    const std::vector<double> values = parse_values(values_text);
    for (double v : values) apply_axis(base, axis, v);
    const std::vector<SweepRow> rows = sweep(base, axis, values, threads);
    fs::create_directories(out_dir);
    const fs::path path = fs::path(out_dir) / (base.name + "_sweep_" + std::string(to_string(axis)) + ".csv");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_sweep_csv(out, rows);
    write_sweep_csv(std::cout, rows);
    return 0;
}

int cmd_catalog_list() {
    for (const ScenarioConfig& c : scenario_catalog()) {
        std::cout << c.name << '\n';
    }
    return 0;
}

int cmd_catalog_emit(const std::string& name) {
    std::cout << emit_config(find_scenario(name));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Keller-Segel chemotaxis bifurcation analysis and simulation"};
    app.require_subcommand(1);

    std::string config_path, out_dir, axis, values, csv_path, name;
    std::optional<double> lambda_max;
    unsigned threads = 0;

    auto* analyze_cmd = app.add_subcommand("analyze", "bifurcation ladder of a scenario");
    analyze_cmd->add_option("--config", config_path, "scenario config file")->required();
    analyze_cmd->add_option("--lambda-max", lambda_max, "largest eigenvalue to list");
    analyze_cmd->add_option("--csv", csv_path, "also write the table as CSV ('-' for stdout)");

    auto* simulate_cmd = app.add_subcommand("simulate", "integrate a scenario and write fields");
    simulate_cmd->add_option("--config", config_path, "scenario config file")->required();
    simulate_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "run a scenario over values of one parameter");
    sweep_cmd->add_option("--config", config_path, "base scenario config file")->required();
    sweep_cmd->add_option("--axis", axis, "chi, d2, d1, mu or L")->required();
    sweep_cmd->add_option("--values", values, "comma separated values")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory")->required();
    sweep_cmd->add_option("--threads", threads, "worker threads (0: hardware concurrency)");

    auto* catalog_cmd = app.add_subcommand("catalog", "built-in figure scenarios");
    catalog_cmd->require_subcommand(1);
    auto* list_cmd = catalog_cmd->add_subcommand("list", "print scenario names");
    auto* emit_cmd = catalog_cmd->add_subcommand("emit", "print a scenario as a config file");
    emit_cmd->add_option("name", name, "scenario name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(config_path, lambda_max, csv_path);
        if (*simulate_cmd) return cmd_simulate(config_path, out_dir);
        if (*sweep_cmd) return cmd_sweep(config_path, axis, values, out_dir, threads);
        if (*list_cmd) return cmd_catalog_list();
        if (*emit_cmd) return cmd_catalog_emit(name);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}
