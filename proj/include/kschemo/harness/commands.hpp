#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kschemo/bifurcation.hpp"
#include "kschemo/harness/config.hpp"
#include "kschemo/solver.hpp"

namespace kschemo::harness {

/// Per-mode bifurcation ladder, rows sorted by chi_bar ascending.
struct AnalyticsReport {
    std::string name;
    ModelParams params = ModelParams::unit(0.0);
    Domain domain;
    Threshold threshold;
    double lambda_max = 0.0;
    std::vector<BifurcationPoint> rows;
    std::vector<std::string> warnings;  // collisions and model-level caveats
};

/// Throws DegenerateModelError (with the scenario name) when f'(ubar) phi <= 0.
/// lambda_max defaults to the threshold search cutoff.
AnalyticsReport analyze(const ScenarioConfig& config, std::optional<double> lambda_max = {});

void print_analytics_table(std::ostream& out, const AnalyticsReport& report);

/// Header m,n,lambda,chi_bar,Q,branch_type,chi_prime,chi_double_prime,stability,minimizer,multiplicity.
void write_analytics_csv(std::ostream& out, const AnalyticsReport& report);

/// Mode with the largest |projection| of u - mean(u) among modes with
/// lambda <= lambda_max; empty when the field is flat to 1e-12 relative.
std::optional<Mode> dominant_mode(const Grid& grid, const std::vector<double>& u, double lambda_max);

/// Default mode search bound for diagnostics: max(4 lambda* + lambda_1, 16 lambda_1).
double diagnostic_lambda_max(const ModelParams& p, const Domain& domain);

struct SimulationResult {
    RunReport report;
    std::vector<std::filesystem::path> files;
};

/// Runs the scenario, writing field CSVs and heatmaps at every output time and
/// for the final state, plus `<name>_monitor.csv` and `<name>_summary.txt`.
SimulationResult simulate(const ScenarioConfig& config, const std::filesystem::path& out_dir);

void print_run_summary(std::ostream& out, const ScenarioConfig& config, const RunReport& report);

enum class SweepAxis { chi, d2, d1, mu, L };
std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);  // throws ConfigError

/// Copy of `base` with one parameter replaced; L rescales the domain (both
/// sides proportionally) and keeps the cell counts.
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value);

struct SweepRow {
    double value = 0.0;
    std::string outcome;        // converged | blow_up | max_steps | error
    double max_u = 0.0;
    std::string dominant_mode;  // "m:n", or "none" for a flat final state
    double steady_residual = 0.0;
    std::string error;
};

/// One independent run per value on up to `threads` workers; rows come back
/// in input order and a failing run is recorded in its row.
std::vector<SweepRow> sweep(const ScenarioConfig& base, SweepAxis axis, const std::vector<double>& values,
                            unsigned threads = 0);

/// Header value,outcome,max_u,dominant_mode,steady_residual,error.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace kschemo::harness
