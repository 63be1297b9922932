#include "kschemo/harness/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <thread>

#include "kschemo/eigenbasis.hpp"
#include "kschemo/errors.hpp"
#include "kschemo/harness/io.hpp"

namespace kschemo::harness {

AnalyticsReport analyze(const ScenarioConfig& config, std::optional<double> lambda_max) {
    AnalyticsReport r;
    r.name = config.name;
    r.params = config.params;
    r.domain = config.domain;
    try {
        r.threshold = chi_threshold(config.params, config.domain);
    } catch (const DegenerateModelError& e) {
        throw DegenerateModelError(config.name + ": " + e.what());
    }
    r.lambda_max = lambda_max.value_or(r.threshold.lambda_cutoff);
    if (!(r.lambda_max > 0.0)) throw ParameterError("lambda-max must be positive");

    const std::vector<Mode> modes = enumerate_modes(config.domain, r.lambda_max);
    for (const Mode& mode : modes) r.rows.push_back(classify_branch(config.params, r.threshold, mode));
    std::stable_sort(r.rows.begin(), r.rows.end(),
                     [](const BifurcationPoint& a, const BifurcationPoint& b) { return a.chi_bar < b.chi_bar; });

    for (const std::string& v : validate_for_branch_analytics(config.params)) r.warnings.push_back(v);
    for (const auto& [a, b] : chi_collisions(config.params, modes)) {
        r.warnings.push_back("bifurcation values of (" + std::to_string(a.m) + "," + std::to_string(a.n) + ") and (" +
                             std::to_string(b.m) + "," + std::to_string(b.n) +
                             ") coincide: d1 d2 lambda_i lambda_j = alpha mu ubar");
    }
    if (r.threshold.minimizers.size() > 1) {
        r.warnings.push_back("chi0 is attained by " + std::to_string(r.threshold.minimizers.size()) + " modes");
    }
    return r;
}

namespace {

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string mode_label(const Mode& m) { return std::to_string(m.m) + ":" + std::to_string(m.n); }

}  // namespace

void print_analytics_table(std::ostream& out, const AnalyticsReport& r) {
    const ModelParams& p = r.params;
    char line[256];
    out << "scenario " << r.name << ": d1=" << format_double(p.d1()) << " d2=" << format_double(p.d2())
        << " chi=" << format_double(p.chi()) << " mu=" << format_double(p.mu()) << " ubar=" << format_double(p.ubar())
        << " alpha=" << format_double(p.alpha()) << " phi=" << to_string(p.phi().kind())
        << " f=" << to_string(p.f().kind()) << '\n';
    out << "chi0 = " << format_double(r.threshold.chi0) << " at";
    for (const Mode& k : r.threshold.minimizers) out << " (" << k.m << "," << k.n << ")";
    out << "  [lambda* = " << format_double(r.threshold.lambda_star) << ", modes with lambda <= "
        << format_double(r.lambda_max) << "]\n";
    std::snprintf(line, sizeof line, "%4s %4s %12s %12s %10s %-13s %11s %12s %-21s %s\n", "m", "n", "lambda",
                  "chi_bar", "Q", "branch", "chi'", "chi''", "stability", "note");
    out << line;
    for (const BifurcationPoint& bp : r.rows) {
        char cdd[32] = "";
        if (bp.chi_double_prime) std::snprintf(cdd, sizeof cdd, "%12.5g", *bp.chi_double_prime);
        std::string note = bp.is_minimizer ? "k0" : "";
        if (bp.degenerate_warning) note += note.empty() ? "multiplicity " : " multiplicity ";
        if (bp.degenerate_warning) note += std::to_string(bp.mode.multiplicity);
        std::snprintf(line, sizeof line, "%4d %4d %12.6g %12.6g %10.5g %-13s %11.3g %12s %-21s %s\n", bp.mode.m,
                      bp.mode.n, bp.mode.lambda, bp.chi_bar, bp.q, std::string(to_string(bp.branch_type)).c_str(),
                      bp.chi_prime, cdd, std::string(to_string(bp.predicted_stability)).c_str(), note.c_str());
        out << line;
    }
    for (const std::string& w : r.warnings) out << "warning: " << w << '\n';
}

void write_analytics_csv(std::ostream& out, const AnalyticsReport& r) {
    out << "m,n,lambda,chi_bar,Q,branch_type,chi_prime,chi_double_prime,stability,minimizer,multiplicity\n";
    for (const BifurcationPoint& bp : r.rows) {
        out << bp.mode.m << ',' << bp.mode.n << ',' << format_double(bp.mode.lambda) << ','
            << format_double(bp.chi_bar) << ',' << format_double(bp.q) << ',' << to_string(bp.branch_type) << ','
            << format_double(bp.chi_prime) << ',' << optional_text(bp.chi_double_prime) << ','
            << to_string(bp.predicted_stability) << ',' << (bp.is_minimizer ? "true" : "false") << ','
            << bp.mode.multiplicity << '\n';
    }
}

double diagnostic_lambda_max(const ModelParams& p, const Domain& domain) {
    const double longest = domain.kind == DomainKind::interval ? domain.lx : std::max(domain.lx, domain.ly);
    const double lambda_first = std::numbers::pi * std::numbers::pi / (longest * longest);
    return std::max(4.0 * critical_wavenumber_squared(p) + lambda_first, 16.0 * lambda_first);
}

std::optional<Mode> dominant_mode(const Grid& grid, const std::vector<double>& u, double lambda_max) {
    double mean = 0.0;
    double scale = 0.0;
    for (double x : u) {
        mean += x;
        scale = std::max(scale, std::abs(x));
    }
    mean /= static_cast<double>(u.size());
    std::vector<double> dev(u.size());
    double sup = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        dev[k] = u[k] - mean;
        sup = std::max(sup, std::abs(dev[k]));
    }
    if (!(sup > 1e-12 * scale)) return std::nullopt;
    std::optional<Mode> best;
    double best_coef = -1.0;
    for (const Mode& mode : enumerate_modes(grid.domain(), lambda_max)) {
        if (mode.m >= grid.nx() || mode.n >= grid.ny()) continue;
        const double c = std::abs(project(grid, dev, mode));
        if (c > best_coef) {
            best_coef = c;
            best = mode;
        }
    }
    return best;
}

void print_run_summary(std::ostream& out, const ScenarioConfig& config, const RunReport& report) {
    const FieldState& s = report.final_state;
    const auto [lo, hi] = std::minmax_element(s.u.begin(), s.u.end());
    out << "scenario " << config.name << ": " << to_string(report.outcome) << " at t=" << format_double(report.time)
        << " after " << s.step_count << " steps (kernels " << report.kernels << ")\n"
        << "  u range [" << format_double(*lo) << ", " << format_double(*hi) << "], steady residual "
        << format_double(report.final_residual) << ", nonconstant energy "
        << format_double(report.nonzero_mode_energy) << '\n';
}

SimulationResult simulate(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const Grid grid = config.grid();
    SimulationResult result;

    auto emit = [&](const FieldState& s) {
        const std::string t = "t" + time_label(s.t);
        if (config.output.csv) {
            const std::filesystem::path path = out_dir / (config.name + "_" + t + ".csv");
            std::ofstream out(path);
            if (!out) throw Error("cannot open " + path.string());
            write_field_csv(out, grid, s);
            result.files.push_back(path);
        }
        if (config.output.pgm) {
            if (config.output.write_u) {
                result.files.push_back(write_heatmap(out_dir, config.name + "_u_" + t, grid, s.u));
            }
            if (config.output.write_v) {
                result.files.push_back(write_heatmap(out_dir, config.name + "_v_" + t, grid, s.v));
            }
        }
    };

    RunControls controls = config.controls();
    try {
        controls.modal_modes = enumerate_modes(config.domain, diagnostic_lambda_max(config.params, config.domain));
    } catch (const Error&) {
        controls.modal_modes.clear();
    }
    if (controls.modal_modes.size() > 64) controls.modal_modes.resize(64);

    try {
        result.report = run(initial_state(config), config.params, grid, controls, emit);
    } catch (const Error& e) {
        throw Error(config.name + ": " + e.what());
    }
    const bool final_written = !config.output.times.empty() &&
                               std::abs(config.output.times.back() - result.report.time) <= 1e-12 * config.run.t_max;
    if (!final_written) emit(result.report.final_state);

    const std::filesystem::path monitor = out_dir / (config.name + "_monitor.csv");
    std::ofstream mon(monitor);
    write_monitor_csv(mon, result.report);
    result.files.push_back(monitor);

    const std::filesystem::path summary = out_dir / (config.name + "_summary.txt");
    std::ofstream sum(summary);
    print_run_summary(sum, config, result.report);
    result.files.push_back(summary);
    return result;
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::chi: return "chi";
        case SweepAxis::d2: return "d2";
        case SweepAxis::d1: return "d1";
        case SweepAxis::mu: return "mu";
        case SweepAxis::L: return "L";
    }
    return "?";
}

SweepAxis parse_sweep_axis(std::string_view text) {
    for (SweepAxis a : {SweepAxis::chi, SweepAxis::d2, SweepAxis::d1, SweepAxis::mu, SweepAxis::L}) {
        if (text == to_string(a)) return a;
    }
    throw ConfigError(0, "unknown sweep axis '" + std::string(text) + "' (expected chi, d2, d1, mu or L)");
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value) {
    if (!std::isfinite(value)) throw ParameterError("sweep values must be finite");
    ScenarioConfig c = base;
    switch (axis) {
        case SweepAxis::chi: c.params = base.params.with_chi(value); break;
        case SweepAxis::d2: c.params = base.params.with_d2(value); break;
        case SweepAxis::d1: c.params = base.params.with_d1(value); break;
        case SweepAxis::mu: c.params = base.params.with_mu(value); break;
        case SweepAxis::L:
            c.domain = base.domain.kind == DomainKind::interval
                           ? Domain::interval(value)
                           : Domain::rectangle(value, value * base.domain.ly / base.domain.lx);
            break;
    }
    return c;
}

std::vector<SweepRow> sweep(const ScenarioConfig& base, SweepAxis axis, const std::vector<double>& values,
                            unsigned threads) {
    std::vector<SweepRow> rows(values.size());
    if (values.empty()) return rows;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(values.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            SweepRow& row = rows[i];
            row.value = values[i];
            try {
                const ScenarioConfig c = apply_axis(base, axis, values[i]);
                const Grid grid = c.grid();
                const RunReport rep = run(initial_state(c), c.params, grid, c.controls());
                const FieldState& s = rep.final_state;
                row.outcome = std::string(to_string(rep.outcome));
                row.max_u = *std::max_element(s.u.begin(), s.u.end());
                row.steady_residual = rep.final_residual;
                const auto dom = dominant_mode(grid, s.u, diagnostic_lambda_max(c.params, c.domain));
                row.dominant_mode = dom ? mode_label(*dom) : "none";
            } catch (const std::exception& e) {
                row.outcome = "error";
                row.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "value,outcome,max_u,dominant_mode,steady_residual,error\n";
    for (const SweepRow& r : rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out << format_double(r.value) << ',' << r.outcome << ',' << format_double(r.max_u) << ','
            << r.dominant_mode << ',' << format_double(r.steady_residual) << ',' << err << '\n';
    }
}

}  // namespace kschemo::harness
