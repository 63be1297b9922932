#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kschemo/grid.hpp"
#include "kschemo/model.hpp"
#include "kschemo/solver.hpp"

namespace kschemo::harness {

/// Closed vocabulary of initial-data expressions.
///   cosine       base + amp cos(kx x + px) cos(ky y + py)
///   gaussian     base + amp exp(-((x - x0)^2 + (y - y0)^2) / width)
///   noise        base + amp U, U uniform on [-1, 1) from mt19937_64(seed), row-major cell order
///   branch_seed  homogeneous value + s (Q, 1) Phi_mn  (Q on u, 1 on v)
/// The base defaults to the field's homogeneous value.
enum class InitKind { cosine, gaussian, noise, branch_seed };

std::string_view to_string(InitKind kind);

struct FieldInit {
    InitKind kind = InitKind::cosine;
    std::optional<double> base;
    double amp = 0.0;
    double kx = 0.0;
    double ky = 0.0;
    double px = 0.0;
    double py = 0.0;
    double x0 = 0.0;
    double y0 = 0.0;
    double width = 1.0;
    std::uint64_t seed = 0;
    int m = 1;
    int n = 0;
    double s = 0.01;

    friend bool operator==(const FieldInit&, const FieldInit&) = default;
};

struct OutputSpec {
    std::vector<double> times;          // snapshot times; the final state is always written
    bool write_u = true;
    bool write_v = true;
    bool csv = true;
    bool pgm = true;

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunSpec {
    double dt_max = 1e-2;
    double t_max = 200.0;
    double tol_ss = 1e-8;
    std::optional<double> blow_up_cap;  // default 1e6 ubar
    int sample_every = 10;

    friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

/// Everything needed to reproduce one simulation or analysis.
struct ScenarioConfig {
    std::string name = "scenario";
    ModelParams params = ModelParams::unit(0.0);
    Domain domain = Domain::interval(1.0);
    int nx = 128;
    int ny = 1;
    FieldInit init_u;
    FieldInit init_v;
    RunSpec run;
    OutputSpec output;

    Grid grid() const { return Grid(domain, nx, ny); }
    RunControls controls() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses flat `key = value` text with `#` comments. Throws ConfigError
/// (with the offending line) on unknown keys, duplicates, malformed values or
/// missing required keys; parameter invariants are reported the same way.
///
/// Required: model.d1 model.d2 model.chi model.mu model.ubar domain.kind
/// domain.lx (and domain.ly for rectangles). Numbers may be written as
/// `<number>`, `pi` or `<number>*pi`.
ScenarioConfig parse_config(std::string_view text);

/// Inverse of parse_config: emits every field with round-trip precision.
std::string emit_config(const ScenarioConfig& config);

/// Cell-centered initial fields described by the config.
FieldState initial_state(const ScenarioConfig& config);

/// Shortest decimal text that reads back as the same double.
std::string format_double(double value);

}  // namespace kschemo::harness
