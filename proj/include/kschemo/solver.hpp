#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "kschemo/eigenbasis.hpp"
#include "kschemo/grid.hpp"
#include "kschemo/kernels/kernels.hpp"
#include "kschemo/model.hpp"

namespace kschemo {

/// Cell values of density u and concentration v, laid out like Grid::index.
struct FieldState {
    std::vector<double> u;
    std::vector<double> v;
    double t = 0.0;
    long step_count = 0;
};

FieldState homogeneous_field(const Grid& grid, const ModelParams& p);

/// Samples u(x, y) and v(x, y) at cell centers.
FieldState sample_fields(const Grid& grid, const std::function<double(double, double)>& u,
                         const std::function<double(double, double)>& v);

/// Quantities of the explicit chemotactic transport that limit the step size.
struct TransportLimits {
    double max_speed = 0.0;  // max over faces of |chi phi_u grad v|
    double max_rate = 0.0;   // max over cells of the explicit decay rate (see transport_bound)
};

struct StepStats {
    double dt = 0.0;
    TransportLimits limits;
    double rate = 0.0;  // max(|du|, |dv|) / dt over cells
    bool finite = true;
};

/// Largest admissible step for the explicit terms,
///   min(2 d1 / (dims s^2), 1 / kappa),
/// with s = max_speed and kappa = max_rate. The first is the von Neumann limit
/// 2 d1 / |velocity|^2 of explicit central transport against implicit
/// diffusion (each velocity component bounded by s). The second keeps
/// explicit Euler positivity for the decaying part of the u-linear terms,
/// max(0, chi phi_u lap v) + mu max(0, 2u - ubar), per cell.
double transport_bound(double d1, int dims, const TransportLimits& limits);

/// First-order IMEX stepper on a cell-centered grid with zero-flux walls.
///
/// Transport (diffusive and chemotactic fluxes in conservative face form) and
/// kinetics are evaluated explicitly into r = F(u, v); the increment then
/// solves (I - dt D Lx)(I - dt D Ly) delta = dt r with one Neumann
/// tridiagonal sweep per axis. A state with r = 0 is therefore an exact fixed
/// point, and with mu = 0 every sweep preserves the cell sum of u.
///
/// Single-writer: one instance must not be used from two threads at once.
class Stepper {
public:
    Stepper(const ModelParams& p, const Grid& grid,
            const kernels::KernelSet& kernels = kernels::default_kernels());

    /// Advances by exactly dt. Throws StepSizeError if dt exceeds transport_bound.
    StepStats advance(FieldState& state, double dt);

    /// Advances by min(dt_cap, transport_bound).
    StepStats advance_adaptive(FieldState& state, double dt_cap);

    /// Discrete right-hand sides of the stationary problem; returns the
    /// transport limits of the state.
    TransportLimits evaluate_rhs(const FieldState& state, std::vector<double>& ru, std::vector<double>& rv);

    /// Max-norm over cells of both right-hand sides.
    double steady_residual(const FieldState& state);

    const ModelParams& params() const { return params_; }
    const Grid& grid() const { return grid_; }
    const kernels::KernelSet& kernel_set() const { return *kernels_; }

private:
    TransportLimits compute_fluxes(const FieldState& state);
    void assemble(const FieldState& state, std::vector<double>& ru, std::vector<double>& rv, double scale);
    void implicit_diffusion(std::vector<double>& delta, double diffusivity, double dt);
    StepStats finish_step(FieldState& state, double dt, const TransportLimits& limits);
    void check_shape(const FieldState& state) const;

    ModelParams params_;
    Grid grid_;
    const kernels::KernelSet* kernels_;
    kernels::FaceCoeffs x_coeffs_;
    kernels::FaceCoeffs y_coeffs_;
    kernels::CellCoeffs cell_coeffs_;

    std::vector<double> fxu_, fxv_;  // ny rows of nx + 1 x-face fluxes
    std::vector<double> fyu_, fyv_;  // ny + 1 rows of nx y-face fluxes (2D only)
    std::vector<double> du_, dv_;
    std::vector<double> scratch_;
    std::vector<double> cprime_, inv_denom_;
};

/// One IMEX step of size dt (see Stepper).
FieldState step(const FieldState& state, const ModelParams& p, const Grid& grid, double dt);

/// Max-norm of the discrete stationary residuals, using the stepper's operators.
double steady_residual(const FieldState& state, const ModelParams& p, const Grid& grid);

enum class Outcome { converged, blow_up, max_steps };
std::string_view to_string(Outcome outcome);

struct RunControls {
    double dt_max = 1e-2;
    double t_max = 200.0;
    double tol_ss = 1e-8;
    std::optional<double> blow_up_cap;  // default 1e6 * ubar
    int sample_every = 10;
    std::vector<Mode> modal_modes;      // modes tracked in monitors and final energies
    std::vector<double> snapshot_times; // run lands exactly on each of these
};

struct MonitorSample {
    double t = 0.0;
    long step = 0;
    double min_u = 0.0;
    double max_u = 0.0;
    double mass_u = 0.0;
    double mass_v = 0.0;
    double rate = 0.0;
    double steady_residual = 0.0;
    std::vector<double> modal_u;  // projections of u - ubar on RunControls::modal_modes
    std::vector<double> modal_v;  // projections of v - vbar
};

struct RunReport {
    Outcome outcome = Outcome::max_steps;
    FieldState final_state;
    double time = 0.0;
    double final_residual = 0.0;
    std::vector<MonitorSample> samples;
    std::vector<Mode> modal_modes;
    std::vector<double> modal_energy;    // squared u-projection per tracked mode, final state
    double nonzero_mode_energy = 0.0;    // sum over all nonconstant modes of squared u-projections
    const char* kernels = "";
};

/// Integrates until the rate max|u^{n+1} - u^n| / dt (and the same for v)
/// stays below tol_ss on three consecutive samples, u exceeds the blow-up cap
/// or turns nonfinite, or t reaches t_max. The step size is
/// min(dt_max, transport_bound, 0.1 / (mu ubar + alpha)).
RunReport run(FieldState initial, const ModelParams& p, const Grid& grid, const RunControls& controls,
              const std::function<void(const FieldState&)>& on_snapshot = {},
              const kernels::KernelSet& kernels = kernels::default_kernels());

/// Squared projection of u - mean(u) onto all nonconstant modes (discrete Parseval).
double nonzero_mode_energy(const Grid& grid, const std::vector<double>& u);

struct GrowthFit {
    double rate = 0.0;
    int samples = 0;
    double window_used = 0.0;
};

/// Seeds the homogeneous state with amplitude eps along the dominant
/// eigenvector of the mode's linearization at the given chi and fits the slope
/// of log|projection of u - ubar| over time. Sampling stops at `window`, once
/// the coefficient has decayed by 1e6, or once the sup amplitude reaches
/// 1e-2 ubar; fewer than 10 samples throws InsufficientWindowError.
/// Requires eps <= 1e-3 ubar.
GrowthFit measure_growth(const ModelParams& p, const Grid& grid, const Mode& mode, double chi, double eps,
                         double window);

}  // namespace kschemo
