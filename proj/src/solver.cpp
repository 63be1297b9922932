#include "kschemo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kschemo/bifurcation.hpp"
#include "kschemo/errors.hpp"

namespace kschemo {

FieldState homogeneous_field(const Grid& grid, const ModelParams& p) {
    const HomogeneousState hs = homogeneous_state(p);
    FieldState s;
    s.u.assign(grid.size(), hs.u);
    s.v.assign(grid.size(), hs.v);
    return s;
}

FieldState sample_fields(const Grid& grid, const std::function<double(double, double)>& u,
                         const std::function<double(double, double)>& v) {
    FieldState s;
    s.u.resize(grid.size());
    s.v.resize(grid.size());
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            s.u[grid.index(i, j)] = u(grid.x(i), grid.y(j));
            s.v[grid.index(i, j)] = v(grid.x(i), grid.y(j));
        }
    }
    return s;
}

double transport_bound(double d1, int dims, const TransportLimits& limits) {
    double bound = std::numeric_limits<double>::infinity();
    const double s = limits.max_speed;
    if (s > 0.0) bound = 2.0 * d1 / (dims * s * s);
    if (limits.max_rate > 0.0) bound = std::min(bound, 1.0 / limits.max_rate);
    if (s != s || limits.max_rate != limits.max_rate) return std::numeric_limits<double>::quiet_NaN();
    return bound;
}

Stepper::Stepper(const ModelParams& p, const Grid& grid, const kernels::KernelSet& kernels)
    : params_(p), grid_(grid), kernels_(&kernels) {
    x_coeffs_ = {p.d1(), p.d2(), p.chi(), 1.0 / grid.dx(), p.phi().kind()};
    y_coeffs_ = {p.d1(), p.d2(), p.chi(), 1.0 / grid.dy(), p.phi().kind()};
    cell_coeffs_ = {1.0 / grid.dx(), 1.0 / grid.dy(), p.mu(), p.ubar(), p.alpha(), p.f().beta()};

    const std::size_t nx = static_cast<std::size_t>(grid.nx());
    const std::size_t ny = static_cast<std::size_t>(grid.ny());
    fxu_.assign(ny * (nx + 1), 0.0);
    fxv_.assign(ny * (nx + 1), 0.0);
    if (grid.dims() == 2) {
        fyu_.assign((ny + 1) * nx, 0.0);
        fyv_.assign((ny + 1) * nx, 0.0);
    }
    scratch_.assign(4 * nx, 0.0);
    du_.assign(grid.size(), 0.0);
    dv_.assign(grid.size(), 0.0);
    cprime_.assign(std::max(nx, ny), 0.0);
    inv_denom_.assign(std::max(nx, ny), 0.0);
}

void Stepper::check_shape(const FieldState& state) const {
    if (state.u.size() != grid_.size() || state.v.size() != grid_.size()) {
        throw ShapeError("field state has " + std::to_string(state.u.size()) + "/" +
                         std::to_string(state.v.size()) + " cells, grid has " + std::to_string(grid_.size()));
    }
}

TransportLimits Stepper::compute_fluxes(const FieldState& state) {
    const std::size_t nx = static_cast<std::size_t>(grid_.nx());
    const std::size_t ny = static_cast<std::size_t>(grid_.ny());
    const double* u = state.u.data();
    const double* v = state.v.data();
    double max_speed = 0.0;
    auto track = [&max_speed](double m) { max_speed = m > max_speed || m != m ? m : max_speed; };

    for (std::size_t j = 0; j < ny; ++j) {
        const double* ur = u + j * nx;
        const double* vr = v + j * nx;
        track(kernels_->face_fluxes(ur, ur + 1, vr, vr + 1, fxu_.data() + j * (nx + 1) + 1,
                                    fxv_.data() + j * (nx + 1) + 1, nx - 1, x_coeffs_));
    }
    if (grid_.dims() == 2) {
        track(kernels_->face_fluxes(u, u + nx, v, v + nx, fyu_.data() + nx, fyv_.data() + nx, (ny - 1) * nx,
                                    y_coeffs_));
    }

    // Decay rate of the explicit u-linear terms per cell: chi phi_u lap v
    // where positive (lap v from the v-fluxes fv = d2 grad v), plus the
    // logistic decay mu (2u - ubar). Growth does not limit explicit Euler.
    const bool two_d = grid_.dims() == 2;
    const double inv_dx = 1.0 / grid_.dx();
    const double inv_dy = 1.0 / grid_.dy();
    const double chi_over_d2 = params_.chi() / params_.d2();
    const SensitivityKind phi = params_.phi().kind();
    const double mu = params_.mu();
    const double ubar = params_.ubar();
    double max_rate = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        const double* fx = fxv_.data() + j * (nx + 1);
        const double* fy = two_d ? fyv_.data() + j * nx : nullptr;
        const double* ur = u + j * nx;
        for (std::size_t i = 0; i < nx; ++i) {
            double div = (fx[i + 1] - fx[i]) * inv_dx;
            if (two_d) div += (fy[i + nx] - fy[i]) * inv_dy;
            const double slope = phi == SensitivityKind::linear ? 1.0
                                 : phi == SensitivityKind::volume_filling ? 1.0 - 2.0 * ur[i]
                                                                          : 0.0;
            const double rate = std::max(0.0, chi_over_d2 * slope * div) + mu * std::max(0.0, 2.0 * ur[i] - ubar);
            max_rate = rate > max_rate || rate != rate ? rate : max_rate;
        }
    }
    TransportLimits limits;
    limits.max_speed = max_speed;
    limits.max_rate = max_rate;
    return limits;
}

void Stepper::assemble(const FieldState& state, std::vector<double>& ru, std::vector<double>& rv, double scale) {
    cell_coeffs_.scale = scale;
    const std::size_t nx = static_cast<std::size_t>(grid_.nx());
    const std::size_t ny = static_cast<std::size_t>(grid_.ny());
    const bool two_d = grid_.dims() == 2;
    for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t cell = j * nx;
        const std::size_t xface = j * (nx + 1);
        kernels_->cell_rhs(fxu_.data() + xface, fxv_.data() + xface, two_d ? fyu_.data() + cell : nullptr,
                           two_d ? fyu_.data() + cell + nx : nullptr, two_d ? fyv_.data() + cell : nullptr,
                           two_d ? fyv_.data() + cell + nx : nullptr, state.u.data() + cell, state.v.data() + cell,
                           ru.data() + cell, rv.data() + cell, nx, cell_coeffs_);
    }
}

void Stepper::implicit_diffusion(std::vector<double>& delta, double diffusivity, double dt) {
    const std::size_t nx = static_cast<std::size_t>(grid_.nx());
    const std::size_t ny = static_cast<std::size_t>(grid_.ny());
    const double rx = dt * diffusivity / (grid_.dx() * grid_.dx());
    kernels::factor_neumann_tridiagonal(nx, rx, cprime_.data(), inv_denom_.data());
    kernels_->tridiagonal_rows(delta.data(), nx, ny, cprime_.data(), inv_denom_.data(), rx, scratch_.data());
    if (grid_.dims() == 1) return;

    const double ry = dt * diffusivity / (grid_.dy() * grid_.dy());
    kernels::factor_neumann_tridiagonal(ny, ry, cprime_.data(), inv_denom_.data());
    kernels_->tridiagonal_lines(delta.data(), ny, nx, cprime_.data(), inv_denom_.data(), ry);
}

StepStats Stepper::finish_step(FieldState& state, double dt, const TransportLimits& limits) {
    assemble(state, du_, dv_, dt);
    implicit_diffusion(du_, params_.d1(), dt);
    implicit_diffusion(dv_, params_.d2(), dt);
    const double max_du = kernels_->add_max_abs(state.u.data(), du_.data(), du_.size());
    const double max_dv = kernels_->add_max_abs(state.v.data(), dv_.data(), dv_.size());
    state.t += dt;
    state.step_count += 1;

    StepStats stats;
    stats.dt = dt;
    stats.limits = limits;
    stats.rate = std::max(max_du, max_dv) / dt;
    stats.finite = std::isfinite(max_du) && std::isfinite(max_dv) && std::isfinite(limits.max_speed) &&
                   std::isfinite(limits.max_rate);
    return stats;
}

StepStats Stepper::advance(FieldState& state, double dt) {
    check_shape(state);
    if (!(dt > 0.0)) throw ParameterError("time step must be positive");
    const TransportLimits limits = compute_fluxes(state);
    const double bound = transport_bound(params_.d1(), grid_.dims(), limits);
    if (dt > bound) throw StepSizeError(dt, bound);
    return finish_step(state, dt, limits);
}

StepStats Stepper::advance_adaptive(FieldState& state, double dt_cap) {
    check_shape(state);
    if (!(dt_cap > 0.0)) throw ParameterError("time step must be positive");
    const TransportLimits limits = compute_fluxes(state);
    const double dt = std::min(dt_cap, transport_bound(params_.d1(), grid_.dims(), limits));
    return finish_step(state, dt, limits);
}

TransportLimits Stepper::evaluate_rhs(const FieldState& state, std::vector<double>& ru, std::vector<double>& rv) {
    check_shape(state);
    ru.resize(grid_.size());
    rv.resize(grid_.size());
    const TransportLimits limits = compute_fluxes(state);
    assemble(state, ru, rv, 1.0);
    return limits;
}

double Stepper::steady_residual(const FieldState& state) {
    evaluate_rhs(state, du_, dv_);
    double r = 0.0;
    for (std::size_t k = 0; k < du_.size(); ++k) {
        r = std::max({r, std::abs(du_[k]), std::abs(dv_[k])});
        if (du_[k] != du_[k] || dv_[k] != dv_[k]) return std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

FieldState step(const FieldState& state, const ModelParams& p, const Grid& grid, double dt) {
    Stepper stepper(p, grid);
    FieldState next = state;
    stepper.advance(next, dt);
    return next;
}

double steady_residual(const FieldState& state, const ModelParams& p, const Grid& grid) {
    Stepper stepper(p, grid);
    return stepper.steady_residual(state);
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::converged: return "converged";
        case Outcome::blow_up: return "blow_up";
        case Outcome::max_steps: return "max_steps";
    }
    return "?";
}

double nonzero_mode_energy(const Grid& grid, const std::vector<double>& u) {
    double mean = 0.0;
    for (double x : u) mean += x;
    mean /= static_cast<double>(u.size());
    double e = 0.0;
    for (double x : u) e += (x - mean) * (x - mean);
    return e * grid.cell_volume();
}

namespace {

MonitorSample take_sample(Stepper& stepper, const FieldState& s, const HomogeneousState& hs, double rate,
                          const std::vector<Mode>& modes) {
    const Grid& grid = stepper.grid();
    MonitorSample m;
    m.t = s.t;
    m.step = s.step_count;
    m.rate = rate;
    m.min_u = *std::min_element(s.u.begin(), s.u.end());
    m.max_u = *std::max_element(s.u.begin(), s.u.end());
    double su = 0.0;
    double sv = 0.0;
    for (std::size_t k = 0; k < s.u.size(); ++k) {
        su += s.u[k];
        sv += s.v[k];
    }
    m.mass_u = su * grid.cell_volume();
    m.mass_v = sv * grid.cell_volume();
    m.steady_residual = stepper.steady_residual(s);
    if (!modes.empty()) {
        std::vector<double> du(s.u.size());
        std::vector<double> dv(s.v.size());
        for (std::size_t k = 0; k < s.u.size(); ++k) {
            du[k] = s.u[k] - hs.u;
            dv[k] = s.v[k] - hs.v;
        }
        for (const Mode& mode : modes) {
            m.modal_u.push_back(project(grid, du, mode));
            m.modal_v.push_back(project(grid, dv, mode));
        }
    }
    return m;
}

}  // namespace

RunReport run(FieldState initial, const ModelParams& p, const Grid& grid, const RunControls& controls,
              const std::function<void(const FieldState&)>& on_snapshot, const kernels::KernelSet& kernels) {
    if (!(controls.dt_max > 0.0) || !(controls.t_max > 0.0) || !(controls.tol_ss > 0.0) ||
        controls.sample_every < 1) {
        throw ParameterError("run controls must be positive");
    }
    Stepper stepper(p, grid, kernels);
    const HomogeneousState hs = homogeneous_state(p);
    const double cap = controls.blow_up_cap.value_or(1e6 * p.ubar());
    const double kinetic_dt = 0.1 / (p.mu() * p.ubar() + p.alpha());

    std::vector<double> snapshots = controls.snapshot_times;
    std::sort(snapshots.begin(), snapshots.end());
    std::size_t next_snapshot = 0;
    while (next_snapshot < snapshots.size() && snapshots[next_snapshot] <= initial.t) {
        if (on_snapshot) on_snapshot(initial);
        ++next_snapshot;
    }

    RunReport report;
    report.kernels = kernels.name.data();
    report.modal_modes = controls.modal_modes;
    FieldState& s = report.final_state;
    s = std::move(initial);
    report.outcome = Outcome::max_steps;

    int quiet_samples = 0;
    constexpr double kTimeSlack = 1e-12;
    while (s.t < controls.t_max * (1.0 - kTimeSlack)) {
        double dt_cap = std::min({controls.dt_max, kinetic_dt, controls.t_max - s.t});
        if (next_snapshot < snapshots.size()) dt_cap = std::min(dt_cap, snapshots[next_snapshot] - s.t);
        const StepStats st = stepper.advance_adaptive(s, dt_cap);

        const double max_u = kernels.max_value(s.u.data(), s.u.size());
        if (!st.finite || !std::isfinite(max_u) || max_u > cap) {
            report.outcome = Outcome::blow_up;
            report.samples.push_back(take_sample(stepper, s, hs, st.rate, controls.modal_modes));
            break;
        }
        while (next_snapshot < snapshots.size() && s.t >= snapshots[next_snapshot] * (1.0 - kTimeSlack)) {
            if (on_snapshot) on_snapshot(s);
            ++next_snapshot;
        }
        if (s.step_count % controls.sample_every == 0) {
            report.samples.push_back(take_sample(stepper, s, hs, st.rate, controls.modal_modes));
            quiet_samples = st.rate < controls.tol_ss ? quiet_samples + 1 : 0;
            if (quiet_samples >= 3) {
                report.outcome = Outcome::converged;
                break;
            }
        }
    }
    if (report.outcome == Outcome::max_steps &&
        (report.samples.empty() || report.samples.back().step != s.step_count)) {
        report.samples.push_back(take_sample(stepper, s, hs, 0.0, controls.modal_modes));
    }

    report.time = s.t;
    report.final_residual = stepper.steady_residual(s);
    std::vector<double> du(s.u.size());
    for (std::size_t k = 0; k < s.u.size(); ++k) du[k] = s.u[k] - hs.u;
    for (const Mode& mode : controls.modal_modes) {
        const double c = project(grid, du, mode);
        report.modal_energy.push_back(c * c);
    }
    report.nonzero_mode_energy = nonzero_mode_energy(grid, s.u);
    return report;
}

GrowthFit measure_growth(const ModelParams& base, const Grid& grid, const Mode& mode, double chi, double eps,
                         double window) {
    const ModelParams p = base.with_chi(chi);
    if (!(eps > 0.0) || eps > 1e-3 * p.ubar()) throw ParameterError("growth seed must satisfy 0 < eps <= 1e-3 ubar");
    if (!(window > 0.0)) throw ParameterError("growth window must be positive");

    // Dominant eigenvector of the 2x2 linearization, scaled so the u-part is eps.
    const Linearization lin = linearize(p, mode);
    const double sigma = lin.dominant_rate();
    double eu = 1.0;
    double ev = 0.0;
    if (lin.growth_rates[0].imag() == 0.0) {
        const double a = lin.h[0][1];
        const double b = sigma - lin.h[0][0];
        const double c = sigma - lin.h[1][1];
        const double d = lin.h[1][0];
        if (std::abs(a) + std::abs(b) >= std::abs(c) + std::abs(d)) {
            eu = a;
            ev = b;
        } else {
            eu = c;
            ev = d;
        }
        if (eu == 0.0) {
            // chi = 0 decouples u from v; u then decays on its own diagonal rate.
            eu = 1.0;
            ev = 0.0;
        } else {
            ev /= eu;
            eu = 1.0;
        }
    } else {
        ev = 1.0 / q_ratio(p, mode);
    }
    const HomogeneousState hs = homogeneous_state(p);
    std::vector<double> phi = sample_mode(grid, mode);
    FieldState s = homogeneous_field(grid, p);
    for (std::size_t k = 0; k < phi.size(); ++k) {
        s.u[k] += eps * eu * phi[k];
        s.v[k] += eps * ev * phi[k];
    }

    const double dt = std::min(1e-3 / (1.0 + std::abs(lin.trace)), window / 1000.0);
    const long total_steps = static_cast<long>(std::ceil(window / dt));
    const long every = std::max(1L, total_steps / 200);
    const double amplitude_limit = 1e-2 * p.ubar();
    const double kDecayFloor = std::log(1e6);

    Stepper stepper(p, grid);
    std::vector<double> times;
    std::vector<double> logs;
    std::vector<double> du(s.u.size());
    auto record = [&]() -> bool {
        for (std::size_t k = 0; k < s.u.size(); ++k) du[k] = s.u[k] - hs.u;
        const double coef = project(grid, du, mode);
        if (std::abs(coef) * mode.norm_const >= amplitude_limit || coef == 0.0) return false;
        // Below this the coefficient is dominated by round-off of the base state.
        if (!logs.empty() && std::log(std::abs(coef)) < logs.front() - kDecayFloor) return false;
        times.push_back(s.t);
        logs.push_back(std::log(std::abs(coef)));
        return true;
    };
    record();
    for (long n = 1; n <= total_steps; ++n) {
        stepper.advance(s, dt);
        if (n % every == 0 && !record()) break;
    }
    if (times.size() < 10) {
        throw InsufficientWindowError("growth left the linear regime after " + std::to_string(times.size()) +
                                      " samples");
    }

    const double n = static_cast<double>(times.size());
    double st = 0.0, sl = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        st += times[k];
        sl += logs[k];
    }
    const double mt = st / n;
    const double ml = sl / n;
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        num += (times[k] - mt) * (logs[k] - ml);
        den += (times[k] - mt) * (times[k] - mt);
    }
    GrowthFit fit;
    fit.rate = num / den;
    fit.samples = static_cast<int>(times.size());
    fit.window_used = times.back() - times.front();
    return fit;
}

}  // namespace kschemo
