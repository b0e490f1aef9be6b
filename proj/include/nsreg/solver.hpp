#ifndef NSREG_SOLVER_HPP
#define NSREG_SOLVER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "criterion_spec.hpp"
#include "field.hpp"
#include "log.hpp"
#include "norms.hpp"
#include "operators.hpp"
#include "time_series.hpp"

namespace nsreg {

struct SolverConfig {
    GridSpec grid;
    double viscosity = 0.1;
    double dt = 1e-3;
    double horizon = 1.0;
    std::optional<SpectralVectorField> forcing{};  ///< static g; empty means zero forcing
    int save_every = 1;
    double cfl_safety = 0.5;

    void validate() const {
        if (!(viscosity > 0.0) || !std::isfinite(viscosity)) throw InvalidConfig("viscosity must be positive");
        if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidConfig("time step must be positive");
        if (!(horizon >= dt) || !std::isfinite(horizon)) throw InvalidConfig("horizon must be finite and >= dt");
        if (save_every < 1) throw InvalidConfig("save_every must be a positive integer");
        if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw InvalidConfig("cfl_safety must lie in (0, 1]");
        if (forcing) {
            require_same_grid(grid, forcing->grid());
            if (!is_mean_free(*forcing)) throw InvalidConfig("forcing must be mean-free");
            if (!all_finite(*forcing)) throw InvalidConfig("forcing must be finite");
        }
    }
};

struct Snapshot {
    double time = 0.0;
    SpectralVectorField field;
};

enum class RunStatus { Completed, Diverged, StepRejected };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "COMPLETED";
        case RunStatus::Diverged: return "DIVERGED";
        case RunStatus::StepRejected: return "STEP_REJECTED";
    }
    return "?";
}

namespace diag {
inline constexpr const char* energy = "energy";              // 1/2 ||u||_2^2
inline constexpr const char* enstrophy = "enstrophy";        // 1/2 ||omega||_2^2
inline constexpr const char* omega_hm1_inf = "omega_hm1_inf";  // ||A^{-1/2} omega||_inf
} // namespace diag

struct Trajectory {
    SolverConfig config;
    std::vector<CriterionSpec> monitors;
    std::vector<Snapshot> snapshots;
    /// Named diagnostic series in insertion order: energy, enstrophy, omega_hm1_inf, then one per monitor.
    std::vector<std::pair<std::string, TimeSeries>> diagnostics;
    RunStatus status = RunStatus::Completed;
    std::optional<double> diverged_at;
    std::string message;

    bool diverged() const noexcept { return status == RunStatus::Diverged; }

    const TimeSeries* diagnostic(const std::string& name) const {
        for (const auto& [key, series] : diagnostics)
            if (key == name) return &series;
        return nullptr;
    }
};

namespace detail {

// N(u) together with max_x |u(x)|. Two real fields share each complex transform: u_c rides
// in the real part and omega_c in the imaginary part on the way to physical space, and two
// cross-product components share one forward transform on the way back.
inline SpectralVectorField rotational_term(const SpectralVectorField& u, double* u_sup = nullptr) {
    const auto& g = u.grid();
    const double defect = conjugate_symmetry_defect(u);
    if (defect > symmetry_tolerance)
        throw MalformedField("field is not conjugate-symmetric (relative defect " + std::to_string(defect) + ")");
    const auto omega = curl(u);
    const std::size_t size = g.size();

    std::array<std::vector<Complex>, 3> z;
    for (int c = 0; c < 3; ++c) {
        auto& zc = z[static_cast<std::size_t>(c)];
        zc.resize(size);
        for (std::size_t i = 0; i < size; ++i) zc[i] = u(c, i) + Complex(-omega(c, i).imag(), omega(c, i).real());
        fft::transform(g.n(), zc, fft::Direction::Backward);
    }

    std::vector<Complex> xy(size), zz(size);
    double sup2 = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        const double u0 = z[0][i].real(), u1 = z[1][i].real(), u2 = z[2][i].real();
        const double w0 = z[0][i].imag(), w1 = z[1][i].imag(), w2 = z[2][i].imag();
        xy[i] = Complex(u1 * w2 - u2 * w1, u2 * w0 - u0 * w2);
        zz[i] = Complex(u0 * w1 - u1 * w0, 0.0);
        sup2 = std::max(sup2, u0 * u0 + u1 * u1 + u2 * u2);
    }
    if (u_sup) *u_sup = std::sqrt(sup2);
    fft::transform(g.n(), xy, fft::Direction::Forward);
    fft::transform(g.n(), zz, fft::Direction::Forward);

    SpectralVectorField cross(g);
    const double norm = 1.0 / static_cast<double>(size);
    for (std::size_t i = 0; i < size; ++i) {
        const std::size_t j = g.conjugate_index(i);
        const Complex a = xy[i], b = std::conj(xy[j]);
        cross(0, i) = 0.5 * norm * (a + b);
        cross(1, i) = Complex(0.0, -0.5 * norm) * (a - b);
        cross(2, i) = 0.5 * norm * (zz[i] + std::conj(zz[j]));
    }
    return leray_project(dealias(cross));
}

} // namespace detail

/// P dealias(u x omega), evaluated pseudo-spectrally. The gradient part of (u . grad) u is
/// absorbed by the projection together with the pressure, so this is the right-hand side
/// nonlinearity of du/dt = -nu A u + N(u) + g.
inline SpectralVectorField nonlinear_term(const SpectralVectorField& u) { return detail::rotational_term(u); }

/// max_x |u(x)| on the lattice.
inline double velocity_sup(const SpectralVectorField& u) { return lp_norm(to_physical(u), infinity); }

inline double admissible_dt(const SolverConfig& config, double u_sup) {
    constexpr double floor_speed = 1e-12;
    return config.cfl_safety * config.grid.spacing() / std::max(u_sup, floor_speed);
}

struct StepResult {
    SpectralVectorField u;
    double t = 0.0;
    bool blew_up = false;
};

namespace detail {

inline SpectralVectorField rhs(const SpectralVectorField& u, const SolverConfig& config, double* u_sup = nullptr) {
    auto n = rotational_term(u, u_sup);
    if (config.forcing) n += *config.forcing;
    return n;
}

// Multiply every mode by exp(-nu |k|^2 (2 pi / L)^2 h).
inline SpectralVectorField viscous_factor(const SpectralVectorField& f, double nu, double h) {
    SpectralVectorField out = f;
    const auto& g = f.grid();
    const double rate = nu * g.lambda1();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double e = std::exp(-rate * norm_squared(g.wavevector(i)) * h);
        for (int c = 0; c < 3; ++c) out(c, i) *= e;
    }
    return out;
}

inline StepResult advance(const SpectralVectorField& u, double t, double h, const SolverConfig& config) {
    if (!all_finite(u)) return {u, t, true};
    double sup = 0.0;
    const auto a = rhs(u, config, &sup);
    if (!std::isfinite(sup)) return {u, t, true};
    const double limit = admissible_dt(config, sup);
    if (h > limit)
        throw StepRejected("time step " + std::to_string(h) + " violates the CFL guard; admissible dt <= " +
                               std::to_string(limit),
                           limit);

    const double nu = config.viscosity;
    const auto half = [&](const SpectralVectorField& f) { return viscous_factor(f, nu, 0.5 * h); };
    const auto full = [&](const SpectralVectorField& f) { return viscous_factor(f, nu, h); };

    // Integrating-factor RK4 on v = e^{nu A t} u; the viscous term is integrated exactly.
    auto stage = u;
    stage.axpy(0.5 * h, a);
    const auto u1 = half(stage);
    const auto b = rhs(u1, config);

    const auto eu_half = half(u);
    auto u2 = eu_half;
    u2.axpy(0.5 * h, b);
    const auto c = rhs(u2, config);

    auto u3 = full(u);
    u3.axpy(h, half(c));
    const auto d = rhs(u3, config);

    auto bc = b;
    bc += c;
    auto next = full(u);
    next.axpy(h / 6.0, full(a));
    next.axpy(h / 3.0, half(bc));
    next.axpy(h / 6.0, d);
    next.meta().time = t + h;

    const bool finite = all_finite(next);
    return {std::move(next), t + h, !finite};
}

} // namespace detail

/// One integrating-factor RK4 step of size config.dt.
///
/// Throws StepRejected when dt exceeds cfl_safety * (L / n) / max|u|. A non-finite input or
/// output coefficient is reported through blew_up instead of an exception.
inline StepResult step(const SpectralVectorField& u, double t, const SolverConfig& config) {
    return detail::advance(u, t, config.dt, config);
}

/// Hooks into the time loop. before_step may modify the state (used to inject faults).
struct RunHooks {
    std::function<void(long step, double t, SpectralVectorField& u)> before_step;
};

namespace detail {

inline SpectralVectorField admissible_state(const SpectralVectorField& f, const char* what) {
    auto out = dealias(leray_project(make_mean_free(f)));
    if (!(out == f)) notice(std::string(what) + " was projected, mean-freed and dealiased before the run");
    out.meta() = f.meta();
    return out;
}

inline void record(Trajectory& traj, double t, const SpectralVectorField& u) {
    const auto omega = curl(u);
    const auto value = [&](auto&& fn) {
        try {
            return fn();
        } catch (const MalformedField&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    std::vector<double> row;
    row.push_back(value([&] { return 0.5 * std::pow(l2_norm(u), 2); }));
    row.push_back(value([&] { return 0.5 * std::pow(l2_norm(omega), 2); }));
    row.push_back(value([&] { return lp_norm(to_physical(a_power(-0.5, omega)), infinity); }));
    for (const auto& m : traj.monitors) row.push_back(value([&] { return instantaneous_norm(m, u); }));
    for (std::size_t i = 0; i < row.size(); ++i) traj.diagnostics[i].second.push(t, row[i]);
    auto snap = u;
    snap.meta().time = t;
    traj.snapshots.push_back({t, std::move(snap)});
}

inline void mark_diverged(Trajectory& traj, double t, std::string why) {
    traj.status = RunStatus::Diverged;
    traj.diverged_at = t;
    traj.message = std::move(why);
    for (auto& [name, series] : traj.diagnostics) series.mark_diverged(t);
}

} // namespace detail

/// Advance from t = 0 to the horizon with fixed dt (the last step is shortened to land on T).
///
/// Snapshots and diagnostics are recorded at t = 0, every save_every steps and at the final
/// time. A blow-up signal truncates the trajectory with status Diverged; a CFL rejection
/// stops it with status StepRejected. Both keep everything recorded so far.
inline Trajectory run(const SolverConfig& config, const SpectralVectorField& u0,
                      const std::vector<CriterionSpec>& monitors = {}, const RunHooks& hooks = {}) {
    config.validate();
    require_same_grid(config.grid, u0.grid());

    Trajectory traj{config, monitors, {}, {}, RunStatus::Completed, std::nullopt, {}};
    std::set<std::string> names{diag::energy, diag::enstrophy, diag::omega_hm1_inf};
    traj.diagnostics.emplace_back(diag::energy, TimeSeries{});
    traj.diagnostics.emplace_back(diag::enstrophy, TimeSeries{});
    traj.diagnostics.emplace_back(diag::omega_hm1_inf, TimeSeries{});
    for (const auto& m : monitors) {
        if (!names.insert(m.id).second) throw InvalidConfig("duplicate diagnostic name '" + m.id + "'");
        traj.diagnostics.emplace_back(m.id, TimeSeries{});
    }
    if (config.forcing)
        traj.config.forcing = detail::admissible_state(*config.forcing, "forcing");

    auto u = detail::admissible_state(u0, "initial condition");
    const SolverConfig& cfg = traj.config;
    const long total = std::max(1L, static_cast<long>(std::ceil(cfg.horizon / cfg.dt - 1e-9)));

    detail::record(traj, 0.0, u);
    for (long i = 0; i < total; ++i) {
        const double t = static_cast<double>(i) * cfg.dt;
        const double t_next = (i + 1 == total) ? cfg.horizon : static_cast<double>(i + 1) * cfg.dt;
        if (hooks.before_step) hooks.before_step(i, t, u);
        std::optional<StepResult> attempt;
        try {
            attempt.emplace(detail::advance(u, t, t_next - t, cfg));
        } catch (const StepRejected& e) {
            traj.status = RunStatus::StepRejected;
            traj.message = e.what();
            return traj;
        }
        auto& res = *attempt;
        if (res.blew_up) {
            detail::mark_diverged(traj, res.t, "non-finite coefficient detected at t = " + std::to_string(res.t));
            return traj;
        }
        u = std::move(res.u);
        if ((i + 1) % cfg.save_every == 0 || i + 1 == total) detail::record(traj, t_next, u);
    }
    return traj;
}

struct Measurement {
    Verdict verdict = Verdict::Finite;
    std::optional<double> value;  ///< empty when diverged
};

namespace detail {

// (A^{1/2} a, A^{1/2} b) via Plancherel.
inline double energy_inner(const SpectralVectorField& a, const SpectralVectorField& b) {
    const auto& g = a.grid();
    double sum = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double w = g.lambda1() * norm_squared(g.wavevector(i));
        for (int c = 0; c < 3; ++c) {
            const Complex x = a(c, i), y = b(c, i);
            sum += w * (x.real() * y.real() + x.imag() * y.imag());
        }
    }
    return g.volume() * sum;
}

inline std::vector<double> cumulative_trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
    return out;
}

} // namespace detail

/// Largest relative defect of the energy balance
///   1/2 ||u(t)||^2 + nu int ||A^{1/2} u||^2 = 1/2 ||u(t0)||^2 + int (g, u)
/// over all snapshot pairs t0 < t, normalized by 1/2 ||u(t0)||^2 (pairs with zero energy skipped).
/// The Galerkin system satisfies this with equality up to time-discretization and quadrature error.
inline Measurement energy_balance_residual(const Trajectory& traj) {
    if (traj.diverged()) return {Verdict::Diverged, std::nullopt};
    const auto& snaps = traj.snapshots;
    if (snaps.size() < 2) throw InsufficientData("energy balance needs at least two snapshots");
    const double nu = traj.config.viscosity;
    std::vector<double> t, energy, dissipation, power;
    for (const auto& s : snaps) {
        t.push_back(s.time);
        energy.push_back(0.5 * inner_product(s.field, s.field));
        dissipation.push_back(detail::energy_inner(s.field, s.field));
        power.push_back(traj.config.forcing ? inner_product(*traj.config.forcing, s.field) : 0.0);
    }
    const auto diss_int = detail::cumulative_trapezoid(t, dissipation);
    const auto power_int = detail::cumulative_trapezoid(t, power);
    std::vector<double> balance(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) balance[j] = energy[j] + nu * diss_int[j] - power_int[j];

    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (energy[i] == 0.0) continue;
        for (std::size_t j = i + 1; j < t.size(); ++j)
            worst = std::max(worst, std::abs(balance[j] - balance[i]) / energy[i]);
    }
    return {Verdict::Finite, worst};
}

namespace detail {

// Piecewise-linear interpolant of (t, y) integrated over [a, b], plus endpoint values.
struct LinearIntegral {
    double at_a = 0.0, at_b = 0.0, integral = 0.0;
};

inline double interpolate(const std::vector<double>& t, const std::vector<double>& y, double x) {
    if (x <= t.front()) return y.front();
    if (x >= t.back()) return y.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - t.begin());
    const double w = (x - t[j - 1]) / (t[j] - t[j - 1]);
    return (1.0 - w) * y[j - 1] + w * y[j];
}

inline LinearIntegral integrate_linear(const std::vector<double>& t, const std::vector<double>& y, double a, double b) {
    LinearIntegral out;
    out.at_a = interpolate(t, y, a);
    out.at_b = interpolate(t, y, b);
    double prev_t = a, prev_y = out.at_a;
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (t[j] <= a) continue;
        if (t[j] >= b) break;
        out.integral += 0.5 * (t[j] - prev_t) * (y[j] + prev_y);
        prev_t = t[j];
        prev_y = y[j];
    }
    out.integral += 0.5 * (b - prev_t) * (out.at_b + prev_y);
    return out;
}

} // namespace detail

/// Normalized defect of the weak formulation tested against a fixed solenoidal v:
///   (u(t1), v) + int [nu (A^{1/2} u, A^{1/2} v) + ((u . grad) u, v)] = (u(t0), v) + int (g, v)
/// Against solenoidal v the convective term equals -(N(u), v). Snapshot samples are joined
/// linearly in time, so [t0, t1] need not fall on snapshot times. The defect is divided by
/// max_t ||u(t)||_2 ||v||_2 (returned raw when that scale is zero).
inline double weak_form_residual(const Trajectory& traj, const SpectralVectorField& v, double t0, double t1) {
    const auto& snaps = traj.snapshots;
    if (snaps.empty()) throw InsufficientData("weak-form residual of an empty trajectory");
    require_same_grid(traj.config.grid, v.grid());
    const double first = snaps.front().time, last = snaps.back().time;
    const double slack = 1e-12 * std::max(1.0, std::abs(last));
    if (!(t0 <= t1) || t0 < first - slack || t1 > last + slack)
        throw RangeError("interval [" + std::to_string(t0) + ", " + std::to_string(t1) + "] outside the trajectory span [" +
                         std::to_string(first) + ", " + std::to_string(last) + "]");

    const double nu = traj.config.viscosity;
    std::vector<double> t, pairing, viscous, convective;
    double u_scale = 0.0;
    for (const auto& s : snaps) {
        t.push_back(s.time);
        pairing.push_back(inner_product(s.field, v));
        viscous.push_back(nu * detail::energy_inner(s.field, v));
        convective.push_back(-inner_product(nonlinear_term(s.field), v));
        u_scale = std::max(u_scale, l2_norm(s.field));
    }
    const double forcing = traj.config.forcing ? inner_product(*traj.config.forcing, v) : 0.0;

    const auto p = detail::integrate_linear(t, pairing, t0, t1);
    const auto a = detail::integrate_linear(t, viscous, t0, t1);
    const auto c = detail::integrate_linear(t, convective, t0, t1);
    const double lhs = p.at_b + a.integral + c.integral;
    const double rhs = p.at_a + forcing * (t1 - t0);
    const double scale = u_scale * l2_norm(v);
    const double diff = std::abs(lhs - rhs);
    return scale > 0.0 ? diff / scale : diff;
}

/// |(N(u), u)| / ||u||_2^3; the rotational nonlinearity is pointwise orthogonal to u.
inline double nonlinear_orthogonality_check(const SpectralVectorField& u) {
    const double norm = l2_norm(u);
    if (norm == 0.0) return 0.0;
    return std::abs(inner_product(nonlinear_term(u), u)) / (norm * norm * norm);
}

} // namespace nsreg

#endif
