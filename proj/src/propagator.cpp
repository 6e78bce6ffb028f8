#include "oscwave/propagator.hpp"

#include "oscwave/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oscwave {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kRunawayFactor = 1e6;

void check_plan(const PropagationPlan& plan, double omega_max) {
    if (!(plan.dt > 0.0)) throw std::invalid_argument("plan: dt must be positive");
    if (!(plan.total_time > 0.0))
        throw std::invalid_argument("plan: total_time must be positive");
    if (plan.steps_per_record == 0)
        throw std::invalid_argument("plan: steps_per_record must be positive");
    if (omega_max > 0.0) {
        const double dt_max = (2.0 * std::numbers::pi / omega_max) / 32.0;
        if (plan.dt > dt_max * (1.0 + 1e-12))
            throw std::invalid_argument(
                "plan: dt too coarse for the fastest tone (limit 1/32 period)");
    }
    const double steps = plan.total_time / plan.dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
        throw std::invalid_argument("plan: total_time must be a multiple of dt");
    if (plan.absorber) {
        if (!(plan.absorber->ramp_width > 0.0) || !(plan.absorber->strength > 0.0))
            throw std::invalid_argument("plan: absorber parameters must be positive");
    }
}

std::size_t step_count(const PropagationPlan& plan) {
    return static_cast<std::size_t>(std::llround(plan.total_time / plan.dt));
}

double max_abs(const std::vector<Complex>& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

/// Per-step damping mask exp(-strength*ramp(x)*dt) for the optional edge
/// absorber; ramp is a smooth half-cosine rising from 0 to 1 over ramp_width.
std::vector<double> absorber_mask(const SpatialGrid& grid, const AbsorberSpec& spec,
                                  double dt) {
    std::vector<double> mask(grid.size(), 1.0);
    const double span = grid.x_max() - grid.x_min();
    const double w = std::min(spec.ramp_width, 0.5 * span);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = grid.x(j);
        const double edge = std::min(x - grid.x_min(), grid.x_max() - x);
        if (edge >= w) continue;
        const double s = 0.5 * (1.0 + std::cos(std::numbers::pi * edge / w));
        mask[j] = std::exp(-spec.strength * s * dt);
    }
    return mask;
}

/// Shared stepping loop; `potential_step(field, t0, t1)` applies the
/// real-space factor for the step [t0, t1] in place.
template <typename PotentialStep>
Trajectory run(const WaveFunction& initial, const PropagationPlan& plan,
               double omega_max, PotentialStep&& potential_step) {
    if (!initial.grid) throw std::invalid_argument("propagate: null grid");
    check_plan(plan, omega_max);

    const std::size_t n_steps = step_count(plan);
    const auto& grid = *initial.grid;

    std::vector<Complex> half_kinetic(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double k = grid.wavenumbers()[j];
        half_kinetic[j] = std::exp(Complex(0.0, -0.5 * k * k * plan.dt));
    }

    std::vector<double> mask;
    if (plan.absorber) mask = absorber_mask(grid, *plan.absorber, plan.dt);

    Trajectory traj;
    traj.grid = initial.grid;
    traj.times.push_back(initial.time);
    traj.snapshots.push_back(initial.values);

    const double initial_peak = max_abs(initial.values);
    if (initial_peak == 0.0)
        throw std::invalid_argument("propagate: zero initial state");

    std::vector<Complex> field = initial.values;
    std::vector<Complex> spectrum(field.size());
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t0 = initial.time + static_cast<double>(step) * plan.dt;
        const double t1 = t0 + plan.dt;

        fft::forward(field, spectrum);
        for (std::size_t j = 0; j < spectrum.size(); ++j)
            spectrum[j] *= half_kinetic[j];
        fft::inverse(spectrum, field);

        potential_step(field, t0, t1);

        fft::forward(field, spectrum);
        for (std::size_t j = 0; j < spectrum.size(); ++j)
            spectrum[j] *= half_kinetic[j];
        fft::inverse(spectrum, field);

        if (!mask.empty())
            for (std::size_t j = 0; j < field.size(); ++j) field[j] *= mask[j];

        const bool record = ((step + 1) % plan.steps_per_record == 0) ||
                            (step + 1 == n_steps);
        if (record) {
            traj.times.push_back(t1);
            traj.snapshots.push_back(field);
            const double peak = max_abs(field);
            traj.max_amplification =
                std::max(traj.max_amplification, peak / initial_peak);
            if (peak > kRunawayFactor * initial_peak) traj.runaway_flagged = true;
        }
    }
    return traj;
}

}  // namespace

Trajectory propagate(const WaveFunction& initial, const PotentialSpec& pot,
                     const ModulationSpec& mod, const PropagationPlan& plan) {
    if (!initial.grid) throw std::invalid_argument("propagate: null grid");
    const std::vector<double> v = pot.values_on(*initial.grid);
    return run(initial, plan, mod.max_frequency(),
               [&](std::vector<Complex>& field, double t0, double t1) {
                   // Exact integral of f over the step removes the
                   // oscillation-sampling error entirely.
                   const Complex integral = mod.integrate(t0, t1);
                   for (std::size_t j = 0; j < field.size(); ++j)
                       field[j] *= std::exp(-kI * v[j] * integral);
               });
}

WaveFunction free_propagate(const WaveFunction& state, double t) {
    if (!state.grid) throw std::invalid_argument("free_propagate: null grid");
    WaveFunction out;
    out.grid = state.grid;
    out.time = state.time + t;
    out.values.resize(state.values.size());
    fft::forward(state.values, out.values);
    const auto& k = state.grid->wavenumbers();
    for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] *= std::exp(Complex(0.0, -k[j] * k[j] * t));
    fft::inverse_inplace(out.values);
    return out;
}

Trajectory effective_propagate(const WaveFunction& initial, const EffectiveField& eff,
                               const PropagationPlan& plan) {
    if (!initial.grid) throw std::invalid_argument("effective_propagate: null grid");
    if (!eff.grid || !(*eff.grid == *initial.grid))
        throw std::invalid_argument("effective_propagate: field grid mismatch");
    std::vector<Complex> phase(eff.values.size());
    for (std::size_t j = 0; j < phase.size(); ++j)
        phase[j] = std::exp(-kI * eff.values[j] * plan.dt);
    return run(initial, plan, 0.0,
               [&phase](std::vector<Complex>& field, double, double) {
                   for (std::size_t j = 0; j < field.size(); ++j)
                       field[j] *= phase[j];
               });
}

namespace {
WaveFunction apply_gauge(const WaveFunction& state, const PotentialSpec& pot,
                         const ModulationSpec& mod, double sign) {
    if (!state.grid) throw std::invalid_argument("gauge: null grid");
    const Complex g = mod.antiderivative_zero_mean()(state.time);
    const std::vector<double> v = pot.values_on(*state.grid);
    WaveFunction out;
    out.grid = state.grid;
    out.time = state.time;
    out.values.resize(state.values.size());
    for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] = state.values[j] * std::exp(sign * kI * v[j] * g);
    return out;
}
}  // namespace

WaveFunction gauge_transform(const WaveFunction& state, const PotentialSpec& pot,
                             const ModulationSpec& mod) {
    return apply_gauge(state, pot, mod, +1.0);
}

WaveFunction gauge_transform_inverse(const WaveFunction& state,
                                     const PotentialSpec& pot,
                                     const ModulationSpec& mod) {
    return apply_gauge(state, pot, mod, -1.0);
}

WaveFunction state_at(const Trajectory& traj, std::size_t snapshot_index) {
    if (snapshot_index >= traj.snapshots.size())
        throw std::out_of_range("trajectory: snapshot index out of range");
    WaveFunction out;
    out.grid = traj.grid;
    out.time = traj.times[snapshot_index];
    out.values = traj.snapshots[snapshot_index];
    return out;
}

}  // namespace oscwave
