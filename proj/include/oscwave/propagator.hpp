#pragma once

#include "oscwave/grid.hpp"
#include "oscwave/modulation.hpp"
#include "oscwave/potential.hpp"

#include <optional>
#include <vector>

namespace oscwave {

/// Smooth imaginary absorbing mask near the domain edges; off by default.
/// Must stay disabled for norm-sensitive runs.
struct AbsorberSpec {
    double ramp_width;
    double strength;
};

struct PropagationPlan {
    double dt;
    std::size_t steps_per_record;
    double total_time;
    std::optional<AbsorberSpec> absorber;
};

/// Recorded evolution: snapshot fields at strictly increasing times.
/// runaway_flagged marks any snapshot whose peak amplitude exceeded
/// 1e6 times the initial peak (complex drives can amplify).
struct Trajectory {
    GridPtr grid;
    std::vector<double> times;
    std::vector<std::vector<Complex>> snapshots;
    bool runaway_flagged = false;
    double max_amplification = 1.0;
};

/// Time integration of i psi_t = -psi_xx + f(t) V(x) psi by Strang splitting.
///
/// Each step is a half kinetic step (multiply Fourier coefficients by
/// exp(-i k^2 dt/2)), the potential step exp(-i V(x) I) with I the exact
/// closed-form integral of f over the step, and another half kinetic step.
/// The potential step is non-unitary whenever I has an imaginary part.
/// Snapshots are recorded every steps_per_record steps plus t = 0 and the
/// final time. The plan must resolve the fastest tone: dt <= (2 pi/w_max)/32.
Trajectory propagate(const WaveFunction& initial, const PotentialSpec& pot,
                     const ModulationSpec& mod, const PropagationPlan& plan);

/// Exact free evolution: one spectral step exp(-i k^2 t).
WaveFunction free_propagate(const WaveFunction& state, double t);

/// As propagate, with the static (possibly complex) potential exp(-i V_eff dt).
Trajectory effective_propagate(const WaveFunction& initial, const EffectiveField& eff,
                               const PropagationPlan& plan);

/// Frame change psi -> phi = psi * exp(+i V(x) g(t)) with g the zero-mean
/// antiderivative of f, evaluated at the state's own time stamp.
WaveFunction gauge_transform(const WaveFunction& state, const PotentialSpec& pot,
                             const ModulationSpec& mod);

/// Inverse frame change (sign-flipped exponent).
WaveFunction gauge_transform_inverse(const WaveFunction& state, const PotentialSpec& pot,
                                     const ModulationSpec& mod);

/// Snapshot as a WaveFunction (copies the stored field).
WaveFunction state_at(const Trajectory& traj, std::size_t snapshot_index);

}  // namespace oscwave
