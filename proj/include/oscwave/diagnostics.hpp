#pragma once

#include "oscwave/grid.hpp"
#include "oscwave/propagator.hpp"

#include <optional>
#include <vector>

namespace oscwave {

/// Root of the second moment about x = 0:
/// w = sqrt( sum x^2 |psi|^2 / sum |psi|^2 ). Zero-norm states are rejected.
/// Note this is not centroid-referenced; for a packet centered at x0 the
/// value includes the x0 offset.
double width(const WaveFunction& state);

/// Relative L2 distance ||state - reference|| / ||reference||. Compares the
/// full complex fields, so a pure phase distortion registers as error.
/// Requires matching grids and time stamps.
double invisibility_error(const WaveFunction& state,
                          const WaveFunction& reference);

/// Fraction of |psi|^2 strictly left of x_split.
double reflected_fraction(const WaveFunction& state, double x_split);

/// Per-snapshot |psi|^2 scaled by its own spatial maximum, so every row
/// peaks at exactly 1. All-zero snapshots are rejected.
std::vector<std::vector<double>> normalized_intensity(const Trajectory& traj);

struct DiagnosticsRecord {
    std::vector<double> times;
    std::vector<double> norm;
    std::vector<double> width;
    std::vector<double> invisibility_error;
    std::optional<std::vector<double>> reflected_fraction;
    std::optional<std::vector<std::vector<double>>> intensity_map;
};

struct DiagnosticsRequest {
    bool want_invisibility = false;
    bool want_reflected_fraction = false;
    double x_split = 0.0;
    bool want_intensity = false;
};

/// Scans a trajectory once. When invisibility is requested, each snapshot is
/// compared against the free evolution of `initial` to the same time.
DiagnosticsRecord compute_diagnostics(const Trajectory& traj,
                                      const WaveFunction& initial,
                                      const DiagnosticsRequest& request);

}  // namespace oscwave
