#include "oscwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oscwave {

double width(const WaveFunction& state) {
    if (!state.grid) throw std::invalid_argument("width: null grid");
    double weight = 0.0;
    double second_moment = 0.0;
    for (std::size_t j = 0; j < state.values.size(); ++j) {
        const double p = std::norm(state.values[j]);
        const double x = state.grid->x(j);
        weight += p;
        second_moment += x * x * p;
    }
    if (weight <= 0.0) throw std::invalid_argument("width: zero-norm state");
    return std::sqrt(second_moment / weight);
}

double invisibility_error(const WaveFunction& state,
                          const WaveFunction& reference) {
    if (!state.grid || !reference.grid)
        throw std::invalid_argument("invisibility_error: null grid");
    if (!(*state.grid == *reference.grid))
        throw std::invalid_argument("invisibility_error: grid mismatch");
    if (std::abs(state.time - reference.time) >
        1e-9 * std::max(1.0, std::abs(state.time)))
        throw std::invalid_argument("invisibility_error: time stamp mismatch");
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t j = 0; j < state.values.size(); ++j) {
        diff += std::norm(state.values[j] - reference.values[j]);
        ref += std::norm(reference.values[j]);
    }
    if (ref <= 0.0)
        throw std::invalid_argument("invisibility_error: zero reference");
    return std::sqrt(diff / ref);
}

double reflected_fraction(const WaveFunction& state, double x_split) {
    if (!state.grid) throw std::invalid_argument("reflected_fraction: null grid");
    if (x_split < state.grid->x_min() || x_split > state.grid->x_max())
        throw std::invalid_argument("reflected_fraction: x_split outside grid");
    double left = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < state.values.size(); ++j) {
        const double p = std::norm(state.values[j]);
        total += p;
        if (state.grid->x(j) < x_split) left += p;
    }
    if (total <= 0.0)
        throw std::invalid_argument("reflected_fraction: zero-norm state");
    return left / total;
}

std::vector<std::vector<double>> normalized_intensity(const Trajectory& traj) {
    std::vector<std::vector<double>> rows;
    rows.reserve(traj.snapshots.size());
    for (const auto& snapshot : traj.snapshots) {
        std::vector<double> row(snapshot.size());
        double peak = 0.0;
        for (std::size_t j = 0; j < snapshot.size(); ++j) {
            row[j] = std::norm(snapshot[j]);
            peak = std::max(peak, row[j]);
        }
        if (peak <= 0.0)
            throw std::invalid_argument("normalized_intensity: all-zero snapshot");
        for (auto& p : row) p /= peak;
        rows.push_back(std::move(row));
    }
    return rows;
}

DiagnosticsRecord compute_diagnostics(const Trajectory& traj,
                                      const WaveFunction& initial,
                                      const DiagnosticsRequest& request) {
    DiagnosticsRecord record;
    record.times = traj.times;
    if (request.want_reflected_fraction)
        record.reflected_fraction.emplace();
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        const WaveFunction state = state_at(traj, s);
        record.norm.push_back(norm(state));
        record.width.push_back(width(state));
        if (request.want_invisibility) {
            const WaveFunction reference =
                free_propagate(initial, state.time - initial.time);
            record.invisibility_error.push_back(
                invisibility_error(state, reference));
        }
        if (request.want_reflected_fraction)
            record.reflected_fraction->push_back(
                reflected_fraction(state, request.x_split));
    }
    if (request.want_intensity) record.intensity_map = normalized_intensity(traj);
    return record;
}

}  // namespace oscwave
