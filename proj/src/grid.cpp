#include "oscwave/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oscwave {

namespace {
bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }
}  // namespace

SpatialGrid::SpatialGrid(double x_min, double x_max, std::size_t n)
    : x_min_(x_min), x_max_(x_max), n_(n) {
    if (!(x_max > x_min))
        throw std::invalid_argument("grid: x_max must exceed x_min");
    if (!is_power_of_two(n))
        throw std::invalid_argument("grid: n must be a power of two >= 2");
    dx_ = (x_max - x_min) / static_cast<double>(n);
    k_.resize(n);
    const double dk = 2.0 * std::numbers::pi / (x_max - x_min);
    for (std::size_t j = 0; j < n; ++j) {
        const long m = (j <= n / 2) ? static_cast<long>(j)
                                    : static_cast<long>(j) - static_cast<long>(n);
        k_[j] = dk * static_cast<double>(m);
    }
}

GridPtr make_grid(double x_min, double x_max, std::size_t n) {
    return std::make_shared<const SpatialGrid>(x_min, x_max, n);
}

WaveFunction make_gaussian_packet(GridPtr grid, double center, double width,
                                  double carrier, bool normalize) {
    if (!grid) throw std::invalid_argument("packet: null grid");
    if (!(width > 0.0)) throw std::invalid_argument("packet: width must be positive");
    // Intensity standard deviation is width/2; require the 6-sigma support
    // inside the domain so periodic wrap-around stays negligible.
    const double support = 3.0 * width;
    if (center - support < grid->x_min() || center + support > grid->x_max())
        throw std::invalid_argument(
            "packet: 6-sigma support exceeds the domain (grid too small)");

    WaveFunction state;
    state.grid = grid;
    state.time = 0.0;
    state.values.resize(grid->size());
    for (std::size_t j = 0; j < grid->size(); ++j) {
        const double x = grid->x(j);
        const double u = (x - center) / width;
        state.values[j] = std::exp(Complex(-u * u, carrier * x));
    }
    if (normalize) {
        const double n0 = norm(state);
        if (n0 <= 0.0) throw std::runtime_error("packet: zero norm");
        const double a = 1.0 / std::sqrt(n0);
        for (auto& v : state.values) v *= a;
    }
    return state;
}

double norm(const WaveFunction& state) {
    if (!state.grid) throw std::invalid_argument("norm: null grid");
    double sum = 0.0;
    for (const auto& v : state.values) sum += std::norm(v);
    return sum * state.grid->spacing();
}

bool all_finite(const WaveFunction& state) {
    for (const auto& v : state.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace oscwave
