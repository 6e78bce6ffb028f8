#include "oscwave/potential.hpp"

#include "oscwave/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oscwave {

PotentialSpec PotentialSpec::gaussian(double v0, double beta) {
    if (!(beta > 0.0))
        throw std::invalid_argument("potential: beta must be positive");
    PotentialSpec spec;
    spec.is_gaussian_ = true;
    spec.v0_ = v0;
    spec.beta_ = beta;
    return spec;
}

PotentialSpec PotentialSpec::sampled(GridPtr grid, std::vector<double> values) {
    if (!grid) throw std::invalid_argument("potential: null grid");
    if (values.size() != grid->size())
        throw std::invalid_argument("potential: values length != grid size");

    double max_abs = 0.0;
    for (double v : values) max_abs = std::max(max_abs, std::abs(v));
    // Bound-potential check: the outer 10% of nodes on each side must be
    // negligible, otherwise periodic wrap-around and the scattering windows
    // downstream are meaningless.
    const std::size_t edge = grid->size() / 10;
    for (std::size_t j = 0; j < grid->size(); ++j) {
        if (j >= edge && j < grid->size() - edge) continue;
        if (std::abs(values[j]) >= 1e-10 * max_abs && max_abs > 0.0)
            throw std::invalid_argument(
                "potential: sampled profile does not decay at the grid edges");
    }

    PotentialSpec spec;
    spec.is_gaussian_ = false;
    spec.grid_ = std::move(grid);
    spec.values_ = std::move(values);
    return spec;
}

double PotentialSpec::v0() const {
    if (!is_gaussian_) throw std::logic_error("potential: v0 of a sampled spec");
    return v0_;
}

double PotentialSpec::beta() const {
    if (!is_gaussian_) throw std::logic_error("potential: beta of a sampled spec");
    return beta_;
}

double PotentialSpec::operator()(double x) const {
    if (is_gaussian_) return v0_ * std::exp(-beta_ * x * x);
    const double dx = grid_->spacing();
    const double pos = (x - grid_->x_min()) / dx;
    const auto j = static_cast<long>(std::lround(pos));
    if (j < 0 || j >= static_cast<long>(grid_->size()) ||
        std::abs(pos - static_cast<double>(j)) > 1e-9)
        throw std::invalid_argument(
            "potential: sampled profile evaluated off its grid nodes");
    return values_[static_cast<std::size_t>(j)];
}

std::vector<double> PotentialSpec::values_on(const SpatialGrid& grid) const {
    if (is_gaussian_) {
        std::vector<double> out(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double x = grid.x(j);
            out[j] = v0_ * std::exp(-beta_ * x * x);
        }
        return out;
    }
    if (!(grid == *grid_))
        throw std::invalid_argument("potential: sampled spec bound to another grid");
    return values_;
}

std::vector<double> PotentialSpec::derivative_on(const SpatialGrid& grid) const {
    if (is_gaussian_) {
        std::vector<double> out(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double x = grid.x(j);
            out[j] = -2.0 * beta_ * x * v0_ * std::exp(-beta_ * x * x);
        }
        return out;
    }
    if (!(grid == *grid_))
        throw std::invalid_argument("potential: sampled spec bound to another grid");
    std::vector<Complex> work(values_.begin(), values_.end());
    fft::forward_inplace(work);
    const auto& k = grid.wavenumbers();
    for (std::size_t j = 0; j < work.size(); ++j) work[j] *= Complex(0.0, k[j]);
    fft::inverse_inplace(work);
    std::vector<double> out(work.size());
    for (std::size_t j = 0; j < work.size(); ++j) out[j] = work[j].real();
    return out;
}

double PotentialSpec::max_abs() const {
    if (is_gaussian_) return std::abs(v0_);
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

EffectiveField effective_potential(const PotentialSpec& pot, GridPtr grid,
                                   const ModulationSpec& mod) {
    if (!grid) throw std::invalid_argument("effective_potential: null grid");
    const Complex scale = mod.mean_square_antiderivative();
    const std::vector<double> dv = pot.derivative_on(*grid);

    EffectiveField field;
    field.grid = std::move(grid);
    field.scale = scale;
    field.values.resize(dv.size());
    for (std::size_t j = 0; j < dv.size(); ++j)
        field.values[j] = dv[j] * dv[j] * scale;
    return field;
}

double effective_potential_gaussian_analytic(double v0, double beta, double omega,
                                             double x) {
    if (!(beta > 0.0))
        throw std::invalid_argument("effective_potential: beta must be positive");
    if (!(omega > 0.0))
        throw std::invalid_argument("effective_potential: omega must be positive");
    const double b = v0 * beta / omega;
    return 2.0 * b * b * x * x * std::exp(-2.0 * beta * x * x);
}

}  // namespace oscwave
