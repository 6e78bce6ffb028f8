#pragma once

#include "oscwave/grid.hpp"
#include "oscwave/modulation.hpp"

#include <vector>

namespace oscwave {

/// Static bound potential V(x): either a Gaussian v0*exp(-beta*x^2) or a
/// sampled profile tied to a specific grid. Sampled profiles must decay below
/// 1e-10 of their peak within the outer 10% of the grid (bound potential).
class PotentialSpec {
  public:
    static PotentialSpec gaussian(double v0, double beta);
    static PotentialSpec sampled(GridPtr grid, std::vector<double> values);

    bool is_gaussian() const { return is_gaussian_; }
    double v0() const;
    double beta() const;
    const GridPtr& sample_grid() const { return grid_; }

    /// Point evaluation. Sampled profiles are defined only at their grid
    /// nodes; off-node evaluation throws (no interpolation).
    double operator()(double x) const;

    /// V at every node of `grid`. A sampled spec requires grid equality.
    std::vector<double> values_on(const SpatialGrid& grid) const;

    /// dV/dx at every node: analytic for Gaussian, spectral for sampled.
    std::vector<double> derivative_on(const SpatialGrid& grid) const;

    double max_abs() const;

  private:
    PotentialSpec() = default;
    bool is_gaussian_ = true;
    double v0_ = 0.0;
    double beta_ = 1.0;
    GridPtr grid_;
    std::vector<double> values_;
};

/// The averaged static potential (dV/dx)^2 * <(int f)^2> on a grid.
/// `scale` records the (possibly complex) time-average factor used.
struct EffectiveField {
    GridPtr grid;
    std::vector<Complex> values;
    Complex scale;
};

EffectiveField effective_potential(const PotentialSpec& pot, GridPtr grid,
                                   const ModulationSpec& mod);

/// Closed form for the Gaussian potential under a cos(omega t) drive:
/// (2 v0^2 beta^2 / omega^2) x^2 exp(-2 beta x^2).
double effective_potential_gaussian_analytic(double v0, double beta, double omega,
                                             double x);

}  // namespace oscwave
