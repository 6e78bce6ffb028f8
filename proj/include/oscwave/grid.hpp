#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace oscwave {

using Complex = std::complex<double>;

/// Uniform periodic 1D grid with its conjugate wavenumber grid.
///
/// Sample points are x_j = x_min + j*dx for j = 0..n-1 with dx = (x_max - x_min)/n;
/// x_max is the periodic image of x_min and is not duplicated. The wavenumber
/// samples follow the DFT ordering: k_j = 2*pi*m/(n*dx) with signed index
/// m = j for j <= n/2 and m = j - n otherwise, so m ranges over (-n/2, n/2].
class SpatialGrid {
  public:
    SpatialGrid(double x_min, double x_max, std::size_t n);

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    std::size_t size() const { return n_; }
    double spacing() const { return dx_; }
    double x(std::size_t j) const { return x_min_ + static_cast<double>(j) * dx_; }
    const std::vector<double>& wavenumbers() const { return k_; }

    bool operator==(const SpatialGrid& other) const {
        return x_min_ == other.x_min_ && x_max_ == other.x_max_ && n_ == other.n_;
    }

  private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double dx_;
    std::vector<double> k_;
};

using GridPtr = std::shared_ptr<const SpatialGrid>;

GridPtr make_grid(double x_min, double x_max, std::size_t n);

/// Complex wave field sampled on a grid at a fixed time.
struct WaveFunction {
    GridPtr grid;
    std::vector<Complex> values;
    double time = 0.0;
};

/// Gaussian packet A*exp(-(x-center)^2/width^2 + i*carrier*x) at t = 0.
/// With normalize set, A makes sum |psi|^2 dx equal 1; otherwise A = 1.
/// The packet's six-sigma amplitude support must fit inside the domain.
WaveFunction make_gaussian_packet(GridPtr grid, double center, double width,
                                  double carrier, bool normalize);

/// N = sum |psi_j|^2 dx (rectangle rule; exact trapezoid on a periodic grid).
double norm(const WaveFunction& state);

bool all_finite(const WaveFunction& state);

}  // namespace oscwave
