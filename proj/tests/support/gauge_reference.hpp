#pragma once

// Independent reference integrator for the gauge-frame equation
//
//     i phi_t = -phi_xx + 2 i a(x,t) phi_x + (i a_x(x,t) + a(x,t)^2) phi,
//     a(x,t) = V'(x) g(t),   g = zero-mean antiderivative of the drive,
//
// the frame in which the oscillating potential has been absorbed into a
// phase. Classical RK4 in time with spectral spatial derivatives; shares
// nothing with the production propagator except the raw FFT.

#include "oscwave/grid.hpp"
#include "oscwave/modulation.hpp"
#include "oscwave/potential.hpp"

namespace testsupport {

oscwave::WaveFunction integrate_gauge_frame(const oscwave::WaveFunction& initial,
                                            const oscwave::PotentialSpec& pot,
                                            const oscwave::ModulationSpec& mod,
                                            double total_time,
                                            std::size_t steps);

}  // namespace testsupport
