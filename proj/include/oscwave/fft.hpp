#pragma once

#include <complex>
#include <vector>

namespace oscwave::fft {

/// Unscaled forward DFT: out[k] = sum_j in[j] exp(-2*pi*i*j*k/n).
void forward(const std::vector<std::complex<double>>& in,
             std::vector<std::complex<double>>& out);

/// Inverse DFT including the 1/n factor, so inverse(forward(x)) == x.
void inverse(const std::vector<std::complex<double>>& in,
             std::vector<std::complex<double>>& out);

void forward_inplace(std::vector<std::complex<double>>& data);
void inverse_inplace(std::vector<std::complex<double>>& data);

}  // namespace oscwave::fft
