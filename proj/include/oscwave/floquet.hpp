#pragma once

#include "oscwave/modulation.hpp"
#include "oscwave/potential.hpp"

#include <stdexcept>
#include <vector>

namespace oscwave {

// Frequency-domain coupled-channel solver for stationary scattering off
// f(t) V(x) with a time-periodic drive. A plane wave exp(i k0 x - i w0 t)
// is incident on the potential; each drive tone at frequency n*w transfers
// the field between sideband channels at w_m = w0 + m*w. Writing the
// scattered correction as sum_m Theta_m(x) exp(-i w_m t), the channel
// fields satisfy the coupled system
//
//     Theta_m'' + w_m Theta_m - V(x) sum_n f_n Theta_{m+n}
//         = f_{-m} V(x) exp(i k0 x),
//
// with outgoing (radiation) conditions on both edges of a window containing
// the support of V. Channels with w_m < 0 are evanescent: their wavenumber
// i*sqrt(|w_m|) makes the outgoing branches decay away from the potential.
// The discrete system is one sparse block-tridiagonal solve.

/// One sideband: signed index, frequency w0 + m*w, and the wavenumber
/// sqrt(w_m) for propagating or i*sqrt(|w_m|) for evanescent channels.
struct Channel {
    int index;
    double frequency;
    Complex wavenumber;

    bool propagating() const { return frequency > 0.0; }
};

struct ChannelSet {
    double incident_frequency;  // w0 = k0^2
    double base_frequency;      // w; 0 for the empty drive
    int m_min = 0;
    int m_max = 0;
    std::vector<Channel> channels;

    const Channel& at_index(int m) const;
};

/// Sideband lattice for a commensurate drive (every tone frequency an integer
/// multiple of one base frequency). Rejects incommensurate tone sets, and any
/// channel landing exactly on the w_m = 0 threshold. The empty drive yields
/// the single channel m = 0.
ChannelSet build_channels(double omega0, const ModulationSpec& mod, int m_min,
                          int m_max);

struct FloquetOptions {
    double x_min;
    double x_max;
    std::size_t n_x = 2001;
    /// +1: incidence from the left; -1: from the right.
    int incident_sign = +1;
    /// Three-point scheme for the second derivative. Numerov reuses the
    /// tridiagonal stencil but carries O(h^4) global accuracy; CentralFd2
    /// is the plain O(h^2) stencil, kept for error-budget comparisons.
    enum class Scheme { Numerov, CentralFd2 };
    Scheme scheme = Scheme::Numerov;
};

/// Default window [-L, L], L = 6/sqrt(beta), for a Gaussian potential.
FloquetOptions default_floquet_options(const PotentialSpec& pot);

/// Per-channel amplitudes of the solved scattering problem.
///
/// For propagating channels, reflection/transmission are the plane-wave
/// amplitudes phase-referenced to x = 0; transmission in the incident channel
/// includes the unit incident wave. For evanescent channels the stored values
/// are the field amplitudes at the window edges (an x = 0 reference would
/// rescale them by exp(kappa L), amplifying noise beyond meaning).
struct FloquetScatteringResult {
    ChannelSet channels;
    std::vector<Complex> reflection;
    std::vector<Complex> transmission;
    double residual = 0.0;           // max |A x - b| / max |b|
    bool truncation_warning = false; // boundary-channel field above 1e-8
    std::vector<double> x_nodes;
    std::vector<std::vector<Complex>> channel_fields;  // Theta_m on x_nodes
    // Smallest x >= 0 beyond which |V| stays under 1e-10 of its peak.  Tail
    // fits must start here: closer in, the channel fields still track the
    // source term, not their free decay.
    double potential_tail_start = 0.0;
};

/// Linear system factorization failed (resonance at solver precision).
struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Factorization succeeded but the residual is unacceptably large.
struct SolveAccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

FloquetScatteringResult solve_floquet_scattering(const PotentialSpec& pot,
                                                 const ModulationSpec& mod,
                                                 double omega0,
                                                 const ChannelSet& channels,
                                                 const FloquetOptions& options);

/// Flux balance sum_propagating (|r_m|^2 + |t_m|^2) k_m/k0; equals 1 for a
/// real drive and real potential.
double flux_balance(const FloquetScatteringResult& result);

struct EvanescentProfile {
    int index;
    double frequency;
    double expected_decay_rate;  // sqrt(|w_m|)
    // Least-squares slope of ln|Theta_m| past potential_tail_start; 0 when the
    // field there is already below the solver noise floor.
    double fitted_decay_rate;
    double max_abs;              // peak |Theta_m| over the window
};

struct InvisibilityReport {
    bool reflectionless;            // max propagating |r_m| < tol
    bool transmission_unit;         // |t_0 - 1| < tol
    bool no_sideband_transmission;  // max propagating m != 0 |t_m| < tol
    double max_propagating_reflection;
    double incident_transmission_deviation;
    double max_sideband_transmission;
    double tolerance;
    std::vector<EvanescentProfile> evanescent_profiles;
};

InvisibilityReport verify_invisibility(const FloquetScatteringResult& result,
                                       double tol);

}  // namespace oscwave
