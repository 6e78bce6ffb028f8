#include "oscwave/floquet.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace oscwave {

namespace {

constexpr Complex kI{0.0, 1.0};

// gcd over positive reals; fmod of a near-multiple leaves either ~0 or ~b.
double float_gcd(double a, double b, double tol) {
    a = std::abs(a);
    b = std::abs(b);
    if (a < b) std::swap(a, b);
    while (b > tol) {
        double r = std::fmod(a, b);
        if (b - r < tol) r = 0.0;
        a = b;
        b = r;
    }
    return a;
}

Complex wavenumber_for(double omega_m) {
    if (omega_m > 0.0) return Complex(std::sqrt(omega_m), 0.0);
    return Complex(0.0, std::sqrt(-omega_m));
}

/// Root of the free three-point recurrence Theta_{i+1} + Theta_{i-1} =
/// 2c Theta_i that represents the outgoing (or decaying) branch. Using the
/// scheme's own root makes the boundary rows exact at the discrete level,
/// so the edges introduce no additional truncation error.
Complex outgoing_root(double omega_m, double h, FloquetOptions::Scheme scheme) {
    double c;
    if (scheme == FloquetOptions::Scheme::Numerov) {
        const double denom = 1.0 + h * h * omega_m / 12.0;
        if (denom <= 0.0)
            throw std::invalid_argument("floquet: grid too coarse for channel");
        c = (1.0 - (5.0 / 12.0) * h * h * omega_m) / denom;
    } else {
        c = 1.0 - 0.5 * h * h * omega_m;
    }
    if (omega_m > 0.0) {
        if (!(std::abs(c) < 1.0))
            throw std::invalid_argument(
                "floquet: grid too coarse for the fastest propagating channel");
        return Complex(c, std::sqrt(1.0 - c * c));  // e^{+i k h}, rightward
    }
    return Complex(c - std::sqrt(c * c - 1.0), 0.0);  // decaying, in (0, 1)
}

double fit_decay_rate(const std::vector<double>& x,
                      const std::vector<Complex>& field, double x_lo,
                      double x_hi, double floor_abs) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < x_lo || x[i] > x_hi) continue;
        const double a = std::abs(field[i]);
        if (!(a > floor_abs) || !std::isfinite(a)) continue;
        const double y = std::log(a);
        sx += x[i];
        sy += y;
        sxx += x[i] * x[i];
        sxy += x[i] * y;
        ++n;
    }
    if (n < 8) return 0.0;
    const double dn = static_cast<double>(n);
    const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    return -slope;
}

}  // namespace

const Channel& ChannelSet::at_index(int m) const {
    if (m < m_min || m > m_max)
        throw std::out_of_range("channels: sideband index outside the set");
    return channels[static_cast<std::size_t>(m - m_min)];
}

ChannelSet build_channels(double omega0, const ModulationSpec& mod, int m_min,
                          int m_max) {
    if (!(omega0 > 0.0))
        throw std::invalid_argument("channels: omega0 must be positive");
    if (m_min > 0 || m_max < 0)
        throw std::invalid_argument("channels: index range must contain 0");

    ChannelSet set;
    set.incident_frequency = omega0;

    if (mod.empty()) {
        set.base_frequency = 0.0;
        set.m_min = set.m_max = 0;
        set.channels.push_back({0, omega0, wavenumber_for(omega0)});
        return set;
    }

    const double scale = mod.max_frequency();
    const double tol = 1e-9 * scale;
    double base = 0.0;
    for (const auto& tone : mod.tones()) base = float_gcd(base, tone.frequency, tol);
    bool commensurate = base > tol;
    if (commensurate) {
        for (const auto& tone : mod.tones()) {
            const double q = tone.frequency / base;
            if (std::abs(q - std::round(q)) > 1e-6) {
                commensurate = false;
                break;
            }
        }
    }
    if (!commensurate)
        throw std::invalid_argument(
            "channels: tone frequencies share no common base (quasi-periodic "
            "drives have no sideband lattice)");

    set.base_frequency = base;
    set.m_min = m_min;
    set.m_max = m_max;
    const double threshold_tol = 1e-9 * std::max(omega0, scale);
    for (int m = m_min; m <= m_max; ++m) {
        const double omega_m = omega0 + static_cast<double>(m) * base;
        if (std::abs(omega_m) < threshold_tol)
            throw std::invalid_argument(
                "channels: sideband at zero frequency (threshold channel)");
        set.channels.push_back({m, omega_m, wavenumber_for(omega_m)});
    }
    return set;
}

FloquetOptions default_floquet_options(const PotentialSpec& pot) {
    if (!pot.is_gaussian())
        throw std::invalid_argument(
            "floquet: default window requires a Gaussian potential");
    FloquetOptions options;
    const double half_width = 6.0 / std::sqrt(pot.beta());
    options.x_min = -half_width;
    options.x_max = half_width;
    return options;
}

FloquetScatteringResult solve_floquet_scattering(const PotentialSpec& pot,
                                                 const ModulationSpec& mod,
                                                 double omega0,
                                                 const ChannelSet& channels,
                                                 const FloquetOptions& options) {
    if (!pot.is_gaussian())
        throw std::invalid_argument(
            "floquet: sampled potentials are not supported here (their values "
            "exist only on their own grid nodes)");
    if (std::abs(channels.incident_frequency - omega0) >
        1e-12 * std::max(1.0, omega0))
        throw std::invalid_argument("floquet: channel set built for another omega0");
    if (options.n_x < 16)
        throw std::invalid_argument("floquet: n_x too small");
    if (!(options.x_max > options.x_min))
        throw std::invalid_argument("floquet: empty window");
    if (options.incident_sign != 1 && options.incident_sign != -1)
        throw std::invalid_argument("floquet: incident_sign must be +1 or -1");
    // Radiation boundary rows assume free motion at the edges.
    const double v_edge = std::max(std::abs(pot(options.x_min)),
                                   std::abs(pot(options.x_max)));
    if (v_edge > 1e-10 * pot.max_abs())
        throw std::invalid_argument(
            "floquet: window too small, potential not decayed at the edges");

    const std::size_t n = options.n_x;
    const std::size_t m_count = channels.channels.size();
    const double h = (options.x_max - options.x_min) / static_cast<double>(n - 1);
    const bool numerov = options.scheme == FloquetOptions::Scheme::Numerov;

    std::vector<double> x(n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = options.x_min + static_cast<double>(i) * h;
        v[i] = pot(x[i]);
    }

    double tail_start = 0.0;
    for (std::size_t i = n; i-- > 0 && x[i] >= 0.0;) {
        if (std::abs(v[i]) > 1e-10 * pot.max_abs()) break;
        tail_start = x[i];
    }

    // Tone list as sideband offsets: tone at freq = offset * base couples
    // the equation of channel m to Theta_{m + offset}; its amplitude also
    // sources channel m = -offset from the incident wave.
    std::vector<std::pair<int, Complex>> offsets;
    std::map<int, Complex> source_amp;
    for (const auto& tone : mod.tones()) {
        const int off =
            static_cast<int>(std::lround(tone.frequency / channels.base_frequency));
        offsets.emplace_back(off, tone.amplitude);
        source_amp[-off] += tone.amplitude;
    }

    const double k0 = std::sqrt(omega0);
    const double sign = static_cast<double>(options.incident_sign);
    // S[c] at node i: amplitude of the incident-wave source in channel c.
    auto source_at = [&](std::size_t i, std::size_t c) -> Complex {
        const auto it = source_amp.find(channels.channels[c].index);
        if (it == source_amp.end()) return Complex(0.0, 0.0);
        return it->second * v[i] * std::exp(kI * sign * k0 * x[i]);
    };

    // Diagonal of F at node i for channel c is -omega_c; coupling blocks add
    // V(x_i) * amplitude at column channel c + offset.  (Theta'' = F Theta + S.)
    const auto dim = static_cast<Eigen::Index>(n * m_count);
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(n * m_count * (4 + 3 * offsets.size()));
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);

    auto col = [m_count](std::size_t i, std::size_t c) {
        return static_cast<Eigen::Index>(i * m_count + c);
    };

    // weight of F_{i+d} inside the A-block at node offset d
    const double w_side = numerov ? -h * h / 12.0 : 0.0;
    const double w_mid = numerov ? -10.0 * h * h / 12.0 : -h * h;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        for (std::size_t c = 0; c < m_count; ++c) {
            const Eigen::Index row = col(i, c);
            const double omega_c = channels.channels[c].frequency;

            triplets.emplace_back(row, col(i - 1, c), Complex(1.0, 0.0));
            triplets.emplace_back(row, col(i, c), Complex(-2.0, 0.0));
            triplets.emplace_back(row, col(i + 1, c), Complex(1.0, 0.0));

            // F diagonal part (-omega_c) at the three nodes
            triplets.emplace_back(row, col(i, c), Complex(-w_mid * omega_c, 0.0));
            if (numerov) {
                triplets.emplace_back(row, col(i - 1, c),
                                      Complex(-w_side * omega_c, 0.0));
                triplets.emplace_back(row, col(i + 1, c),
                                      Complex(-w_side * omega_c, 0.0));
            }
            // coupling blocks V(x) * amplitude into channel c + offset
            for (const auto& [off, amp] : offsets) {
                const int target = channels.channels[c].index + off;
                if (target < channels.m_min || target > channels.m_max) continue;
                const auto tc = static_cast<std::size_t>(target - channels.m_min);
                triplets.emplace_back(row, col(i, tc), w_mid * v[i] * amp);
                if (numerov) {
                    triplets.emplace_back(row, col(i - 1, tc),
                                          w_side * v[i - 1] * amp);
                    triplets.emplace_back(row, col(i + 1, tc),
                                          w_side * v[i + 1] * amp);
                }
            }
            if (numerov) {
                rhs[row] = (h * h / 12.0) *
                           (source_at(i + 1, c) + 10.0 * source_at(i, c) +
                            source_at(i - 1, c));
            } else {
                rhs[row] = h * h * source_at(i, c);
            }
        }
    }
    for (std::size_t c = 0; c < m_count; ++c) {
        const Complex rho =
            outgoing_root(channels.channels[c].frequency, h, options.scheme);
        triplets.emplace_back(col(0, c), col(0, c), Complex(1.0, 0.0));
        triplets.emplace_back(col(0, c), col(1, c), -rho);
        triplets.emplace_back(col(n - 1, c), col(n - 1, c), Complex(1.0, 0.0));
        triplets.emplace_back(col(n - 1, c), col(n - 2, c), -rho);
    }

    Eigen::SparseMatrix<Complex> a(dim, dim);
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> solver;
    solver.compute(a);
    if (solver.info() != Eigen::Success)
        throw SingularSystemError(
            "floquet: sparse factorization failed (system singular at solver "
            "precision; a channel may sit on a resonance)");
    const Eigen::VectorXcd u = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
        throw SingularSystemError("floquet: triangular solve failed");

    const double rhs_max = rhs.lpNorm<Eigen::Infinity>();
    double residual = 0.0;
    if (rhs_max > 0.0)
        residual = (a * u - rhs).lpNorm<Eigen::Infinity>() / rhs_max;
    if (residual > 1e-6)
        throw SolveAccuracyError("floquet: solution residual " +
                                 std::to_string(residual) + " exceeds 1e-6");

    FloquetScatteringResult result;
    result.channels = channels;
    result.residual = residual;
    result.x_nodes = x;
    result.potential_tail_start = tail_start;
    result.reflection.resize(m_count);
    result.transmission.resize(m_count);
    result.channel_fields.assign(m_count, std::vector<Complex>(n));

    for (std::size_t c = 0; c < m_count; ++c)
        for (std::size_t i = 0; i < n; ++i)
            result.channel_fields[c][i] = u[col(i, c)];

    const bool forward = options.incident_sign > 0;
    for (std::size_t c = 0; c < m_count; ++c) {
        const Channel& ch = channels.channels[c];
        const Complex left = result.channel_fields[c].front();
        const Complex right = result.channel_fields[c].back();
        const Complex delta = (ch.index == 0) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        if (ch.propagating()) {
            const double k = ch.wavenumber.real();
            // Plane-wave coefficients phase-referenced to x = 0.
            const Complex back_going = left * std::exp(kI * k * options.x_min);
            const Complex fore_going = right * std::exp(-kI * k * options.x_max);
            if (forward) {
                result.reflection[c] = back_going;
                result.transmission[c] = delta + fore_going;
            } else {
                result.reflection[c] = fore_going;
                result.transmission[c] = delta + back_going;
            }
        } else {
            // Raw edge values; rescaling evanescent amplitudes to x = 0
            // would multiply them by exp(|k| L) and mean nothing.
            result.reflection[c] = forward ? left : right;
            result.transmission[c] = forward ? right : left;
        }
    }

    if (m_count > 1) {
        for (std::size_t c : {std::size_t{0}, m_count - 1}) {
            double peak = 0.0;
            for (const auto& z : result.channel_fields[c])
                peak = std::max(peak, std::abs(z));
            if (peak > 1e-8) result.truncation_warning = true;
        }
    }
    return result;
}

double flux_balance(const FloquetScatteringResult& result) {
    const double k0 = result.channels.at_index(0).wavenumber.real();
    double sum = 0.0;
    for (std::size_t c = 0; c < result.channels.channels.size(); ++c) {
        const Channel& ch = result.channels.channels[c];
        if (!ch.propagating()) continue;
        const double w = ch.wavenumber.real() / k0;
        sum += (std::norm(result.reflection[c]) + std::norm(result.transmission[c])) * w;
    }
    return sum;
}

InvisibilityReport verify_invisibility(const FloquetScatteringResult& result,
                                       double tol) {
    InvisibilityReport report;
    report.tolerance = tol;
    report.max_propagating_reflection = 0.0;
    report.max_sideband_transmission = 0.0;
    report.incident_transmission_deviation = 0.0;

    const auto& channels = result.channels.channels;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const Channel& ch = channels[c];
        if (ch.propagating()) {
            report.max_propagating_reflection = std::max(
                report.max_propagating_reflection, std::abs(result.reflection[c]));
            if (ch.index == 0) {
                report.incident_transmission_deviation =
                    std::abs(result.transmission[c] - Complex(1.0, 0.0));
            } else {
                report.max_sideband_transmission = std::max(
                    report.max_sideband_transmission,
                    std::abs(result.transmission[c]));
            }
        } else {
            EvanescentProfile profile;
            profile.index = ch.index;
            profile.frequency = ch.frequency;
            profile.expected_decay_rate = ch.wavenumber.imag();
            double peak = 0.0;
            for (const auto& z : result.channel_fields[c])
                peak = std::max(peak, std::abs(z));
            profile.max_abs = peak;
            // Fit only the clean tail: past the potential's support and above
            // the solver's noise floor. Falls back to 0 when nothing is left,
            // which just means the channel decayed below measurable range.
            const double x_hi = result.x_nodes.back();
            profile.fitted_decay_rate = fit_decay_rate(
                result.x_nodes, result.channel_fields[c],
                result.potential_tail_start, 0.95 * x_hi, 1e-13 * peak);
            report.evanescent_profiles.push_back(profile);
        }
    }
    report.reflectionless = report.max_propagating_reflection < tol;
    report.transmission_unit = report.incident_transmission_deviation < tol;
    report.no_sideband_transmission = report.max_sideband_transmission < tol;
    return report;
}

}  // namespace oscwave
