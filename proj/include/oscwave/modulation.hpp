#pragma once

#include <complex>
#include <vector>

namespace oscwave {

using Complex = std::complex<double>;

/// One complex exponential tone amp*exp(i*frequency*t) of the drive.
struct Tone {
    Complex amplitude;
    double frequency;  // nonzero; the drive has zero time average
};

enum class Sidedness { PositiveOneSided, NegativeOneSided, TwoSided, Zero };

struct SidednessReport {
    Sidedness classification;
    double spectral_gap;  // smallest |frequency| among surviving tones (one-sided only)
    double tolerance_used;
};

/// Finite tone sum f(t) = sum_j amp_j exp(i*freq_j*t).
///
/// The representation is exact: spectra, antiderivatives and per-step time
/// integrals all have closed forms. Tones at the same frequency are merged at
/// construction; a zero-frequency tone is rejected (the drive must average to
/// zero over time). Tones are kept sorted by frequency.
class ModulationSpec {
  public:
    ModulationSpec() = default;
    explicit ModulationSpec(std::vector<Tone> tones);

    static ModulationSpec cosine(double omega, double amplitude = 1.0);
    static ModulationSpec one_sided(double omega, double amplitude = 0.5);
    static ModulationSpec one_sided_negative(double omega, double amplitude = 0.5);
    /// amplitude*(exp(i*omega*t) + exp(i*sqrt(2)*omega*t)); quasi-periodic.
    static ModulationSpec two_tone(double omega, double amplitude = 0.25);

    const std::vector<Tone>& tones() const { return tones_; }
    bool empty() const { return tones_.empty(); }

    Complex operator()(double t) const;

    /// Largest |frequency| over all tones; 0 for the empty spec.
    double max_frequency() const;

    /// The unique antiderivative of f with vanishing time average,
    /// represented again as a tone sum: (amp/(i*freq), freq) per tone.
    ModulationSpec antiderivative_zero_mean() const;

    /// Long-time average of g(t)^2 with g the zero-mean antiderivative:
    /// the sum over tone pairs (j,l) with freq_j + freq_l = 0 of
    /// (amp_j/(i freq_j))*(amp_l/(i freq_l)). Complex for complex drives.
    Complex mean_square_antiderivative() const;

    /// Exact closed-form integral of f over [t0, t1].
    Complex integrate(double t0, double t1) const;

    /// Tones mapped (amp, freq) -> (conj(amp), -freq); the spectrum of conj(f).
    ModulationSpec conjugate_reflected() const;

  private:
    std::vector<Tone> tones_;  // sorted by frequency, unique frequencies
};

/// Classifies the spectral support of f. Tones with |amp| below
/// rel_tol * max|amp| are treated as absent.
SidednessReport classify_sidedness(const ModulationSpec& spec, double rel_tol = 1e-12);

}  // namespace oscwave
