#include "oscwave/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oscwave {

namespace {
constexpr Complex kI{0.0, 1.0};
}

ModulationSpec::ModulationSpec(std::vector<Tone> tones) {
    for (const auto& tone : tones) {
        if (tone.frequency == 0.0)
            throw std::invalid_argument(
                "modulation: zero-frequency tone (drive must have zero mean)");
    }
    std::sort(tones.begin(), tones.end(),
              [](const Tone& a, const Tone& b) { return a.frequency < b.frequency; });
    for (const auto& tone : tones) {
        if (!tones_.empty() && tones_.back().frequency == tone.frequency)
            tones_.back().amplitude += tone.amplitude;
        else
            tones_.push_back(tone);
    }
    // Canonical form: merged-out tones disappear entirely.
    std::erase_if(tones_, [](const Tone& t) { return t.amplitude == 0.0; });
}

ModulationSpec ModulationSpec::cosine(double omega, double amplitude) {
    if (omega == 0.0) throw std::invalid_argument("modulation: omega must be nonzero");
    return ModulationSpec{{{0.5 * amplitude, omega}, {0.5 * amplitude, -omega}}};
}

ModulationSpec ModulationSpec::one_sided(double omega, double amplitude) {
    if (!(omega > 0.0)) throw std::invalid_argument("modulation: omega must be positive");
    return ModulationSpec{{{amplitude, omega}}};
}

ModulationSpec ModulationSpec::one_sided_negative(double omega, double amplitude) {
    if (!(omega > 0.0)) throw std::invalid_argument("modulation: omega must be positive");
    return ModulationSpec{{{amplitude, -omega}}};
}

ModulationSpec ModulationSpec::two_tone(double omega, double amplitude) {
    if (!(omega > 0.0)) throw std::invalid_argument("modulation: omega must be positive");
    return ModulationSpec{
        {{amplitude, omega}, {amplitude, std::numbers::sqrt2 * omega}}};
}

Complex ModulationSpec::operator()(double t) const {
    Complex sum = 0.0;
    for (const auto& tone : tones_)
        sum += tone.amplitude * std::exp(kI * tone.frequency * t);
    return sum;
}

double ModulationSpec::max_frequency() const {
    double m = 0.0;
    for (const auto& tone : tones_) m = std::max(m, std::abs(tone.frequency));
    return m;
}

ModulationSpec ModulationSpec::antiderivative_zero_mean() const {
    std::vector<Tone> result;
    result.reserve(tones_.size());
    for (const auto& tone : tones_)
        result.push_back({tone.amplitude / (kI * tone.frequency), tone.frequency});
    return ModulationSpec{std::move(result)};
}

Complex ModulationSpec::mean_square_antiderivative() const {
    // <g^2> keeps only tone pairs whose frequencies cancel exactly; all other
    // products oscillate and average out. Exact frequency comparison is
    // correct here because paired tones are constructed as v and -v.
    Complex sum = 0.0;
    for (const auto& a : tones_) {
        for (const auto& b : tones_) {
            if (a.frequency + b.frequency == 0.0)
                sum += (a.amplitude / (kI * a.frequency)) *
                       (b.amplitude / (kI * b.frequency));
        }
    }
    return sum;
}

Complex ModulationSpec::integrate(double t0, double t1) const {
    Complex sum = 0.0;
    for (const auto& tone : tones_) {
        const Complex ivu = kI * tone.frequency;
        sum += tone.amplitude * (std::exp(ivu * t1) - std::exp(ivu * t0)) / ivu;
    }
    return sum;
}

ModulationSpec ModulationSpec::conjugate_reflected() const {
    std::vector<Tone> result;
    result.reserve(tones_.size());
    for (const auto& tone : tones_)
        result.push_back({std::conj(tone.amplitude), -tone.frequency});
    return ModulationSpec{std::move(result)};
}

SidednessReport classify_sidedness(const ModulationSpec& spec, double rel_tol) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw std::invalid_argument("modulation: rel_tol must lie in (0, 1)");

    double max_amp = 0.0;
    for (const auto& tone : spec.tones())
        max_amp = std::max(max_amp, std::abs(tone.amplitude));

    bool any_positive = false;
    bool any_negative = false;
    double min_abs_freq = 0.0;
    for (const auto& tone : spec.tones()) {
        if (std::abs(tone.amplitude) < rel_tol * max_amp) continue;
        (tone.frequency > 0.0 ? any_positive : any_negative) = true;
        const double f = std::abs(tone.frequency);
        min_abs_freq = (min_abs_freq == 0.0) ? f : std::min(min_abs_freq, f);
    }

    SidednessReport report;
    report.tolerance_used = rel_tol;
    if (!any_positive && !any_negative) {
        report.classification = Sidedness::Zero;
        report.spectral_gap = 0.0;
    } else if (any_positive && any_negative) {
        report.classification = Sidedness::TwoSided;
        report.spectral_gap = 0.0;
    } else {
        report.classification = any_positive ? Sidedness::PositiveOneSided
                                             : Sidedness::NegativeOneSided;
        report.spectral_gap = min_abs_freq;
    }
    return report;
}

}  // namespace oscwave
