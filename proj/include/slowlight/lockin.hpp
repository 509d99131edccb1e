#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/timeseries.hpp"

namespace slowlight {

struct LockInResult {
    double in_phase = 0.0;
    double quadrature = 0.0;
    double magnitude = 0.0;
    double phase = 0.0;  // rad, (-pi, pi]
};

/// Phase-sensitive detection: multiply by cos/-sin references at f_ref,
/// first-order low-pass, then average the settled output over an integer
/// number of reference periods (averaging removes the residual 2f ripple
/// that a single settled sample retains).
///
/// For A*cos(2 pi f_ref t + phi): in_phase = (A/2) cos(phi - phase_ref),
/// quadrature = (A/2) sin(phi - phase_ref), phase = phi - phase_ref.
inline LockInResult lockin_demodulate(const TimeSeries& signal, double f_ref,
                                      double phase_ref, double time_constant) {
    // not signal.validate(): demodulation accepts truncated (non power-of-two)
    // segments, so check rate and finiteness directly
    if (!(signal.sample_rate > 0))
        throw config_error("lockin_demodulate: sample_rate must be > 0");
    if (signal.samples.empty())
        throw config_error("lockin_demodulate: empty signal");
    for (double s : signal.samples)
        if (!std::isfinite(s))
            throw numerical_error("lockin_demodulate: non-finite sample");
    if (!(f_ref > 0)) throw config_error("lockin_demodulate: f_ref must be > 0");
    if (!(time_constant > 0))
        throw config_error("lockin_demodulate: time_constant must be > 0");
    const double dt = 1.0 / signal.sample_rate;
    const double duration = signal.duration();
    if (duration < 8.0 * time_constant)
        throw numerical_error("lockin_demodulate: signal shorter than 8 time constants; "
                              "filter cannot settle");

    const double alpha = 1.0 - std::exp(-dt / time_constant);
    const std::size_t n = signal.samples.size();
    const std::size_t settle = static_cast<std::size_t>(
        std::ceil(8.0 * time_constant * signal.sample_rate));

    // average window: largest whole number of reference periods after settle
    const double period_samples = signal.sample_rate / f_ref;
    const std::size_t avail = n > settle ? n - settle : 0;
    const std::size_t periods = static_cast<std::size_t>(
        std::floor(static_cast<double>(avail) / period_samples));
    if (periods < 1)
        throw numerical_error("lockin_demodulate: no settled reference period available");
    const std::size_t win = static_cast<std::size_t>(
        std::floor(static_cast<double>(periods) * period_samples));
    const std::size_t start = n - win;

    double yi = 0.0, yq = 0.0, si = 0.0, sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = signal.t0 + static_cast<double>(k) * dt;
        const double arg = two_pi * f_ref * t + phase_ref;
        const double xi = signal.samples[k] * std::cos(arg);
        const double xq = -signal.samples[k] * std::sin(arg);
        yi += alpha * (xi - yi);
        yq += alpha * (xq - yq);
        if (k >= start) {
            si += yi;
            sq += yq;
        }
    }
    LockInResult r;
    r.in_phase = si / static_cast<double>(win);
    r.quadrature = sq / static_cast<double>(win);
    r.magnitude = std::hypot(r.in_phase, r.quadrature);
    r.phase = std::atan2(r.quadrature, r.in_phase);
    return r;
}

/// One row of a phase-projected spectrum.
struct PhasePoint {
    double detuning = 0.0;
    double projection = 0.0;  // in-phase amplitude at the chosen reference phase
};

/// Project each detuning's demodulated vector onto a reference phase.
inline std::vector<PhasePoint> phase_resolved_spectrum(
    const std::vector<std::pair<double, LockInResult>>& spectra, double phase_ref) {
    std::vector<PhasePoint> out;
    out.reserve(spectra.size());
    for (const auto& [det, r] : spectra)
        out.push_back({det, r.magnitude * std::cos(r.phase - phase_ref)});
    return out;
}

enum class SpectrumComponent { Background, Peak };

struct SuppressionResult {
    double phase_ref = 0.0;        // reference phase that nulls the component
    double component_phase = 0.0;  // phase of the suppressed component
    bool degenerate = false;       // background and peak phases within 1 mrad
};

inline double wrap_phase(double p) {
    p = std::fmod(p + pi, two_pi);
    if (p < 0) p += two_pi;
    return p - pi;
}

/// Reference phase orthogonal to one spectral component. The background
/// phase is read at the largest detunings; the transparency-peak component
/// is the vector from the edge average to the center point.
inline SuppressionResult suppress_component(
    const std::vector<std::pair<double, LockInResult>>& spectra,
    SpectrumComponent component) {
    if (spectra.size() < 3)
        throw config_error("suppress_component: need at least 3 detuning points");
    auto vec = [](const LockInResult& r) {
        return std::complex<double>(r.in_phase, r.quadrature);
    };
    const auto bg = 0.5 * (vec(spectra.front().second) + vec(spectra.back().second));
    std::size_t center = 0;
    for (std::size_t i = 1; i < spectra.size(); ++i)
        if (std::abs(spectra[i].first) < std::abs(spectra[center].first)) center = i;
    const auto pk = vec(spectra[center].second) - bg;

    const double phase_bg = std::arg(bg);
    const double phase_pk = std::arg(pk);
    SuppressionResult r;
    r.degenerate = std::abs(wrap_phase(phase_bg - phase_pk)) < 1e-3 ||
                   std::abs(std::abs(wrap_phase(phase_bg - phase_pk)) - pi) < 1e-3;
    r.component_phase = component == SpectrumComponent::Background ? phase_bg : phase_pk;
    r.phase_ref = wrap_phase(r.component_phase + 0.5 * pi);
    return r;
}

}  // namespace slowlight
