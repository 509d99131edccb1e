#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/fft.hpp"
#include "slowlight/spectrum.hpp"
#include "slowlight/timeseries.hpp"

namespace slowlight {

namespace detail {

/// Catmull-Rom interpolation of H on its uniform grid; frequencies beyond
/// the grid clamp to the edge value.
inline complexd interp_transfer(const ComplexSpectrum& h, double f) {
    const double step = h.step();
    const double pos = (f - h.detunings.front()) / step;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(h.values.size());
    if (pos <= 0.0) return h.values.front();
    if (pos >= static_cast<double>(n - 1)) return h.values.back();
    const std::ptrdiff_t i1 = static_cast<std::ptrdiff_t>(pos);
    const double t = pos - static_cast<double>(i1);
    const std::ptrdiff_t i0 = std::max<std::ptrdiff_t>(i1 - 1, 0);
    const std::ptrdiff_t i2 = std::min<std::ptrdiff_t>(i1 + 1, n - 1);
    const std::ptrdiff_t i3 = std::min<std::ptrdiff_t>(i1 + 2, n - 1);
    const complexd p0 = h.values[i0], p1 = h.values[i1], p2 = h.values[i2],
                   p3 = h.values[i3];
    return p1 + 0.5 * t * (p2 - p0 +
           t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
           t * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace detail

/// Spectral linear filter: FFT the envelope, multiply each bin by H at the
/// bin frequency, inverse FFT. The real part is returned (the imaginary
/// residue is a numerical check, not physics).
inline TimeSeries propagate(const TimeSeries& signal, const ComplexSpectrum& h) {
    signal.validate();
    h.validate();
    const std::size_t n = signal.samples.size();
    std::vector<complexd> spec(n);
    for (std::size_t i = 0; i < n; ++i) spec[i] = signal.samples[i];
    fft(spec, -1);

    // coverage: every significant sideband must fall inside H's grid
    double peak_side = 0.0;
    double worst_uncovered = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double f = fft_bin_frequency(k, n, signal.sample_rate);
        const double mag = std::abs(spec[k]);
        peak_side = std::max(peak_side, mag);
        if (f < h.detunings.front() || f > h.detunings.back())
            worst_uncovered = std::max(worst_uncovered, mag);
    }
    if (peak_side > 0.0 && worst_uncovered > 0.06 * peak_side)
        throw numerical_error("propagate: transfer-function grid does not cover the "
                              "signal's occupied bandwidth");

    // forward bin k carries the e^{+i 2 pi f_k t} component, which is the
    // physical sideband at detuning -f_k; sample H there so a positive
    // phase slope of H produces a true delay
    for (std::size_t k = 0; k < n; ++k) {
        const double f = fft_bin_frequency(k, n, signal.sample_rate);
        spec[k] *= detail::interp_transfer(h, -f);
    }
    fft(spec, +1);

    TimeSeries out;
    out.sample_rate = signal.sample_rate;
    out.t0 = signal.t0;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = spec[i].real();
    return out;
}

}  // namespace slowlight
