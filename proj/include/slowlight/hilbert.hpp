#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/fft.hpp"

namespace slowlight {

/// Discrete Hilbert transform of a real sequence on a periodic grid
/// (power-of-two length), oriented so that for a response analytic in the
/// upper half plane the dispersion relation reads Re f = hilbert(Im f).
/// Used to check Kramers-Kronig consistency of the averaged susceptibility.
inline std::vector<double> hilbert_transform(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (!is_power_of_two(n))
        throw numerical_error("hilbert_transform: length must be a power of two");
    std::vector<std::complex<double>> spec(n);
    for (std::size_t i = 0; i < n; ++i) spec[i] = x[i];
    fft(spec, -1);
    spec[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        if (k < n / 2)
            spec[k] *= std::complex<double>(0.0, 1.0);
        else if (k == n / 2)
            spec[k] = 0.0;
        else
            spec[k] *= std::complex<double>(0.0, -1.0);
    }
    fft(spec, +1);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = spec[i].real();
    return out;
}

}  // namespace slowlight
