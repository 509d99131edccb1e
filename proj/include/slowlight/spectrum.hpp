#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/parallel.hpp"
#include "slowlight/susceptibility.hpp"

namespace slowlight {

/// Complex response sampled on a uniform, ascending detuning grid.
struct ComplexSpectrum {
    std::vector<double> detunings;  // Hz, two-photon detuning
    std::vector<complexd> values;

    void validate() const {
        if (values.size() != detunings.size())
            throw config_error("ComplexSpectrum: values/detunings length mismatch");
        if (detunings.size() < 2)
            throw config_error("ComplexSpectrum: need at least 2 points");
        const double step = detunings[1] - detunings[0];
        if (!(step > 0)) throw config_error("ComplexSpectrum: detunings must be ascending");
        for (std::size_t i = 1; i < detunings.size(); ++i) {
            const double s = detunings[i] - detunings[i - 1];
            if (std::abs(s - step) > 1e-9 * std::abs(step))
                throw config_error("ComplexSpectrum: grid not uniform at index " +
                                   std::to_string(i));
        }
    }

    double step() const { return detunings[1] - detunings[0]; }
};

inline std::vector<double> uniform_grid(double half_span, std::size_t points) {
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = -half_span + 2.0 * half_span * static_cast<double>(i) /
                                static_cast<double>(points - 1);
    return g;
}

/// Closed-form width estimate of the transparency window: the
/// power-broadened homogeneous window combined with the spin spread
/// (Olivero-Longbothum for the Gaussian case). Used for grid sizing and
/// derivative steps; the measured width comes from the peak fit.
inline double eit_width_estimate(const MediumModel& m) {
    const double omega = rabi_from_intensity(m.fields.coupling_intensity,
                                             m.fields.rabi_calibration);
    const double fl = (m.atomic.spin_dephasing_rate +
                       detail::power_broadening_rate(m, omega)) / pi;  // Hz FWHM
    const double fs = m.broadening.spin_inhom_fwhm;
    if (m.broadening.spin_inhom_shape == LineShape::Lorentzian) return fl + fs;
    return 0.5346 * fl + std::sqrt(0.2166 * fl * fl + fs * fs);
}

/// Linear field transfer function of the medium,
///   H(delta) = exp[-(aL/2) Im chi + i (aL/2) Re chi].
inline ComplexSpectrum transfer_function(const MediumModel& model,
                                         const std::vector<double>& grid,
                                         int threads = 1) {
    model.validate();
    ComplexSpectrum h;
    h.detunings = grid;
    h.values.resize(grid.size());
    h.validate();
    if (std::abs(grid.front() + grid.back()) > 1e-9 * std::abs(grid.back()))
        throw config_error("transfer_function: grid must be symmetric about delta = 0");

    if (model.fields.coupling_intensity > 0) {
        const double width = eit_width_estimate(model);
        if (grid.back() - grid.front() < 10.0 * width)
            throw config_error("transfer_function: grid spans less than 10x the EIT width (" +
                               std::to_string(width) + " Hz)");
        if (width / h.step() < 16.0)
            throw numerical_error("transfer_function: fewer than 16 grid points inside the "
                                  "EIT width; refine the grid");
    }

    const AveragedSusceptibility chi(model);
    const double half_depth = 0.5 * model.background_optical_depth;
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const complexd c = chi(grid[i]);
        h.values[i] = std::exp(complexd(-half_depth * c.imag(), half_depth * c.real()));
    });
    return h;
}

/// Phase of the transmitted field at a single detuning, arg H = (aL/2) Re chi.
inline double transfer_phase(const AveragedSusceptibility& chi, double aL, double delta) {
    return 0.5 * aL * chi(delta).real();
}

/// Group delay at the transparency center: tau = d(arg H)/d omega at
/// delta = 0, central difference with Richardson extrapolation (h, h/2).
inline double group_delay_at_center(const MediumModel& model) {
    model.validate();
    const AveragedSusceptibility chi(model);
    const double aL = model.background_optical_depth;
    const double h = eit_width_estimate(model) / 100.0;
    auto slope = [&](double step) {
        return (transfer_phase(chi, aL, step) - transfer_phase(chi, aL, -step)) /
               (2.0 * two_pi * step);
    };
    const double d1 = slope(h);
    const double d2 = slope(0.5 * h);
    const double tau = (4.0 * d2 - d1) / 3.0;
    if (!std::isfinite(tau))
        throw numerical_error("group_delay_at_center: non-finite phase derivative");
    return tau;
}

/// v_g = L / tau. tau = 0 reports an explicit infinity sentinel.
inline double group_velocity(const MediumModel& model) {
    const double tau = group_delay_at_center(model);
    if (tau == 0.0) return std::numeric_limits<double>::infinity();
    return model.length / tau;
}

inline double group_velocity_from_delay(double length, double tau) {
    if (tau == 0.0) return std::numeric_limits<double>::infinity();
    return length / tau;
}

}  // namespace slowlight
