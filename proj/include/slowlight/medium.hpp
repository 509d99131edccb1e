#pragma once

#include <cmath>
#include <string>

#include "slowlight/errors.hpp"

namespace slowlight {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

enum class LineShape { Lorentzian, Gaussian };

inline std::string to_string(LineShape s) {
    return s == LineShape::Lorentzian ? "lorentzian" : "gaussian";
}

/// Homogeneous rates and level structure of the driven three-level system.
/// Rates are angular HWHM values (rad/s); splittings are in Hz.
struct AtomicParams {
    double optical_dephasing_rate = two_pi * 10e3;  // rad/s
    double spin_dephasing_rate = two_pi * 1e3;      // rad/s
    double raman_splitting = 10.2e6;                // Hz
    double optical_wavelength = 605.7e-9;           // m

    void validate(const std::string& path = "atomic") const {
        if (!(optical_dephasing_rate >= 0))
            throw config_error(path + ".optical_dephasing_rate: must be >= 0");
        if (!(spin_dephasing_rate >= 0))
            throw config_error(path + ".spin_dephasing_rate: must be >= 0");
        if (!(raman_splitting > 0))
            throw config_error(path + ".raman_splitting: must be > 0");
        if (!(optical_wavelength > 0))
            throw config_error(path + ".optical_wavelength: must be > 0");
    }
};

/// Static frequency spreads: the optical line restored inside the burned
/// hole and the ground-state (two-photon) spread.
struct BroadeningParams {
    double optical_inhom_fwhm = 0.5e6;  // Hz
    LineShape optical_inhom_shape = LineShape::Lorentzian;
    double spin_inhom_fwhm = 60e3;      // Hz
    LineShape spin_inhom_shape = LineShape::Gaussian;
    int quadrature_points_optical = 64;
    int quadrature_points_spin = 64;

    void validate(const std::string& path = "broadening") const {
        if (!(optical_inhom_fwhm > 0))
            throw config_error(path + ".optical_inhom_fwhm: must be > 0");
        if (!(spin_inhom_fwhm > 0))
            throw config_error(path + ".spin_inhom_fwhm: must be > 0");
        if (quadrature_points_optical < 8 || quadrature_points_optical % 2 != 0)
            throw config_error(path + ".quadrature_points_optical: must be >= 8 and even");
        if (quadrature_points_spin < 8 || quadrature_points_spin % 2 != 0)
            throw config_error(path + ".quadrature_points_spin: must be >= 8 and even");
    }
};

struct FieldParams {
    double coupling_intensity = 105.0;  // W/cm^2
    double probe_intensity = 0.1;       // W/cm^2, weak-probe regime, informational
    double repump_intensity = 1.6;      // W/cm^2, enters only via the background depth
    double coupling_detuning = 0.0;     // Hz
    // kappa in Omega_c = kappa * sqrt(I_c); default frozen from `calibrate`
    // with the stock medium (62 kHz fitted dip width at 105 W/cm^2).
    double rabi_calibration = 1.1236672657376663e5;

    void validate(const std::string& path = "fields") const {
        if (!(coupling_intensity >= 0))
            throw config_error(path + ".coupling_intensity: must be >= 0");
        if (!(probe_intensity >= 0))
            throw config_error(path + ".probe_intensity: must be >= 0");
        if (!(repump_intensity >= 0))
            throw config_error(path + ".repump_intensity: must be >= 0");
        if (!(rabi_calibration > 0))
            throw config_error(path + ".rabi_calibration: must be > 0");
        if (!std::isfinite(coupling_detuning))
            throw config_error(path + ".coupling_detuning: must be finite");
    }
};

struct MediumModel {
    AtomicParams atomic;
    BroadeningParams broadening;
    FieldParams fields;
    double length = 3e-3;                   // m
    double background_optical_depth = 2.30; // alpha*L at line center, coupling off

    void validate() const {
        atomic.validate();
        broadening.validate();
        fields.validate();
        if (!(length > 0))
            throw config_error("medium.length: must be > 0");
        if (!(background_optical_depth >= 0))
            throw config_error("medium.background_optical_depth: must be >= 0");
    }
};

}  // namespace slowlight
