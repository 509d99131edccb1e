#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/susceptibility.hpp"

namespace slowlight {

/// Independent verification route for chi_homogeneous: assemble the
/// steady-state coherence equations of the three-level system to first
/// order in the probe and solve the linear system numerically.
///
/// Rotating frame, population in the probe ground state (rho_11 = 1):
///   0 = -(g_opt - i*D) rho_31 + i*(Op/2) + i*(Oc/2) rho_21
///   0 = -(g_s   - i*u) rho_21 + i*(Oc/2) rho_31
/// Returned value is rho_31 scaled by 2*g_opt/Op, matching the
/// chi_homogeneous normalization (Oc = 0, D = 0 -> i).
inline complexd steady_state_oracle(double delta_two_photon, double delta_optical,
                                    const MediumModel& model) {
    const double g_opt = model.atomic.optical_dephasing_rate;
    const double g_s = model.atomic.spin_dephasing_rate;
    const double oc = rabi_from_intensity(model.fields.coupling_intensity,
                                          model.fields.rabi_calibration);
    const double op = 1.0;  // first-order probe; cancels in the normalization
    const complexd i1(0.0, 1.0);
    const complexd u = two_pi * delta_two_photon * i1;
    const complexd d = two_pi * delta_optical * i1;

    // unknowns v = (rho_31, rho_21):  A v = b
    std::array<std::array<complexd, 2>, 2> a{{
        {complexd(-g_opt) + d, i1 * (oc / 2.0)},
        {i1 * (oc / 2.0), complexd(-g_s) + u},
    }};
    std::array<complexd, 2> b{-i1 * (op / 2.0), complexd(0.0)};

    // 2x2 Gaussian elimination with partial pivoting
    int p = std::abs(a[0][0]) >= std::abs(a[1][0]) ? 0 : 1;
    if (std::abs(a[p][0]) == 0.0)
        throw numerical_error("steady_state_oracle: degenerate system (all rates zero on resonance)");
    if (p == 1) {
        std::swap(a[0], a[1]);
        std::swap(b[0], b[1]);
    }
    const complexd m = a[1][0] / a[0][0];
    a[1][1] -= m * a[0][1];
    b[1] -= m * b[0];
    if (std::abs(a[1][1]) == 0.0)
        throw numerical_error("steady_state_oracle: degenerate system (all rates zero on resonance)");
    const complexd rho21 = b[1] / a[1][1];
    const complexd rho31 = (b[0] - a[0][1] * rho21) / a[0][0];

    return rho31 * (2.0 * g_opt / op);
}

}  // namespace slowlight
