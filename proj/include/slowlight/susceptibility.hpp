#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/quadrature.hpp"

namespace slowlight {

using complexd = std::complex<double>;

/// Omega_c = kappa * sqrt(I).
inline double rabi_from_intensity(double intensity, double calibration) {
    if (intensity < 0) throw config_error("rabi_from_intensity: intensity must be >= 0");
    if (!(calibration > 0)) throw config_error("rabi_from_intensity: calibration must be > 0");
    return calibration * std::sqrt(intensity);
}

/// Weak-probe steady-state susceptibility of a single homogeneous ion class.
///
///   chi = i*g_opt*(g_s - i*u) / [(g_opt - i*D)(g_s - i*u) + Omega^2/4]
///
/// with u = 2*pi*delta_two_photon and D = 2*pi*delta_optical. Normalized so
/// that Omega = 0, D = 0 gives chi = i (unit resonant absorption; the
/// physical scale is carried by the background optical depth).
inline complexd chi_homogeneous(double delta_two_photon, double delta_optical,
                                const MediumModel& model) {
    const double g_opt = model.atomic.optical_dephasing_rate;
    const double g_s = model.atomic.spin_dephasing_rate;
    const double omega = rabi_from_intensity(model.fields.coupling_intensity,
                                             model.fields.rabi_calibration);
    const complexd u(0.0, -two_pi * delta_two_photon);
    const complexd d(0.0, -two_pi * delta_optical);
    const complexd num = complexd(0.0, g_opt) * (g_s + u);
    const complexd den = (g_opt + d) * (g_s + u) + 0.25 * omega * omega;
    return num / den;
}

namespace detail {

/// Effective optical coherence decay once the static optical spread is
/// folded in; sets the saturation scale Omega^2/(4*g_eff) of the
/// transparency window.
inline double effective_optical_rate(const MediumModel& m) {
    return m.atomic.optical_dephasing_rate + pi * m.broadening.optical_inhom_fwhm;
}

inline double power_broadening_rate(const MediumModel& m, double omega) {
    return omega * omega / (4.0 * effective_optical_rate(m));
}

/// Unnormalized double average of chi_homogeneous over the optical and spin
/// spreads. The sharp structures of the integrand (homogeneous core, the
/// Rabi-split doublet, and the moving two-photon resonance) are passed to
/// the panel builder so a modest per-panel order resolves them.
inline complexd chi_double_average(double delta, const MediumModel& m, double omega) {
    const double g_opt = m.atomic.optical_dephasing_rate;
    const double g_s = m.atomic.spin_dephasing_rate;
    const double cd = m.fields.coupling_detuning;
    const double half_opt = 5.0 * m.broadening.optical_inhom_fwhm;
    const double half_spin = 5.0 * m.broadening.spin_inhom_fwhm;
    const int order_opt = std::max(4, m.broadening.quadrature_points_optical / 4);
    const int order_spin = std::max(4, m.broadening.quadrature_points_spin / 4);

    const double a_pow = power_broadening_rate(m, omega);
    const auto spin = panel_nodes(half_spin, {{delta, (g_s + a_pow) / two_pi}}, order_spin);

    std::vector<FeatureCenter> opt_base;
    const double core_w = g_opt / two_pi;
    opt_base.push_back({delta + cd, core_w});
    const double rabi_split = omega / (2.0 * two_pi);
    if (rabi_split > core_w) {
        opt_base.push_back({delta + cd - rabi_split, core_w + rabi_split / 8.0});
        opt_base.push_back({delta + cd + rabi_split, core_w + rabi_split / 8.0});
    }

    complexd acc(0.0, 0.0);
    double spin_mass = 0.0;
    for (std::size_t j = 0; j < spin.nodes.size(); ++j) {
        const double eps = spin.nodes[j];
        const double wj = spin.weights[j] *
            lineshape_pdf(eps, m.broadening.spin_inhom_fwhm, m.broadening.spin_inhom_shape);
        spin_mass += wj;

        const double u = two_pi * (delta - eps);
        auto centers = opt_base;
        if (std::abs(u) > 1e-12) {
            // dark-state resonance: optical offset where the light shift
            // cancels the two-photon detuning
            const double x_dark = (delta + cd) - omega * omega / (4.0 * u) / two_pi;
            const double w_dark =
                (g_opt + 0.25 * omega * omega * g_s / (u * u)) / two_pi;
            centers.push_back({x_dark, w_dark});
        }
        const auto opt = panel_nodes(half_opt, centers, order_opt);

        const complexd cu(0.0, -u);
        complexd inner(0.0, 0.0);
        double opt_mass = 0.0;
        for (std::size_t i = 0; i < opt.nodes.size(); ++i) {
            const double x = opt.nodes[i];
            const double wi = opt.weights[i] *
                lineshape_pdf(x, m.broadening.optical_inhom_fwhm,
                              m.broadening.optical_inhom_shape);
            opt_mass += wi;
            const complexd d(0.0, -two_pi * (delta + cd - x));
            const complexd num = complexd(0.0, g_opt) * (g_s + cu);
            const complexd den = (g_opt + d) * (g_s + cu) + 0.25 * omega * omega;
            inner += wi * num / den;
        }
        acc += wj * inner / opt_mass;
    }
    return acc / spin_mass;
}

/// Renormalization anchor: the averaged coupling-off value at line center.
inline complexd chi_average_anchor(const MediumModel& m) {
    return chi_double_average(0.0, m, 0.0);
}

}  // namespace detail

/// Evaluator for the inhomogeneously averaged susceptibility. Caches the
/// coupling-off anchor so spectra over many detunings pay for it once.
class AveragedSusceptibility {
  public:
    explicit AveragedSusceptibility(const MediumModel& model)
        : model_(model),
          omega_(rabi_from_intensity(model.fields.coupling_intensity,
                                     model.fields.rabi_calibration)),
          scale_(complexd(0.0, 1.0) / detail::chi_average_anchor(model)) {
        model_.validate();
    }

    /// chi averaged over both spreads, normalized so that the coupling-off
    /// value at delta = 0 is exactly i.
    complexd operator()(double delta) const {
        return detail::chi_double_average(delta, model_, omega_) * scale_;
    }

    /// Same medium with the coupling beam blocked.
    complexd coupling_off(double delta) const {
        return detail::chi_double_average(delta, model_, 0.0) * scale_;
    }

    double omega() const { return omega_; }
    const MediumModel& model() const { return model_; }

  private:
    MediumModel model_;
    double omega_;
    complexd scale_;
};

inline complexd chi_averaged(double delta_two_photon, const MediumModel& model) {
    return AveragedSusceptibility(model)(delta_two_photon);
}

/// Doubling check on the quadrature: recompute with twice the configured
/// point counts and fail if the value moved by more than 1e-6 relative.
inline complexd chi_averaged_checked(double delta_two_photon, const MediumModel& model) {
    const complexd v = chi_averaged(delta_two_photon, model);
    MediumModel fine = model;
    fine.broadening.quadrature_points_optical *= 2;
    fine.broadening.quadrature_points_spin *= 2;
    const complexd vf = chi_averaged(delta_two_photon, fine);
    const double rel = std::abs(v - vf) / std::max(std::abs(vf), 1e-300);
    if (!(rel <= 1e-6))
        throw numerical_error("chi_averaged: quadrature not converged at delta = " +
                              std::to_string(delta_two_photon) + " Hz (doubling moved value by " +
                              std::to_string(rel) + " relative)");
    return v;
}

}  // namespace slowlight
