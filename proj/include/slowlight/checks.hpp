#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "slowlight/fft.hpp"
#include "slowlight/fit.hpp"
#include "slowlight/harness.hpp"
#include "slowlight/hilbert.hpp"
#include "slowlight/lockin.hpp"
#include "slowlight/propagate.hpp"
#include "slowlight/spectrum.hpp"
#include "slowlight/susceptibility.hpp"
#include "slowlight/timeseries.hpp"

namespace slowlight {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace checks {

/// Causality: the real part of the averaged susceptibility must be the
/// Hilbert transform of the imaginary part (L2 relative error <= 2% on a
/// wide grid; the residual is dominated by the truncated 1/x tails).
inline CheckResult kramers_kronig(const RunConfig& cfg, int threads) {
    const std::size_t n = 4096;
    const double half_span = 16e6;
    const AveragedSusceptibility chi(cfg.medium);
    std::vector<complexd> cs(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const double d = -half_span + 2.0 * half_span * static_cast<double>(i) /
                                          static_cast<double>(n);
        cs[i] = chi(d);
    });
    // subtract a single-pole reference matched to the far wing; the pole is
    // exactly causal, and the remainder decays fast enough for the discrete
    // Hilbert transform on a finite grid
    const double xm = two_pi * 0.75 * half_span;
    const complexd cm = chi(0.75 * half_span);
    const double g = (complexd(0.0, 1.0) * cm * xm / (cm - complexd(0.0, 1.0))).real();
    std::vector<double> rr(n), ri(n);
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = -half_span + 2.0 * half_span * static_cast<double>(i) /
                                          static_cast<double>(n);
        const complexd aux = complexd(0.0, 1.0) * g / (g - complexd(0.0, two_pi * d));
        rr[i] = cs[i].real() - aux.real();
        ri[i] = cs[i].imag() - aux.imag();
        den += cs[i].real() * cs[i].real();
    }
    const auto h = hilbert_transform(ri);
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = rr[i] - h[i];
        num += r * r;
    }
    const double rel = std::sqrt(num / den);
    return {"kramers_kronig", rel <= 0.02,
            "L2 relative error " + std::to_string(rel) + " (limit 0.02)"};
}

/// Passivity: a purely absorbing linear medium never amplifies.
inline CheckResult passivity(const RunConfig& cfg, int threads) {
    double worst = 0.0;
    for (double intensity : {0.0, 30.0, 105.0, 130.0}) {
        MediumModel m = cfg.medium;
        m.fields.coupling_intensity = intensity;
        const auto grid = spectrum_grid(m, cfg.spectrum);
        const auto h = transfer_function(m, grid, threads);
        for (const auto& v : h.values) worst = std::max(worst, std::abs(v));
    }
    return {"passivity", worst <= 1.0 + 1e-12,
            "max |H| = " + std::to_string(worst) + " (limit 1)"};
}

/// With the coupling on resonance the averaged response is symmetric:
/// Im chi even and Re chi odd in the two-photon detuning.
inline CheckResult symmetry(const RunConfig& cfg, int threads) {
    MediumModel m = cfg.medium;
    m.fields.coupling_detuning = 0.0;
    const AveragedSusceptibility chi(m);
    const double est = eit_width_estimate(m);
    const std::size_t n = 64;
    std::vector<double> err(n, 0.0);
    parallel_for(n, threads, [&](std::size_t i) {
        const double d = est * (0.1 + 6.0 * static_cast<double>(i) /
                                          static_cast<double>(n - 1));
        const complexd cp = chi(d), cm = chi(-d);
        err[i] = std::max(std::abs(cp.imag() - cm.imag()),
                          std::abs(cp.real() + cm.real()));
    });
    const double worst = *std::max_element(err.begin(), err.end());
    return {"symmetry_odd_phase", worst <= 1e-6,
            "max asymmetry " + std::to_string(worst) + " (limit 1e-6)"};
}

/// Pure-phase transfer function: the cross-correlation peak must move by
/// exactly the programmed delay, to within one sample.
inline CheckResult pure_delay(const RunConfig& /*cfg*/) {
    const double fs = 1e6;
    const double tau0 = 20e-6;  // 20 samples
    ModulationSpec ms;
    ms.waveform = Waveform::Sine;
    ms.frequency = 5e3;
    ms.duration = 16.0 / ms.frequency;
    const auto sig = synth_probe(ms, fs);
    const std::size_t n = sig.samples.size();
    ComplexSpectrum h;
    h.detunings = uniform_grid(0.5 * fs, n + 1);
    h.values.resize(n + 1);
    for (std::size_t i = 0; i < h.values.size(); ++i) {
        const double d = h.detunings[i];
        h.values[i] = std::exp(complexd(0.0, two_pi * d * tau0));
    }
    const auto out = propagate(sig, h);
    // circular cross-correlation via the spectral theorem
    std::vector<complexd> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = sig.samples[i];
        b[i] = out.samples[i];
    }
    fft(a, -1);
    fft(b, -1);
    for (std::size_t i = 0; i < n; ++i) a[i] = b[i] * std::conj(a[i]);
    fft(a, +1);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (a[i].real() > a[peak].real()) peak = i;
    const double shift = peak <= n / 2 ? static_cast<double>(peak)
                                       : static_cast<double>(peak) - static_cast<double>(n);
    const double target = tau0 * fs;
    return {"pure_delay_propagation", std::abs(shift - target) <= 1.0,
            "correlation shift " + std::to_string(shift) + " samples, expected " +
                std::to_string(target)};
}

/// Lock-in phase accuracy on clean sinusoids.
inline CheckResult lockin_phase(const RunConfig& /*cfg*/) {
    const double fs = 1e6, f = 5e3;
    double worst = 0.0;
    for (double phi : {0.0, 0.3, -1.2, pi / 3, 2.5}) {
        TimeSeries ts;
        ts.sample_rate = fs;
        ts.samples.resize(1 << 16);
        for (std::size_t i = 0; i < ts.samples.size(); ++i)
            ts.samples[i] = std::cos(two_pi * f * static_cast<double>(i) / fs + phi);
        const auto r = lockin_demodulate(ts, f, 0.0, 10.0 / f);
        worst = std::max(worst, std::abs(wrap_phase(r.phase - phi)));
    }
    return {"lockin_phase_accuracy", worst <= 1e-3,
            "max phase error " + std::to_string(worst) + " rad (limit 1e-3)"};
}

/// Fitting a model curve generated from known parameters must return them.
inline CheckResult fit_round_trip(const RunConfig& /*cfg*/) {
    const double base = 2.30, amp = -1.1, center = 1.5e3, fwhm = 62e3;
    std::vector<double> x, y;
    for (int i = -160; i <= 160; ++i) {
        const double d = static_cast<double>(i) * 2.0e3;
        const double u = (d - center) / (0.5 * fwhm);
        x.push_back(d);
        y.push_back(base + amp / (1.0 + u * u));
    }
    const auto f = fit_lorentzian(x, y);
    const double err = std::max({std::abs(f.baseline / base - 1.0),
                                 std::abs(f.amplitude / amp - 1.0),
                                 std::abs(f.fwhm / fwhm - 1.0),
                                 std::abs((f.center - center) / fwhm)});
    const auto lf = fit_linear({3e3, 4e3, 5e3, 6e3},
                               {two_pi * 3e3 * 39.6e-6, two_pi * 4e3 * 39.6e-6,
                                two_pi * 5e3 * 39.6e-6, two_pi * 6e3 * 39.6e-6});
    const double lerr = std::abs(lf.slope / two_pi / 39.6e-6 - 1.0);
    const double worst = std::max(err, lerr);
    return {"fit_round_trip", worst <= 1e-6,
            "max relative parameter error " + std::to_string(worst) + " (limit 1e-6)"};
}

/// The central cross-module check: the lock-in/linear-fit delay must agree
/// with the transfer-phase derivative delay at every scan intensity.
inline CheckResult end_to_end_delay(const RunConfig& cfg, int threads) {
    const auto& sc = cfg.intensity_scan;
    double worst = 0.0;
    double at_intensity = 0.0;
    for (int i = 0; i < sc.steps; ++i) {
        const double intensity =
            sc.min_intensity + (sc.max_intensity - sc.min_intensity) *
                                   static_cast<double>(i) /
                                   static_cast<double>(sc.steps - 1);
        RunConfig c = cfg;
        c.medium.fields.coupling_intensity = intensity;
        const double measured = run_delay_measurement(c, threads).delay;
        const double derived = reference_group_delay(c.medium);
        const double rel = std::abs(measured - derived) /
                           std::max(std::abs(derived), 1e-12);
        if (rel > worst) {
            worst = rel;
            at_intensity = intensity;
        }
    }
    return {"end_to_end_delay_consistency", worst <= 0.05,
            "worst relative disagreement " + std::to_string(worst) + " at " +
                std::to_string(at_intensity) + " W/cm2 (limit 0.05)"};
}

/// Byte-identical reruns and thread-count invariance of the scan output.
inline CheckResult determinism(const RunConfig& cfg, int threads) {
    RunConfig c = cfg;
    c.intensity_scan.steps = 3;
    const std::string a = render_csv(scan_table_to_csv(run_intensity_scan(c, 1), c));
    const std::string b = render_csv(scan_table_to_csv(run_intensity_scan(c, 1), c));
    const std::string d = render_csv(scan_table_to_csv(
        run_intensity_scan(c, std::max(threads, 4)), c));
    const bool ok = a == b && a == d;
    return {"determinism", ok,
            ok ? "rerun and thread-count outputs byte-identical"
               : "outputs differ between reruns or thread counts"};
}

}  // namespace checks

inline std::vector<CheckResult> run_all_checks(const RunConfig& cfg, int threads = 1) {
    std::vector<CheckResult> out;
    out.push_back(checks::kramers_kronig(cfg, threads));
    out.push_back(checks::passivity(cfg, threads));
    out.push_back(checks::symmetry(cfg, threads));
    out.push_back(checks::pure_delay(cfg));
    out.push_back(checks::lockin_phase(cfg));
    out.push_back(checks::fit_round_trip(cfg));
    out.push_back(checks::end_to_end_delay(cfg, threads));
    out.push_back(checks::determinism(cfg, threads));
    return out;
}

}  // namespace slowlight
