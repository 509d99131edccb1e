#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "slowlight/config.hpp"
#include "slowlight/csv.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/fit.hpp"
#include "slowlight/lockin.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/propagate.hpp"
#include "slowlight/spectrum.hpp"
#include "slowlight/timeseries.hpp"

namespace slowlight {

/// Symmetric detuning grid sized from the transparency-window estimate:
/// half span 6x the estimate, spacing estimate/32, odd point count so
/// delta = 0 is on the grid. Both knobs are overridable.
inline std::vector<double> spectrum_grid(const MediumModel& model,
                                         const SpectrumConfig& sc) {
    const double est = eit_width_estimate(model);
    double half = sc.half_span > 0 ? sc.half_span : 6.0 * est;
    std::size_t points;
    if (sc.points > 0) {
        points = static_cast<std::size_t>(sc.points);
    } else {
        const double spacing = est / 32.0;
        points = 2 * static_cast<std::size_t>(std::ceil(half / spacing)) + 1;
    }
    if (points % 2 == 0) ++points;
    return uniform_grid(half, points);
}

inline MediumModel coupling_off_model(MediumModel m) {
    m.fields.coupling_intensity = 0.0;
    return m;
}

/// Absorption dip relative to the coupling-off baseline:
///   A_off(delta) - A_on(delta),  A = -2 ln|H|.
struct DipSpectrum {
    std::vector<double> detunings;
    std::vector<double> dip;             // baseline-subtracted absorption
    std::vector<double> absorption_on;   // -ln|H_on|^2
    std::vector<double> absorption_off;  // -ln|H_off|^2
    double transparency = 0.0;           // |H_on(0)|^2, intensity transmission
};

inline DipSpectrum dip_spectrum(const MediumModel& model, const SpectrumConfig& sc,
                                int threads = 1) {
    const auto grid = spectrum_grid(model, sc);
    const auto h_on = transfer_function(model, grid, threads);
    const auto h_off = transfer_function(coupling_off_model(model), grid, threads);
    DipSpectrum d;
    d.detunings = grid;
    d.dip.resize(grid.size());
    d.absorption_on.resize(grid.size());
    d.absorption_off.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        d.absorption_on[i] = -2.0 * std::log(std::abs(h_on.values[i]));
        d.absorption_off[i] = -2.0 * std::log(std::abs(h_off.values[i]));
        d.dip[i] = d.absorption_off[i] - d.absorption_on[i];
    }
    const std::size_t mid = grid.size() / 2;
    const double h0 = std::abs(h_on.values[mid]);
    d.transparency = h0 * h0;
    return d;
}

/// Transparency-peak parameters from the Lorentzian fit of the dip.
inline LorentzianFit fit_eit_peak(const DipSpectrum& d) {
    return fit_lorentzian(d.detunings, d.dip);
}

struct CalibrationResult {
    double rabi_calibration = 0.0;        // kappa in Omega = kappa sqrt(I)
    double background_optical_depth = 0.0;
    double achieved_fwhm = 0.0;           // Hz, at the reference intensity
    double achieved_transparency = 0.0;   // cross-check, never fitted
    double fwhm_residual = 0.0;           // relative to target
    double transparency_residual = 0.0;   // relative to target
    int evaluations = 0;
};

namespace detail {

/// Brent root finding on a bracketing interval; f evaluated at the bracket
/// endpoints is passed in to avoid recomputation.
template <typename F>
double brent_root(F&& f, double a, double b, double fa, double fb, double xtol,
                  double ftol, int max_iter, int& evals) {
    if (fa * fb > 0) throw numerical_error("brent_root: endpoints do not bracket a root");
    double c = a, fc = fa, d = b - a, e = d;
    for (int i = 0; i < max_iter; ++i) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::abs(fb) <= ftol || std::abs(m) <= tol) return b;
        if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
            d = m; e = m;
        } else {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double r = fb / fc, t = fa / fc;
                p = s * (2.0 * m * t * (t - r) - (b - a) * (r - 1.0));
                q = (t - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = m; e = m;
            }
        }
        a = b; fa = fb;
        b += std::abs(d) > tol ? d : (m > 0 ? tol : -tol);
        fb = f(b);
        ++evals;
        if ((fb > 0) == (fc > 0)) { c = a; fc = fa; e = b - a; d = e; }
    }
    throw numerical_error("brent_root: no convergence within iteration budget");
}

}  // namespace detail

/// alpha L = -ln(1 - absorbed fraction); zero absorption means zero depth.
inline double background_depth_from_absorption(double absorption) {
    if (!(absorption >= 0 && absorption < 1))
        throw config_error("background_depth_from_absorption: must be in [0, 1)");
    return -std::log1p(-absorption);
}

/// Fix the model's free parameters from the anchor observables: the
/// background depth in closed form, then the Rabi calibration by root
/// finding on the fitted dip width at the reference intensity. The peak
/// transparency is reported as a cross-check, never fitted.
inline CalibrationResult calibrate(const CalibrationTargets& targets, RunConfig cfg,
                                   int threads = 1) {
    targets.validate();
    cfg.validate();
    const double aL = background_depth_from_absorption(targets.background_absorption);
    if (aL == 0.0)
        throw numerical_error("calibrate: zero background depth leaves no dip to fit");
    cfg.medium.background_optical_depth = aL;
    cfg.medium.fields.coupling_intensity = targets.ref_intensity;

    int evals = 0;
    auto width_residual = [&](double kappa) {
        MediumModel m = cfg.medium;
        m.fields.rabi_calibration = kappa;
        ++evals;
        return fit_eit_peak(dip_spectrum(m, cfg.spectrum, threads)).fwhm -
               targets.eit_fwhm_at_ref;
    };

    // deterministic geometric bracket scan; the dip width grows
    // monotonically with kappa through power broadening
    double lo = 8e3, flo = width_residual(lo);
    double hi = 0.0, fhi = 0.0;
    bool bracketed = false;
    std::string scan = "kappa scan:";
    for (double k = lo * 2.0; k <= 1.1e6; k *= 2.0) {
        const double fk = width_residual(k);
        scan += " (" + std::to_string(k) + ", " + std::to_string(fk) + ")";
        if (flo * fk <= 0.0) {
            hi = k; fhi = fk;
            bracketed = true;
            break;
        }
        lo = k; flo = fk;
    }
    if (!bracketed)
        throw numerical_error("calibrate: no sign change in the kappa bracket scan; " + scan);

    const double kappa = detail::brent_root(width_residual, lo, hi, flo, fhi,
                                            1e-6 * hi, 1e-3 * targets.eit_fwhm_at_ref,
                                            100, evals);

    MediumModel m = cfg.medium;
    m.fields.rabi_calibration = kappa;
    const auto dip = dip_spectrum(m, cfg.spectrum, threads);
    const auto fit = fit_eit_peak(dip);

    CalibrationResult r;
    r.rabi_calibration = kappa;
    r.background_optical_depth = aL;
    r.achieved_fwhm = fit.fwhm;
    r.achieved_transparency = dip.transparency;
    r.fwhm_residual = fit.fwhm / targets.eit_fwhm_at_ref - 1.0;
    r.transparency_residual = dip.transparency / targets.peak_transparency - 1.0;
    r.evaluations = evals;
    if (std::abs(r.fwhm_residual) > 0.01)
        throw numerical_error("calibrate: fitted width misses the target by more than 1%");
    return r;
}

/// Group delay relative to the coupling-off reference, matching what the
/// modulation-phase measurement observes (the off response carries a small
/// anomalous-dispersion delay of its own).
inline double reference_group_delay(const MediumModel& model) {
    return group_delay_at_center(model) - group_delay_at_center(coupling_off_model(model));
}

struct DelayPoint {
    double frequency = 0.0;    // Hz
    double phase_on = 0.0;     // rad
    double phase_off = 0.0;    // rad
    double phase_shift = 0.0;  // rad, off minus on (positive for true delay)
};

struct DelayMeasurement {
    std::vector<DelayPoint> points;
    LinearFit fit;
    double delay = 0.0;  // s, slope / 2 pi
};

namespace detail {

inline TimeSeries trim_for_detection(const TimeSeries& padded, double duration,
                                     double skip) {
    const std::size_t n_valid =
        static_cast<std::size_t>(std::floor(duration * padded.sample_rate)) + 1;
    const std::size_t start =
        static_cast<std::size_t>(std::floor(skip * padded.sample_rate));
    if (start + 2 > n_valid)
        throw numerical_error("trim_for_detection: transient skip leaves no signal");
    TimeSeries out;
    out.sample_rate = padded.sample_rate;
    out.t0 = padded.t0 + static_cast<double>(start) / padded.sample_rate;
    out.samples.assign(padded.samples.begin() + static_cast<std::ptrdiff_t>(start),
                       padded.samples.begin() + static_cast<std::ptrdiff_t>(n_valid));
    return out;
}

}  // namespace detail

/// Modulation-frequency sweep: propagate the modulated probe with and
/// without the coupling field, demodulate both at the fundamental, and fit
/// the phase difference against frequency.
inline DelayMeasurement run_delay_measurement(const RunConfig& cfg, int threads = 1) {
    cfg.validate();
    const double fs = cfg.delay_scan.sample_rate;
    const double est = eit_width_estimate(cfg.medium);
    const std::size_t points =
        2 * static_cast<std::size_t>(std::ceil(0.5 * fs / (est / 32.0))) + 1;
    const auto grid = uniform_grid(0.5 * fs, points);
    const auto h_on = transfer_function(cfg.medium, grid, threads);
    const auto h_off = transfer_function(coupling_off_model(cfg.medium), grid, threads);

    DelayMeasurement out;
    std::vector<double> freqs = cfg.delay_scan.modulation_frequencies;
    std::sort(freqs.begin(), freqs.end());
    for (double f : freqs) {
        ModulationSpec ms = cfg.modulation;
        ms.frequency = f;
        ms.duration = cfg.delay_scan.periods / f;
        const auto probe = synth_probe(ms, fs);
        const auto on = detail::trim_for_detection(
            propagate(probe, h_on), ms.duration, cfg.delay_scan.transient_periods / f);
        const auto off = detail::trim_for_detection(
            propagate(probe, h_off), ms.duration, cfg.delay_scan.transient_periods / f);
        const double tc = cfg.detection.time_constant_periods / f;
        const auto r_on = lockin_demodulate(on, f, 0.0, tc);
        const auto r_off = lockin_demodulate(off, f, 0.0, tc);
        DelayPoint p;
        p.frequency = f;
        p.phase_on = r_on.phase;
        p.phase_off = r_off.phase;
        p.phase_shift = wrap_phase(r_off.phase - r_on.phase);
        out.points.push_back(p);
    }
    std::vector<double> xs, ys;
    for (const auto& p : out.points) {
        xs.push_back(p.frequency);
        ys.push_back(p.phase_shift);
    }
    out.fit = fit_linear(xs, ys);
    out.delay = out.fit.slope / two_pi;
    return out;
}

/// Delays read off the 1st and 3rd square-wave harmonics of a single run,
/// each relative to the coupling-off reference.
struct HarmonicDelays {
    double fundamental = 0.0;  // s
    double third = 0.0;        // s
};

inline HarmonicDelays harmonic_delays(const RunConfig& cfg, double f_mod,
                                      int threads = 1) {
    cfg.validate();
    const double fs = cfg.delay_scan.sample_rate;
    const double est = eit_width_estimate(cfg.medium);
    const std::size_t points =
        2 * static_cast<std::size_t>(std::ceil(0.5 * fs / (est / 32.0))) + 1;
    const auto grid = uniform_grid(0.5 * fs, points);
    const auto h_on = transfer_function(cfg.medium, grid, threads);
    const auto h_off = transfer_function(coupling_off_model(cfg.medium), grid, threads);

    ModulationSpec ms = cfg.modulation;
    ms.waveform = Waveform::Square;
    ms.frequency = f_mod;
    ms.duration = cfg.delay_scan.periods / f_mod;
    const auto probe = synth_probe(ms, fs);
    const auto on = detail::trim_for_detection(
        propagate(probe, h_on), ms.duration, cfg.delay_scan.transient_periods / f_mod);
    const auto off = detail::trim_for_detection(
        propagate(probe, h_off), ms.duration, cfg.delay_scan.transient_periods / f_mod);

    HarmonicDelays d;
    for (int harm : {1, 3}) {
        const double f = harm * f_mod;
        const double tc = cfg.detection.time_constant_periods / f;
        const auto r_on = lockin_demodulate(on, f, 0.0, tc);
        const auto r_off = lockin_demodulate(off, f, 0.0, tc);
        const double tau = wrap_phase(r_off.phase - r_on.phase) / (two_pi * f);
        (harm == 1 ? d.fundamental : d.third) = tau;
    }
    return d;
}

struct ScanRow {
    double intensity = 0.0;       // W/cm^2
    double eit_amplitude = 0.0;   // dip depth, dimensionless
    double eit_fwhm = 0.0;        // Hz
    double group_delay = 0.0;     // s, relative to coupling off
    double group_velocity = 0.0;  // m/s
};

struct ScanTable {
    std::vector<ScanRow> rows;
    std::string config_digest;
    bool width_plateau_ok = true;   // diagnostic flags, informational
    bool width_increase_ok = true;
};

/// Intensity sweep: per intensity, fit the transparency dip and read the
/// center group delay. Rows are ordered by intensity regardless of any
/// internal parallelism.
inline ScanTable run_intensity_scan(const RunConfig& cfg, int threads = 1) {
    cfg.validate();
    const auto& sc = cfg.intensity_scan;
    ScanTable table;
    table.config_digest = config_hash(cfg);
    for (int i = 0; i < sc.steps; ++i) {
        const double intensity =
            sc.min_intensity + (sc.max_intensity - sc.min_intensity) *
                                   static_cast<double>(i) /
                                   static_cast<double>(sc.steps - 1);
        MediumModel m = cfg.medium;
        m.fields.coupling_intensity = intensity;
        const auto dip = dip_spectrum(m, cfg.spectrum, threads);
        const auto fit = fit_eit_peak(dip);
        ScanRow row;
        row.intensity = intensity;
        row.eit_amplitude = fit.amplitude;
        row.eit_fwhm = fit.fwhm;
        row.group_delay = reference_group_delay(m);
        row.group_velocity = group_velocity_from_delay(cfg.medium.length, row.group_delay);
        table.rows.push_back(row);
    }

    // diagnostics: width plateau at low intensity, growth at the top
    std::vector<double> low;
    for (const auto& r : table.rows)
        if (r.intensity <= 50.0) low.push_back(r.eit_fwhm);
    if (!low.empty()) {
        const double mean = std::accumulate(low.begin(), low.end(), 0.0) /
                            static_cast<double>(low.size());
        for (double w : low)
            if (std::abs(w / mean - 1.0) > 0.15) table.width_plateau_ok = false;
        for (const auto& r : table.rows)
            if (r.intensity > 65.0 && !(r.eit_fwhm > mean)) table.width_increase_ok = false;
    }
    return table;
}

inline CsvTable scan_table_to_csv(const ScanTable& t, const RunConfig& cfg) {
    CsvTable csv;
    csv.add_meta("config_hash", t.config_digest);
    csv.add_meta("config", serialize_config(cfg).dump());
    csv.add_meta("note", "interaction length taken as the full crystal thickness; "
                         "the effective length may be slightly shorter");
    csv.columns = {"intensity_w_cm2", "eit_amplitude", "eit_fwhm_hz", "group_delay_s",
                   "group_velocity_m_s"};
    for (const auto& r : t.rows)
        csv.rows.push_back({r.intensity, r.eit_amplitude, r.eit_fwhm, r.group_delay,
                            r.group_velocity});
    return csv;
}

inline CsvTable spectrum_to_csv(const DipSpectrum& d, const RunConfig& cfg) {
    CsvTable csv;
    csv.add_meta("config_hash", config_hash(cfg));
    csv.add_meta("config", serialize_config(cfg).dump());
    csv.add_meta("transparency_at_center", format_number(d.transparency));
    csv.columns = {"detuning_hz", "absorption_on", "absorption_off", "dip"};
    for (std::size_t i = 0; i < d.detunings.size(); ++i)
        csv.rows.push_back({d.detunings[i], d.absorption_on[i], d.absorption_off[i],
                            d.dip[i]});
    return csv;
}

inline CsvTable delay_to_csv(const DelayMeasurement& m, const RunConfig& cfg) {
    CsvTable csv;
    csv.add_meta("config_hash", config_hash(cfg));
    csv.add_meta("config", serialize_config(cfg).dump());
    csv.add_meta("delay_s", format_number(m.delay));
    csv.add_meta("r_squared", format_number(m.fit.r_squared));
    csv.add_meta("intercept_rad", format_number(m.fit.intercept));
    csv.columns = {"f_mod_hz", "phase_on_rad", "phase_off_rad", "phase_shift_rad"};
    for (const auto& p : m.points)
        csv.rows.push_back({p.frequency, p.phase_on, p.phase_off, p.phase_shift});
    return csv;
}

inline CsvTable calibration_to_csv(const CalibrationResult& r, const RunConfig& cfg) {
    CsvTable csv;
    csv.add_meta("config_hash", config_hash(cfg));
    csv.add_meta("config", serialize_config(cfg).dump());
    csv.columns = {"rabi_calibration", "background_optical_depth", "achieved_fwhm_hz",
                   "achieved_transparency", "fwhm_residual", "transparency_residual"};
    csv.rows.push_back({r.rabi_calibration, r.background_optical_depth, r.achieved_fwhm,
                        r.achieved_transparency, r.fwhm_residual,
                        r.transparency_residual});
    return csv;
}

}  // namespace slowlight
