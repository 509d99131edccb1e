#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/timeseries.hpp"

namespace slowlight {

using json = nlohmann::json;

/// Calibration anchor observables.
struct CalibrationTargets {
    double background_absorption = 0.90;  // fraction absorbed, coupling off
    double peak_transparency = 0.50;      // cross-check only, never fitted
    double eit_fwhm_at_ref = 62e3;        // Hz
    double ref_intensity = 105.0;         // W/cm^2

    void validate(const std::string& path = "calibration") const {
        if (!(background_absorption >= 0 && background_absorption < 1))
            throw config_error(path + ".background_absorption: must be in [0, 1)");
        if (!(peak_transparency > 0 && peak_transparency < 1))
            throw config_error(path + ".peak_transparency: must be in (0, 1)");
        if (!(eit_fwhm_at_ref > 0))
            throw config_error(path + ".eit_fwhm_hz: must be > 0");
        if (!(ref_intensity > 0))
            throw config_error(path + ".ref_intensity: must be > 0");
    }
};

struct DetectionConfig {
    double time_constant_periods = 10.0;  // lock-in tau_c = periods / f_ref

    void validate(const std::string& path = "detection") const {
        if (!(time_constant_periods > 0))
            throw config_error(path + ".time_constant_periods: must be > 0");
    }
};

struct DelayScanConfig {
    std::vector<double> modulation_frequencies = {3e3, 4e3, 5e3, 6e3};  // Hz
    double periods = 96.0;        // modulation periods per run
    double sample_rate = 2e6;     // Hz; the H grid spans +-fs/2
    double transient_periods = 4.0;  // discarded before detection

    void validate(const std::string& path = "delay_scan") const {
        if (modulation_frequencies.size() < 3)
            throw config_error(path + ".modulation_frequencies_hz: need >= 3 frequencies");
        for (double f : modulation_frequencies)
            if (!(f > 0)) throw config_error(path + ".modulation_frequencies_hz: must be > 0");
        if (!(periods >= 16))
            throw config_error(path + ".periods: need at least 16 modulation periods");
        if (!(sample_rate > 0)) throw config_error(path + ".sample_rate_hz: must be > 0");
        if (!(transient_periods >= 0))
            throw config_error(path + ".transient_periods: must be >= 0");
    }
};

struct IntensityScanConfig {
    double min_intensity = 10.0;   // W/cm^2
    double max_intensity = 130.0;  // W/cm^2
    int steps = 13;

    void validate(const std::string& path = "intensity_scan") const {
        if (!(min_intensity > 0))
            throw config_error(path + ".min_intensity: must be > 0");
        if (!(max_intensity > min_intensity))
            throw config_error(path + ".max_intensity: must be > min_intensity");
        if (steps < 2) throw config_error(path + ".steps: must be >= 2");
    }
};

struct SpectrumConfig {
    double half_span = 0.0;  // Hz; 0 means 6x the width estimate
    int points = 0;          // 0 means spacing of estimate/32, odd count

    void validate(const std::string& path = "spectrum") const {
        if (half_span < 0) throw config_error(path + ".half_span_hz: must be >= 0");
        if (points != 0 && points < 33)
            throw config_error(path + ".points: must be 0 (auto) or >= 33");
    }
};

struct RunConfig {
    MediumModel medium;
    ModulationSpec modulation;
    DetectionConfig detection;
    DelayScanConfig delay_scan;
    IntensityScanConfig intensity_scan;
    SpectrumConfig spectrum;
    CalibrationTargets calibration;

    void validate() const {
        medium.validate();
        modulation.validate();
        detection.validate();
        delay_scan.validate();
        intensity_scan.validate();
        spectrum.validate();
        calibration.validate();
    }
};

namespace detail {

inline void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw config_error(path + ": expected an object");
}

inline double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw config_error(path + ": expected a number");
    return j.get<double>();
}

inline int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw config_error(path + ": expected an integer");
    return j.get<int>();
}

inline LineShape get_shape(const json& j, const std::string& path) {
    if (!j.is_string()) throw config_error(path + ": expected \"lorentzian\" or \"gaussian\"");
    const std::string s = j.get<std::string>();
    if (s == "lorentzian") return LineShape::Lorentzian;
    if (s == "gaussian") return LineShape::Gaussian;
    throw config_error(path + ": expected \"lorentzian\" or \"gaussian\", got \"" + s + "\"");
}

inline Waveform get_waveform(const json& j, const std::string& path) {
    if (!j.is_string()) throw config_error(path + ": expected \"square\" or \"sine\"");
    const std::string s = j.get<std::string>();
    if (s == "square") return Waveform::Square;
    if (s == "sine") return Waveform::Sine;
    throw config_error(path + ": expected \"square\" or \"sine\", got \"" + s + "\"");
}

/// Dispatch every key of an object through a handler that returns false for
/// unknown keys; unknown keys are hard errors so typos never pass silently.
template <typename Handler>
void walk_object(const json& j, const std::string& path, Handler&& handle) {
    require_object(j, path);
    for (const auto& [key, value] : j.items()) {
        if (!handle(key, value))
            throw config_error(path + "." + key + ": unknown key");
    }
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: JSON syntax error: ") + e.what());
    }
    RunConfig cfg;
    detail::walk_object(root, "config", [&](const std::string& key, const json& v) {
        if (key == "atomic") {
            detail::walk_object(v, "atomic", [&](const std::string& k, const json& x) {
                auto& a = cfg.medium.atomic;
                if (k == "optical_dephasing_hz")
                    a.optical_dephasing_rate = two_pi * detail::get_number(x, "atomic." + k);
                else if (k == "spin_dephasing_hz")
                    a.spin_dephasing_rate = two_pi * detail::get_number(x, "atomic." + k);
                else if (k == "raman_splitting_hz")
                    a.raman_splitting = detail::get_number(x, "atomic." + k);
                else if (k == "wavelength_nm")
                    a.optical_wavelength = 1e-9 * detail::get_number(x, "atomic." + k);
                else return false;
                return true;
            });
        } else if (key == "broadening") {
            detail::walk_object(v, "broadening", [&](const std::string& k, const json& x) {
                auto& b = cfg.medium.broadening;
                if (k == "optical_inhom_fwhm_hz")
                    b.optical_inhom_fwhm = detail::get_number(x, "broadening." + k);
                else if (k == "optical_inhom_shape")
                    b.optical_inhom_shape = detail::get_shape(x, "broadening." + k);
                else if (k == "spin_inhom_fwhm_hz")
                    b.spin_inhom_fwhm = detail::get_number(x, "broadening." + k);
                else if (k == "spin_inhom_shape")
                    b.spin_inhom_shape = detail::get_shape(x, "broadening." + k);
                else if (k == "quadrature_points_optical")
                    b.quadrature_points_optical = detail::get_int(x, "broadening." + k);
                else if (k == "quadrature_points_spin")
                    b.quadrature_points_spin = detail::get_int(x, "broadening." + k);
                else return false;
                return true;
            });
        } else if (key == "fields") {
            detail::walk_object(v, "fields", [&](const std::string& k, const json& x) {
                auto& f = cfg.medium.fields;
                if (k == "coupling_intensity")
                    f.coupling_intensity = detail::get_number(x, "fields." + k);
                else if (k == "probe_intensity")
                    f.probe_intensity = detail::get_number(x, "fields." + k);
                else if (k == "repump_intensity")
                    f.repump_intensity = detail::get_number(x, "fields." + k);
                else if (k == "coupling_detuning_hz")
                    f.coupling_detuning = detail::get_number(x, "fields." + k);
                else if (k == "rabi_calibration")
                    f.rabi_calibration = detail::get_number(x, "fields." + k);
                else return false;
                return true;
            });
        } else if (key == "medium") {
            detail::walk_object(v, "medium", [&](const std::string& k, const json& x) {
                if (k == "length_mm") {
                    const double mm = detail::get_number(x, "medium." + k);
                    if (!(mm > 0)) throw config_error("medium.length_mm: must be > 0");
                    cfg.medium.length = 1e-3 * mm;
                } else if (k == "background_optical_depth") {
                    cfg.medium.background_optical_depth = detail::get_number(x, "medium." + k);
                } else return false;
                return true;
            });
        } else if (key == "modulation") {
            bool duration_given = false;
            detail::walk_object(v, "modulation", [&](const std::string& k, const json& x) {
                auto& m = cfg.modulation;
                if (k == "waveform") m.waveform = detail::get_waveform(x, "modulation." + k);
                else if (k == "frequency_hz") m.frequency = detail::get_number(x, "modulation." + k);
                else if (k == "depth") m.depth = detail::get_number(x, "modulation." + k);
                else if (k == "duration_s") {
                    m.duration = detail::get_number(x, "modulation." + k);
                    duration_given = true;
                } else return false;
                return true;
            });
            // duration defaults to 16 periods of whatever frequency was chosen
            if (!duration_given) cfg.modulation.duration = 16.0 / cfg.modulation.frequency;
        } else if (key == "detection") {
            detail::walk_object(v, "detection", [&](const std::string& k, const json& x) {
                if (k == "time_constant_periods")
                    cfg.detection.time_constant_periods = detail::get_number(x, "detection." + k);
                else return false;
                return true;
            });
        } else if (key == "delay_scan") {
            detail::walk_object(v, "delay_scan", [&](const std::string& k, const json& x) {
                auto& d = cfg.delay_scan;
                if (k == "modulation_frequencies_hz") {
                    if (!x.is_array())
                        throw config_error("delay_scan." + k + ": expected an array");
                    d.modulation_frequencies.clear();
                    for (const auto& f : x)
                        d.modulation_frequencies.push_back(
                            detail::get_number(f, "delay_scan." + k + "[]"));
                } else if (k == "periods") d.periods = detail::get_number(x, "delay_scan." + k);
                else if (k == "sample_rate_hz")
                    d.sample_rate = detail::get_number(x, "delay_scan." + k);
                else if (k == "transient_periods")
                    d.transient_periods = detail::get_number(x, "delay_scan." + k);
                else return false;
                return true;
            });
        } else if (key == "intensity_scan") {
            detail::walk_object(v, "intensity_scan", [&](const std::string& k, const json& x) {
                auto& s = cfg.intensity_scan;
                if (k == "min_intensity") s.min_intensity = detail::get_number(x, "intensity_scan." + k);
                else if (k == "max_intensity") s.max_intensity = detail::get_number(x, "intensity_scan." + k);
                else if (k == "steps") s.steps = detail::get_int(x, "intensity_scan." + k);
                else return false;
                return true;
            });
        } else if (key == "spectrum") {
            detail::walk_object(v, "spectrum", [&](const std::string& k, const json& x) {
                if (k == "half_span_hz") cfg.spectrum.half_span = detail::get_number(x, "spectrum." + k);
                else if (k == "points") cfg.spectrum.points = detail::get_int(x, "spectrum." + k);
                else return false;
                return true;
            });
        } else if (key == "calibration") {
            detail::walk_object(v, "calibration", [&](const std::string& k, const json& x) {
                auto& c = cfg.calibration;
                if (k == "background_absorption") c.background_absorption = detail::get_number(x, "calibration." + k);
                else if (k == "peak_transparency") c.peak_transparency = detail::get_number(x, "calibration." + k);
                else if (k == "eit_fwhm_hz") c.eit_fwhm_at_ref = detail::get_number(x, "calibration." + k);
                else if (k == "ref_intensity") c.ref_intensity = detail::get_number(x, "calibration." + k);
                else return false;
                return true;
            });
        } else {
            return false;
        }
        return true;
    });
    cfg.validate();
    return cfg;
}

inline json serialize_config(const RunConfig& cfg) {
    json j;
    j["atomic"] = {
        {"optical_dephasing_hz", cfg.medium.atomic.optical_dephasing_rate / two_pi},
        {"spin_dephasing_hz", cfg.medium.atomic.spin_dephasing_rate / two_pi},
        {"raman_splitting_hz", cfg.medium.atomic.raman_splitting},
        {"wavelength_nm", cfg.medium.atomic.optical_wavelength * 1e9},
    };
    j["broadening"] = {
        {"optical_inhom_fwhm_hz", cfg.medium.broadening.optical_inhom_fwhm},
        {"optical_inhom_shape", to_string(cfg.medium.broadening.optical_inhom_shape)},
        {"spin_inhom_fwhm_hz", cfg.medium.broadening.spin_inhom_fwhm},
        {"spin_inhom_shape", to_string(cfg.medium.broadening.spin_inhom_shape)},
        {"quadrature_points_optical", cfg.medium.broadening.quadrature_points_optical},
        {"quadrature_points_spin", cfg.medium.broadening.quadrature_points_spin},
    };
    j["fields"] = {
        {"coupling_intensity", cfg.medium.fields.coupling_intensity},
        {"probe_intensity", cfg.medium.fields.probe_intensity},
        {"repump_intensity", cfg.medium.fields.repump_intensity},
        {"coupling_detuning_hz", cfg.medium.fields.coupling_detuning},
        {"rabi_calibration", cfg.medium.fields.rabi_calibration},
    };
    j["medium"] = {
        {"length_mm", cfg.medium.length * 1e3},
        {"background_optical_depth", cfg.medium.background_optical_depth},
    };
    j["modulation"] = {
        {"waveform", to_string(cfg.modulation.waveform)},
        {"frequency_hz", cfg.modulation.frequency},
        {"depth", cfg.modulation.depth},
        {"duration_s", cfg.modulation.duration},
    };
    j["detection"] = {{"time_constant_periods", cfg.detection.time_constant_periods}};
    j["delay_scan"] = {
        {"modulation_frequencies_hz", cfg.delay_scan.modulation_frequencies},
        {"periods", cfg.delay_scan.periods},
        {"sample_rate_hz", cfg.delay_scan.sample_rate},
        {"transient_periods", cfg.delay_scan.transient_periods},
    };
    j["intensity_scan"] = {
        {"min_intensity", cfg.intensity_scan.min_intensity},
        {"max_intensity", cfg.intensity_scan.max_intensity},
        {"steps", cfg.intensity_scan.steps},
    };
    j["spectrum"] = {
        {"half_span_hz", cfg.spectrum.half_span},
        {"points", cfg.spectrum.points},
    };
    j["calibration"] = {
        {"background_absorption", cfg.calibration.background_absorption},
        {"peak_transparency", cfg.calibration.peak_transparency},
        {"eit_fwhm_hz", cfg.calibration.eit_fwhm_at_ref},
        {"ref_intensity", cfg.calibration.ref_intensity},
    };
    return j;
}

/// FNV-1a hash of the canonical serialized config; stamped into CSV
/// metadata so outputs are traceable to their inputs.
inline std::string config_hash(const RunConfig& cfg) {
    const std::string s = serialize_config(cfg).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace slowlight
