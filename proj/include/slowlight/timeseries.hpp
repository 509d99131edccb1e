#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "slowlight/errors.hpp"
#include "slowlight/fft.hpp"
#include "slowlight/medium.hpp"

namespace slowlight {

/// Uniformly sampled real envelope. Length is kept a power of two
/// (zero-padded) so spectral propagation needs no re-allocation.
struct TimeSeries {
    double sample_rate = 0.0;  // Hz
    double t0 = 0.0;           // s
    std::vector<double> samples;

    void validate() const {
        if (!(sample_rate > 0)) throw config_error("TimeSeries: sample_rate must be > 0");
        if (!is_power_of_two(samples.size()))
            throw config_error("TimeSeries: sample count must be a power of two");
        for (double s : samples)
            if (!std::isfinite(s)) throw numerical_error("TimeSeries: non-finite sample");
    }

    double duration() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

enum class Waveform { Square, Sine };

inline std::string to_string(Waveform w) {
    return w == Waveform::Square ? "square" : "sine";
}

struct ModulationSpec {
    Waveform waveform = Waveform::Square;
    double frequency = 6e3;  // Hz
    double depth = 1.0;      // fraction of full on/off swing
    double duration = 16.0 / 6e3;  // s

    void validate(const std::string& path = "modulation") const {
        if (!(frequency > 0)) throw config_error(path + ".frequency: must be > 0");
        if (!(depth > 0 && depth <= 1)) throw config_error(path + ".depth: must be in (0, 1]");
        if (!(duration * frequency >= 16.0))
            throw config_error(path + ".duration: need at least 16 modulation periods");
    }
};

/// Amplitude-modulated probe envelope:
///   1 - depth/2 + (depth/2) * waveform(2 pi f t),
/// sampled on [0, duration] and zero-padded to a power of two.
inline TimeSeries synth_probe(const ModulationSpec& spec, double sample_rate) {
    spec.validate();
    if (!(sample_rate >= 64.0 * spec.frequency))
        throw numerical_error("synth_probe: sample_rate must be >= 64x the modulation "
                              "frequency");
    const std::size_t n_signal =
        static_cast<std::size_t>(std::floor(spec.duration * sample_rate)) + 1;
    TimeSeries ts;
    ts.sample_rate = sample_rate;
    ts.t0 = 0.0;
    ts.samples.assign(next_power_of_two(n_signal), 0.0);
    const double base = 1.0 - 0.5 * spec.depth;
    for (std::size_t i = 0; i < n_signal; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        const double phase = two_pi * spec.frequency * t;
        double wave;
        if (spec.waveform == Waveform::Sine) {
            wave = std::sin(phase);
        } else {
            // 50% duty square, +1 on the first half-period; snap the phase
            // so samples landing exactly on an edge classify the same way
            // in every period instead of flipping on rounding noise
            const double cycles = spec.frequency * t;
            double frac = cycles - std::floor(cycles);
            frac = std::nearbyint(frac * 67108864.0) / 67108864.0;  // 2^26
            if (frac >= 1.0) frac -= 1.0;
            wave = frac < 0.5 ? 1.0 : -1.0;
        }
        ts.samples[i] = base + 0.5 * spec.depth * wave;
    }
    return ts;
}

}  // namespace slowlight
