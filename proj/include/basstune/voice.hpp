// include/basstune/voice.hpp

// Copyright 2026 basstune contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "basstune/audio.hpp"
#include "basstune/profile.hpp"

namespace basstune {

// Behavioral model of an 808-style bass-drum voice: a decaying sinusoid whose
// pitch starts sweep_semitones above the resting fundamental and relaxes onto
// it exponentially, with optional waveshaping that feeds the overtones. It is
// not a circuit emulation; it exists to give analysis code a signal whose
// ground truth is known exactly.
struct VoiceParams {
    double f0_end_hz = 49.48;      // steady-state fundamental
    double sweep_semitones = 1.0;  // initial pitch above f0_end
    double sweep_duration_s = 0.4;
    double amp_decay_time_s = 2.0;  // time to -60 dB
    double drive = 0.0;             // 0 = pure sine
    double duration_s = 3.0;
    int sample_rate = 44100;

    void validate() const {
        if (f0_end_hz <= 0.0)
            throw std::invalid_argument("voice: f0_end must be positive");
        if (sweep_semitones < 0.0)
            throw std::invalid_argument("voice: sweep_semitones must be >= 0");
        if (sweep_duration_s < 0.0)
            throw std::invalid_argument("voice: sweep_duration must be >= 0");
        if (duration_s <= sweep_duration_s)
            throw std::invalid_argument("voice: duration must exceed sweep_duration");
        if (amp_decay_time_s <= 0.0)
            throw std::invalid_argument("voice: amp_decay_time must be positive");
        if (drive < 0.0) throw std::invalid_argument("voice: drive must be >= 0");
        if (sample_rate < min_sample_rate)
            throw std::invalid_argument("voice: sample rate below 8000 Hz");
        const double f_start = f0_end_hz * semitone_ratio(sweep_semitones);
        if (f_start >= sample_rate / 2.0)
            throw std::invalid_argument("voice: swept fundamental reaches Nyquist");
    }

    /// Pitch-sweep time constant; the sweep settles to within ~5% of f0_end
    /// at t = sweep_duration.
    double sweep_tau() const { return sweep_duration_s / 3.0; }

    /// Amplitude e-folding time for the -60 dB spec.
    double amp_tau() const { return amp_decay_time_s / std::log(1e3); }

    /// Programmed instantaneous frequency at time t.
    double frequency_at(double t) const {
        if (sweep_semitones == 0.0 || sweep_duration_s == 0.0) return f0_end_hz;
        const double offset = sweep_semitones * std::exp(-t / sweep_tau());
        return f0_end_hz * semitone_ratio(offset);
    }
};

namespace detail {

// Smooth saturator, biased so clipping is asymmetric and produces even as
// well as odd overtones; their level grows monotonically with drive.
// Memoryless, so the harmonic fraction falls as the envelope decays and the
// overtones fade before the fundamental, as in the measured samples.
inline double drive_shape(double x, double drive) {
    const double bias = 0.2;
    return std::tanh(drive * (x + bias)) - std::tanh(drive * bias);
}

}  // namespace detail

inline AudioClip synth_voice(const VoiceParams& p) {
    p.validate();
    const std::size_t n =
        static_cast<std::size_t>(std::llround(p.duration_s * p.sample_rate));
    if (n == 0) throw std::invalid_argument("voice: zero-length output");

    AudioClip clip;
    clip.sample_rate = p.sample_rate;
    clip.samples.resize(n);

    const double dt = 1.0 / p.sample_rate;
    const double amp_tau = p.amp_tau();
    double phase = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = i * dt;
        phase += two_pi * p.frequency_at(t) * dt;
        const double x = std::exp(-t / amp_tau) * std::sin(phase);
        clip.samples[i] = (p.drive > 0.0) ? detail::drive_shape(x, p.drive) : x;
    }

    if (p.drive > 0.0) {
        // the even-order term leaves a small DC pedestal; remove it
        double mean = 0.0;
        for (double s : clip.samples) mean += s;
        mean /= static_cast<double>(n);
        for (double& s : clip.samples) s -= mean;
    }

    const double peak = clip.peak();
    if (peak > 0.0) {
        const double g = 0.9 / peak;
        for (double& s : clip.samples) s *= g;
    }
    return clip;
}

/// Relative partial amplitudes of the bundled "driven" 808 bass-drum profile
/// (harmonics 1..5 of 49.48 Hz). The table ships in data/driven_profile_v1.txt;
/// see that file for how the values were fitted.
inline constexpr double driven_profile_f0_hz = 49.48;
inline constexpr double driven_profile_amplitudes[5] = {1.0, 0.504, 0.254, 0.128, 0.065};

inline SpectralProfile reference_driven_profile() {
    return harmonic_profile(
        driven_profile_f0_hz,
        std::vector<double>(std::begin(driven_profile_amplitudes),
                            std::end(driven_profile_amplitudes)));
}

}  // namespace basstune
