// include/basstune/audio.hpp

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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "basstune/common.hpp"

namespace basstune {

inline constexpr int min_sample_rate = 8000;
inline constexpr double default_pitch_reference_hz = 440.0;  // A4

/// Mono audio buffer, full scale +-1.0.
struct AudioClip {
    std::vector<double> samples;
    int sample_rate = 0;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }

    double peak() const {
        double p = 0.0;
        for (double s : samples) p = std::max(p, std::abs(s));
        return p;
    }

    double rms() const {
        if (samples.empty()) return 0.0;
        double acc = 0.0;
        for (double s : samples) acc += s * s;
        return std::sqrt(acc / static_cast<double>(samples.size()));
    }

    void validate() const {
        if (sample_rate < min_sample_rate)
            throw std::invalid_argument("audio clip: sample rate " +
                                        std::to_string(sample_rate) +
                                        " below minimum of 8000 Hz");
        if (samples.empty())
            throw std::invalid_argument("audio clip: no samples");
        for (double s : samples)
            if (!std::isfinite(s))
                throw std::invalid_argument("audio clip: non-finite sample value");
    }
};

/// Equal-tempered pitch: MIDI note number (A4 = 69) plus a cents offset
/// in [-50, 50).
struct Note {
    int midi_number = 69;
    double cents_offset = 0.0;
};

inline double frequency_of_note(const Note& n,
                                double reference_hz = default_pitch_reference_hz) {
    if (reference_hz <= 0.0)
        throw std::invalid_argument("pitch reference must be positive");
    const double semis = (n.midi_number - 69) + n.cents_offset / 100.0;
    return reference_hz * std::pow(2.0, semis / 12.0);
}

inline Note note_of_frequency(double f_hz,
                              double reference_hz = default_pitch_reference_hz) {
    if (f_hz <= 0.0)
        throw std::invalid_argument("note_of_frequency: frequency must be positive, got " +
                                    std::to_string(f_hz));
    if (reference_hz <= 0.0)
        throw std::invalid_argument("pitch reference must be positive");
    const double p = 69.0 + 12.0 * std::log2(f_hz / reference_hz);
    int midi = static_cast<int>(std::lround(p));
    double cents = (p - midi) * 100.0;
    if (cents >= 50.0) {  // lround ties; keep cents in [-50, 50)
        midi += 1;
        cents -= 100.0;
    } else if (cents < -50.0) {
        midi -= 1;
        cents += 100.0;
    }
    return Note{midi, cents};
}

inline double transpose_frequency(double f_hz, double semitones) {
    if (f_hz <= 0.0)
        throw std::invalid_argument("transpose_frequency: frequency must be positive, got " +
                                    std::to_string(f_hz));
    return f_hz * semitone_ratio(semitones);
}

/// "C4", "F#1", "Bb0"; octave follows the MIDI convention (C4 = 60).
inline std::string note_name(const Note& n) {
    static const char* names[] = {"C",  "C#", "D",  "D#", "E",  "F",
                                  "F#", "G",  "G#", "A",  "A#", "B"};
    int m = n.midi_number;
    int pc = ((m % 12) + 12) % 12;
    int octave = (m - pc) / 12 - 1;
    return std::string(names[pc]) + std::to_string(octave);
}

/// Parses "D", "D#", "Eb" (pitch class, octave defaults to 1 -- the 808
/// register) or "D1", "F#2", "Bb0".
inline Note parse_note_name(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty note name");
    static const int letter_pc[] = {9, 11, 0, 2, 4, 5, 7};  // A..G
    const char letter = static_cast<char>(std::toupper(text[0]));
    if (letter < 'A' || letter > 'G')
        throw std::invalid_argument("bad note name '" + text + "'");
    int pc = letter_pc[letter - 'A'];
    std::size_t i = 1;
    if (i < text.size() && (text[i] == '#' || text[i] == 's')) {
        pc = (pc + 1) % 12;
        ++i;
    } else if (i < text.size() && (text[i] == 'b' || text[i] == 'B')) {
        pc = (pc + 11) % 12;
        ++i;
    }
    int octave = 1;
    if (i < text.size()) {
        char* end = nullptr;
        const long v = std::strtol(text.c_str() + i, &end, 10);
        if (end == text.c_str() + i || *end != '\0')
            throw std::invalid_argument("bad note name '" + text + "'");
        octave = static_cast<int>(v);
    }
    return Note{(octave + 1) * 12 + pc, 0.0};
}

}  // namespace basstune
