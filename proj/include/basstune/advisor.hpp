// include/basstune/advisor.hpp

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
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "basstune/audio.hpp"
#include "basstune/loudness.hpp"
#include "basstune/monitors.hpp"
#include "basstune/profile.hpp"

namespace basstune {

/// Loudspeaker response chained with the ear's sensitivity at a fixed
/// loudness level. The ear term is referenced to 1 kHz (the contour anchor)
/// so it acts as a relative sensitivity:
///   gain(f) = speaker_gain(f) - (elc_spl(f, phon) - elc_spl(1000, phon))
struct CombinedCurve {
    ResponseCurve speakers;
    double phon = default_phon;
    double low_hz = 0.0;   // intersection of speaker band and ELC validity
    double high_hz = 0.0;
    double elc_1k_db = 0.0;

    double gain_db(double f_hz) const {
        if (!(f_hz >= low_hz && f_hz <= high_hz))
            throw std::out_of_range("frequency " + std::to_string(f_hz) +
                                    " Hz outside the combined band [" +
                                    std::to_string(low_hz) + ", " + std::to_string(high_hz) +
                                    "] Hz");
        return response_at(speakers, f_hz) - (elc_spl(f_hz, PhonLevel(phon)) - elc_1k_db);
    }

    double delta_db(double f_from_hz, double f_to_hz) const {
        return gain_db(f_to_hz) - gain_db(f_from_hz);
    }
};

inline CombinedCurve combined_response(const ResponseCurve& curve, PhonLevel loudness) {
    if (curve.points.size() < 2) throw std::invalid_argument("combined_response: empty curve");
    CombinedCurve combined;
    combined.speakers = curve;
    combined.phon = loudness.value;
    combined.low_hz = std::max(curve.min_frequency(), elc_min_frequency_hz);
    combined.high_hz = std::min(curve.max_frequency(), elc_max_frequency_hz);
    if (!(combined.low_hz < combined.high_hz))
        throw std::invalid_argument("combined_response: speaker band and ISO 226 range do not overlap");
    combined.elc_1k_db = elc_spl(1000.0, loudness);
    return combined;
}

struct PartialDelta {
    int harmonic_index = 1;
    double f_from_hz = 0.0;
    double f_to_hz = 0.0;
    double delta_db = 0.0;  // gain change of this partial (20*log10 convention)
};

/// Outcome of transposing a harmonic complex through a combined curve.
/// total_power_delta_db is 10*log10 of the curve-weighted power ratio;
/// per-partial deltas are plain gain differences in dB.
struct TranspositionReport {
    double semitones = 0.0;
    std::vector<PartialDelta> per_partial;
    double total_power_delta_db = 0.0;
    double fundamental_delta_db = 0.0;
};

inline TranspositionReport transposition_loss(const SpectralProfile& profile, double semitones,
                                              const CombinedCurve& curve) {
    profile.validate();
    TranspositionReport report;
    report.semitones = semitones;

    double power_from = 0.0, power_to = 0.0;
    for (const Partial& p : profile.partials) {
        const double f_to = transpose_frequency(p.frequency_hz, semitones);
        double g_from = 0.0, g_to = 0.0;
        try {
            g_from = curve.gain_db(p.frequency_hz);
            g_to = curve.gain_db(f_to);
        } catch (const std::out_of_range&) {
            throw std::invalid_argument(
                "transposition_loss: partial " + std::to_string(p.harmonic_index) + " (" +
                std::to_string(p.frequency_hz) + " -> " + std::to_string(f_to) +
                " Hz) leaves the evaluable band [" + std::to_string(curve.low_hz) + ", " +
                std::to_string(curve.high_hz) + "] Hz");
        }
        report.per_partial.push_back(
            PartialDelta{p.harmonic_index, p.frequency_hz, f_to, g_to - g_from});
        const double a2 = p.amplitude * p.amplitude;
        power_from += a2 * db_to_power(g_from);
        power_to += a2 * db_to_power(g_to);
    }
    report.total_power_delta_db = power_db(power_to / power_from);

    const auto fundamental =
        std::min_element(report.per_partial.begin(), report.per_partial.end(),
                         [](const PartialDelta& a, const PartialDelta& b) {
                             return a.harmonic_index < b.harmonic_index;
                         });
    report.fundamental_delta_db = fundamental->delta_db;
    return report;
}

namespace detail {

/// Curve-weighted level of a profile shape realized at fundamental f0:
/// 10*log10( sum a_i^2 10^(gain(i*f0)/10) / sum a_i^2 ).
inline double profile_gain_db(const SpectralProfile& profile, double f0_hz,
                              const CombinedCurve& curve) {
    double num = 0.0, den = 0.0;
    for (const Partial& p : profile.partials) {
        const double f = p.harmonic_index * f0_hz;
        const double a2 = p.amplitude * p.amplitude;
        num += a2 * db_to_power(curve.gain_db(f));  // throws out_of_range when outside
        den += a2;
    }
    return power_db(num / den);
}

}  // namespace detail

struct NoteGain {
    Note note;
    double frequency_hz = 0.0;
    double gain_db = 0.0;
};

struct StabilityReport {
    std::vector<NoteGain> per_note;
    double spread_db = 0.0;  // max - min across notes
};

/// Level the playback chain gives each note of a bass line, with the spread
/// that a listener would hear as volumes "jumping out" between notes.
inline StabilityReport stability_report(const std::vector<Note>& notes,
                                        const SpectralProfile& profile_shape,
                                        const CombinedCurve& curve,
                                        double reference_hz = default_pitch_reference_hz) {
    if (notes.empty()) throw std::invalid_argument("stability_report: no notes");
    profile_shape.validate();

    StabilityReport report;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Note& n : notes) {
        const double f = frequency_of_note(n, reference_hz);
        double g = 0.0;
        try {
            g = detail::profile_gain_db(profile_shape, f, curve);
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("stability_report: note " + note_name(n) + " (" +
                                        std::to_string(f) +
                                        " Hz) realizes a partial outside the evaluable band");
        }
        report.per_note.push_back(NoteGain{n, f, g});
        lo = std::min(lo, g);
        hi = std::max(hi, g);
    }
    report.spread_db = hi - lo;
    return report;
}

struct KeyCandidate {
    int song_semitones = 0;    // how far the song key moves
    Note realized_root;        // the note the 808 then plays
    double pitch_hz = 0.0;     // its frequency
    bool feasible = true;      // all partials inside the evaluable band
    double total_gain_db = 0.0;
    double delta_vs_baseline_db = 0.0;
};

struct KeyRecommendation {
    std::vector<KeyCandidate> ranked;  // best first; infeasible entries last
    KeyCandidate baseline;             // the s = 0 entry, always evaluated
};

/// Searches integer song transpositions: for each candidate s the 808 plays
/// the root chroma of (key + s) at the octave closest to the sample's natural
/// fundamental, and candidates are ranked by the curve-weighted level of the
/// profile at that pitch. Ties (flat curve) break toward small |s|.
inline KeyRecommendation recommend_key(const Note& song_key_root, double sample_f0_hz,
                                       const CombinedCurve& curve, int range_low = -6,
                                       int range_high = 6,
                                       std::optional<SpectralProfile> profile = std::nullopt,
                                       double reference_hz = default_pitch_reference_hz) {
    if (sample_f0_hz <= 0.0)
        throw std::invalid_argument("recommend_key: sample f0 must be positive");
    if (range_low > range_high)
        throw std::invalid_argument("recommend_key: empty candidate range");
    const SpectralProfile shape = profile ? *profile : fundamental_profile(sample_f0_hz);

    // real-valued MIDI of the sample's natural register
    const double sample_midi = 69.0 + 12.0 * std::log2(sample_f0_hz / reference_hz);

    auto evaluate = [&](int s) {
        KeyCandidate cand;
        cand.song_semitones = s;
        const int chroma = (((song_key_root.midi_number + s) % 12) + 12) % 12;
        const int octave_shift =
            static_cast<int>(std::lround((sample_midi - chroma) / 12.0));
        cand.realized_root = Note{chroma + 12 * octave_shift, 0.0};
        cand.pitch_hz = frequency_of_note(cand.realized_root, reference_hz);
        try {
            cand.total_gain_db = detail::profile_gain_db(shape, cand.pitch_hz, curve);
        } catch (const std::out_of_range&) {
            cand.feasible = false;
            cand.total_gain_db = -std::numeric_limits<double>::infinity();
        }
        return cand;
    };

    KeyRecommendation rec;
    rec.baseline = evaluate(0);
    for (int s = range_low; s <= range_high; ++s) rec.ranked.push_back(evaluate(s));
    if (range_low > 0 || range_high < 0) rec.ranked.push_back(rec.baseline);

    std::sort(rec.ranked.begin(), rec.ranked.end(),
              [](const KeyCandidate& a, const KeyCandidate& b) {
                  if (a.feasible != b.feasible) return a.feasible;
                  if (a.total_gain_db != b.total_gain_db)
                      return a.total_gain_db > b.total_gain_db;
                  if (std::abs(a.song_semitones) != std::abs(b.song_semitones))
                      return std::abs(a.song_semitones) < std::abs(b.song_semitones);
                  return a.song_semitones < b.song_semitones;
              });
    for (KeyCandidate& c : rec.ranked)
        c.delta_vs_baseline_db =
            c.feasible && rec.baseline.feasible ? c.total_gain_db - rec.baseline.total_gain_db
                                                : std::numeric_limits<double>::quiet_NaN();
    return rec;
}

}  // namespace basstune
