// tests/test_analysis.cpp

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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "basstune/analysis.hpp"
#include "basstune/voice.hpp"

using namespace basstune;
using Catch::Approx;

namespace {

// 16 kHz keeps the suite quick; the band and window behave exactly as at 44.1k.
VoiceParams voice(double f0, double sweep, double decay = 2.0, double duration = 2.5,
                  double drive = 0.0) {
    VoiceParams p;
    p.f0_end_hz = f0;
    p.sweep_semitones = sweep;
    p.sweep_duration_s = 0.4;
    p.amp_decay_time_s = decay;
    p.drive = drive;
    p.duration_s = duration;
    p.sample_rate = 16000;
    return p;
}

AudioClip sine_clip(double f_hz, double seconds, int rate) {
    AudioClip clip;
    clip.sample_rate = rate;
    const auto n = static_cast<std::size_t>(seconds * rate);
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        clip.samples[i] = 0.8 * std::sin(two_pi * f_hz * static_cast<double>(i) / rate);
    return clip;
}

}  // namespace

TEST_CASE("steady f0 of a synthesized voice lands on the programmed value") {
    const AudioClip clip = synth_voice(voice(49.48, 1.0));
    const F0Track track = estimate_f0_track(clip);
    CHECK(track.points.back().f0_hz == Approx(49.48).margin(0.2));
    CHECK(steady_f0(track) == Approx(49.48).margin(0.2));
}

TEST_CASE("a pure 1 kHz tone has no fundamental in the sub-bass band") {
    const AudioClip clip = sine_clip(1000.0, 1.0, 44100);
    CHECK_THROWS_WITH(estimate_f0_track(clip),
                      Catch::Matchers::ContainsSubstring("no fundamental detected"));
}

TEST_CASE("the pitch starts high and settles down") {
    const F0Track track = estimate_f0_track(synth_voice(voice(49.48, 1.0)));
    REQUIRE(track.points.size() >= 4);
    CHECK(track.points.front().f0_hz > track.points.back().f0_hz);
}

TEST_CASE("track times are strictly increasing and energies positive") {
    const F0Track track = estimate_f0_track(synth_voice(voice(55.0, 0.5)));
    for (std::size_t i = 1; i < track.points.size(); ++i)
        CHECK(track.points[i].time_s > track.points[i - 1].time_s);
    for (const F0Point& p : track.points) CHECK(p.energy > 0.0);
}

TEST_CASE("unvoiced windows are gated out by the energy floor") {
    // 0.8 s of voice followed by 1.7 s of near-silence
    AudioClip clip = synth_voice(voice(50.0, 0.0, 0.25, 2.5));
    const F0Track track = estimate_f0_track(clip);
    CHECK(track.points.back().time_s < 1.2);
}

TEST_CASE("sweep_range recovers the programmed sweep") {
    CHECK(sweep_range(estimate_f0_track(synth_voice(voice(49.48, 1.0)))) ==
          Approx(1.0).margin(0.15));
    CHECK(sweep_range(estimate_f0_track(synth_voice(voice(49.48, 0.0)))) ==
          Approx(0.0).margin(0.05));
    CHECK(sweep_range(estimate_f0_track(sine_clip(50.0, 2.0, 16000))) ==
          Approx(0.0).margin(0.05));
}

TEST_CASE("median sweep of a 37-voice long-sample library sits near a half-tone") {
    detail::SplitMix64 rng(0x37);
    std::vector<double> ranges;
    for (int i = 0; i < 37; ++i) {
        const double sweep = 0.5 + rng.uniform(-0.12, 0.12);
        const double f0 = rng.uniform(45.0, 55.0);
        ranges.push_back(sweep_range(estimate_f0_track(synth_voice(voice(f0, sweep)))));
    }
    std::sort(ranges.begin(), ranges.end());
    CHECK(ranges[18] == Approx(0.5).margin(0.1));
}

TEST_CASE("sweep_range needs two points") {
    F0Track stub;
    stub.points.push_back(F0Point{0.1, 50.0, 1.0});
    CHECK_THROWS_AS(sweep_range(stub), std::invalid_argument);
}

TEST_CASE("partial tracking: pure sine yields exactly one non-empty track") {
    const AudioClip clip = sine_clip(50.0, 1.5, 44100);
    const Spectrogram spec = stft(clip);
    const auto tracks = track_partials(spec, 50.0, 5);
    REQUIRE(tracks.size() == 5);
    CHECK(!tracks[0].points.empty());
    for (std::size_t k = 1; k < 5; ++k) {
        CHECK(tracks[k].points.empty());
        CHECK(tracks[k].stop_time_s == 0.0);
    }
}

TEST_CASE("drive-0 voice: harmonics stop before the fundamental") {
    const AudioClip clip = synth_voice(voice(49.48, 0.5, 2.0, 3.0, 0.0));
    const Spectrogram spec = stft(clip, 4096, 1024);  // 16 kHz clip
    const auto tracks = track_partials(spec, 49.48, 5);
    for (std::size_t k = 1; k < 5; ++k)
        CHECK(tracks[k].stop_time_s < tracks[0].stop_time_s);
}

TEST_CASE("drive extends harmonic lifetimes") {
    // at thresholds this deep the clean voice still has no harmonics, the
    // driven one holds them for a while
    const Spectrogram clean =
        stft(synth_voice(voice(49.48, 0.5, 2.0, 3.0, 0.0)), 4096, 1024);
    const Spectrogram driven =
        stft(synth_voice(voice(49.48, 0.5, 2.0, 3.0, 2.0)), 4096, 1024);
    const auto t_clean = track_partials(clean, 49.48, 4, 0.7, 0.002);
    const auto t_driven = track_partials(driven, 49.48, 4, 0.7, 0.002);
    for (std::size_t k = 1; k < 4; ++k)
        CHECK(t_driven[k].stop_time_s > t_clean[k].stop_time_s);
}

TEST_CASE("lowering the stop threshold never shortens a track") {
    const Spectrogram spec =
        stft(synth_voice(voice(49.48, 0.5, 2.0, 3.0, 1.5)), 4096, 1024);
    const auto strict = track_partials(spec, 49.48, 5, 0.7, 0.05);
    const auto loose = track_partials(spec, 49.48, 5, 0.5, 0.002);
    for (std::size_t k = 0; k < 5; ++k)
        CHECK(loose[k].stop_time_s >= strict[k].stop_time_s);
}

TEST_CASE("partial frequencies stay harmonic") {
    const Spectrogram spec =
        stft(synth_voice(voice(50.0, 0.3, 2.0, 3.0, 2.0)), 4096, 1024);
    const auto tracks = track_partials(spec, 50.0, 3, 0.7, 0.002);
    const double half_bin = 0.5 * 16000.0 / 4096.0;
    for (const PartialTrack& t : tracks)
        for (const PartialPoint& p : t.points) {
            // within a quartertone of k*f0 by construction, and near a bin
            CHECK(p.frequency_hz ==
                  Approx(t.harmonic_index * 50.0).epsilon(0.03).margin(half_bin));
        }
}

TEST_CASE("track_partials rejects harmonics beyond Nyquist") {
    const Spectrogram spec = stft(sine_clip(50.0, 1.0, 16000), 4096, 1024);
    CHECK_THROWS_AS(track_partials(spec, 3000.0, 4), std::invalid_argument);
}

TEST_CASE("f0 distribution of a uniform population peaks at its frequency") {
    std::vector<AudioClip> clips;
    for (int i = 0; i < 10; ++i) clips.push_back(synth_voice(voice(50.0, 0.0, 1.0, 1.5)));
    const WeightedHistogram hist = f0_distribution(clips);
    CHECK(hist.mode_frequency_hz == Approx(50.0).margin(0.25));
    double total = 0.0;
    for (double m : hist.masses) total += m;
    CHECK(total == Approx(1.0).margin(1e-9));
}

TEST_CASE("long and short voices form primary and secondary modes") {
    // the energy weighting favors the long population; the short one needs
    // numbers before its early windows clear the 10%-of-mode bar
    std::vector<AudioClip> clips;
    for (int i = 0; i < 8; ++i) clips.push_back(synth_voice(voice(49.48, 0.0, 1.5, 2.2)));
    for (int i = 0; i < 20; ++i) clips.push_back(synth_voice(voice(51.05, 0.0, 0.6, 1.0)));
    const WeightedHistogram hist = f0_distribution(clips);
    CHECK(hist.mode_frequency_hz == Approx(49.48).margin(0.25));
    REQUIRE(!hist.secondary_modes_hz.empty());
    const double nearest = *std::min_element(
        hist.secondary_modes_hz.begin(), hist.secondary_modes_hz.end(),
        [](double a, double b) { return std::abs(a - 51.05) < std::abs(b - 51.05); });
    CHECK(nearest == Approx(51.05).margin(0.25));
}

TEST_CASE("histogram is invariant under uniform amplitude scaling") {
    std::vector<AudioClip> clips;
    for (int i = 0; i < 4; ++i) clips.push_back(synth_voice(voice(49.0 + i, 0.3)));
    const WeightedHistogram a = f0_distribution(clips);
    for (AudioClip& c : clips)
        for (double& s : c.samples) s *= 0.25;
    const WeightedHistogram b = f0_distribution(clips);
    CHECK(a.mode_frequency_hz == b.mode_frequency_hz);
    REQUIRE(a.masses.size() == b.masses.size());
    for (std::size_t i = 0; i < a.masses.size(); ++i)
        CHECK(a.masses[i] == Approx(b.masses[i]).margin(1e-6));
}

TEST_CASE("silent clips cannot form a distribution") {
    std::vector<AudioClip> clips{AudioClip{std::vector<double>(16000, 0.0), 16000}};
    CHECK_THROWS_WITH(f0_distribution(clips),
                      Catch::Matchers::ContainsSubstring("no fundamental detected"));
}

TEST_CASE("one failed clip does not poison the pool") {
    std::vector<AudioClip> clips;
    clips.push_back(synth_voice(voice(50.0, 0.0)));
    clips.push_back(AudioClip{std::vector<double>(16000, 0.0), 16000});
    const WeightedHistogram hist = f0_distribution(clips);
    CHECK(hist.mode_frequency_hz == Approx(50.0).margin(0.25));
}

TEST_CASE("f0 estimation is equivariant under transposition") {
    const double s = 2.5;
    const F0Track a = estimate_f0_track(synth_voice(voice(42.0, 0.5)));
    const F0Track b = estimate_f0_track(synth_voice(voice(42.0 * semitone_ratio(s), 0.5)));
    // same duration and hop, so points pair up by index
    const std::size_t n = std::min(a.points.size(), b.points.size());
    REQUIRE(n >= 10);
    for (std::size_t i = 0; i < n; ++i) {
        const double shift = 12.0 * std::log2(b.points[i].f0_hz / a.points[i].f0_hz);
        CHECK(shift == Approx(s).margin(0.1));
    }
}
