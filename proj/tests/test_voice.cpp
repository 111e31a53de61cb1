// tests/test_voice.cpp

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

#include <complex>

#include "basstune/fft.hpp"
#include "basstune/profile.hpp"
#include "basstune/stft.hpp"
#include "basstune/voice.hpp"

using namespace basstune;
using Catch::Approx;

namespace {

// Magnitudes of harmonics 1..5 from one Hann-windowed slice.
std::vector<double> harmonic_mags(const AudioClip& c, double f0, double t0_s, double dur_s) {
    const auto start = static_cast<std::size_t>(t0_s * c.sample_rate);
    const auto len = static_cast<std::size_t>(dur_s * c.sample_rate);
    REQUIRE(start + len <= c.samples.size());
    const auto taper = make_window("hann", len);
    std::vector<double> buf(2 * fft::next_power_of_two(len), 0.0);
    for (std::size_t i = 0; i < len; ++i) buf[i] = c.samples[start + i] * taper[i];
    const auto bins = fft::real_forward(buf);
    const double bin_hz = static_cast<double>(c.sample_rate) / static_cast<double>(buf.size());
    std::vector<double> mags;
    for (int k = 1; k <= 5; ++k) {
        const auto lo = static_cast<std::size_t>((k * f0 - 6.0) / bin_hz);
        const auto hi = static_cast<std::size_t>((k * f0 + 6.0) / bin_hz);
        double m = 0.0;
        for (std::size_t b = lo; b <= hi; ++b) m = std::max(m, std::abs(bins[b]));
        mags.push_back(m);
    }
    return mags;
}

double overtone_energy_ratio(const std::vector<double>& mags) {
    double overtones = 0.0;
    for (std::size_t k = 1; k < mags.size(); ++k) overtones += mags[k] * mags[k];
    return overtones / (mags[0] * mags[0]);
}

// Instantaneous frequency by phase differentiation of the demodulated
// signal: heterodyne by a reference near f0, low-pass with two centered
// one-period boxcars (kills the sum-frequency image), then differentiate the
// residual phase. Local and independent of the STFT peak-picking path.
std::vector<double> instantaneous_frequency(const AudioClip& clip, double f_ref) {
    const std::size_t n = clip.samples.size();
    std::vector<std::complex<double>> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / clip.sample_rate;
        z[i] = clip.samples[i] *
               std::exp(std::complex<double>(0.0, -two_pi * f_ref * t));
    }
    const auto period = static_cast<std::size_t>(std::lround(clip.sample_rate / f_ref));
    auto boxcar = [&](const std::vector<std::complex<double>>& in) {
        std::vector<std::complex<double>> out(in.size(), {0.0, 0.0});
        const std::size_t half = period / 2;
        for (std::size_t i = half; i + half < in.size(); ++i) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t j = i - half; j <= i + half; ++j) acc += in[j];
            out[i] = acc;
        }
        return out;
    };
    const auto smooth = boxcar(boxcar(z));

    std::vector<double> freq(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double dphi = std::arg(smooth[i + 1]) - std::arg(smooth[i]);
        while (dphi < -pi) dphi += two_pi;
        while (dphi >= pi) dphi -= two_pi;
        freq[i] = f_ref + dphi * clip.sample_rate / two_pi;
    }
    return freq;
}

VoiceParams base_params() {
    VoiceParams p;
    p.f0_end_hz = 49.48;
    p.sweep_semitones = 1.0;
    p.sweep_duration_s = 0.4;
    p.amp_decay_time_s = 2.0;
    p.drive = 0.0;
    p.duration_s = 3.0;
    p.sample_rate = 44100;
    return p;
}

}  // namespace

TEST_CASE("synth output is finite, peaked at 0.9, and dies away") {
    VoiceParams p = base_params();
    p.amp_decay_time_s = 0.5;
    p.duration_s = 2.0;  // > 3 amplitude time constants
    const AudioClip clip = synth_voice(p);
    CHECK_NOTHROW(clip.validate());
    CHECK(clip.peak() == Approx(0.9));

    double tail_peak = 0.0;
    const auto tail_start = static_cast<std::size_t>(1.5 * p.sample_rate);
    for (std::size_t i = tail_start; i < clip.samples.size(); ++i)
        tail_peak = std::max(tail_peak, std::abs(clip.samples[i]));
    CHECK(tail_peak < db_to_amplitude(-80.0));
}

TEST_CASE("drive 0 keeps overtones at least 40 dB under the fundamental") {
    const AudioClip clip = synth_voice(base_params());
    const auto mags = harmonic_mags(clip, 49.48, 1.0, 0.8);
    for (std::size_t k = 1; k < 5; ++k)
        CHECK(amplitude_db(mags[k] / mags[0]) < -40.0);
}

TEST_CASE("drive boosts the overtone level") {
    VoiceParams quiet = base_params();
    VoiceParams hot = base_params();
    hot.drive = 2.0;
    const auto m0 = harmonic_mags(synth_voice(quiet), 49.48, 0.5, 0.6);
    const auto m2 = harmonic_mags(synth_voice(hot), 49.48, 0.5, 0.6);
    CHECK(overtone_energy_ratio(m2) > overtone_energy_ratio(m0));
}

TEST_CASE("overtone ratio never decreases as drive rises") {
    VoiceParams p = base_params();
    p.amp_decay_time_s = 6.0;  // keep the shaper hot through the slice
    p.duration_s = 2.0;
    double prev = -1.0;
    for (double drive : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0}) {
        p.drive = drive;
        const auto mags = harmonic_mags(synth_voice(p), 49.48, 0.4, 0.7);
        const double ratio = overtone_energy_ratio(mags);
        CHECK(ratio >= prev);
        prev = ratio;
    }
}

TEST_CASE("instantaneous frequency follows the programmed trajectory") {
    VoiceParams p = base_params();
    p.sweep_semitones = 1.5;
    const AudioClip clip = synth_voice(p);
    const auto freq = instantaneous_frequency(clip, p.f0_end_hz);
    const double dt = 1.0 / p.sample_rate;
    const auto t0 = static_cast<std::size_t>(p.sweep_duration_s * p.sample_rate);
    const auto t1 = static_cast<std::size_t>(2.0 * p.sample_rate);  // > -60 dBFS
    for (std::size_t i = t0; i < t1; i += 997)
        CHECK(freq[i] == Approx(p.frequency_at(i * dt)).margin(0.3));
    // the sweep region tracks too, a little more loosely (the demodulator
    // low-pass smears the fastest part of the glide)
    for (std::size_t i = static_cast<std::size_t>(0.2 * p.sample_rate); i < t0; i += 499)
        CHECK(freq[i] == Approx(p.frequency_at(i * dt)).margin(0.6));
}

TEST_CASE("programmed trajectory starts sweep_semitones high and settles") {
    const VoiceParams p = base_params();
    CHECK(p.frequency_at(0.0) == Approx(49.48 * semitone_ratio(1.0)));
    CHECK(p.frequency_at(10.0) == Approx(49.48).margin(1e-6));
    VoiceParams flat = p;
    flat.sweep_semitones = 0.0;
    CHECK(flat.frequency_at(0.0) == Approx(49.48));
}

TEST_CASE("voice parameter validation") {
    VoiceParams p = base_params();
    p.f0_end_hz = 0.0;
    CHECK_THROWS_AS(synth_voice(p), std::invalid_argument);
    p = base_params();
    p.sweep_semitones = -0.5;
    CHECK_THROWS_AS(synth_voice(p), std::invalid_argument);
    p = base_params();
    p.duration_s = 0.3;  // must exceed sweep_duration
    CHECK_THROWS_AS(synth_voice(p), std::invalid_argument);
    p = base_params();
    p.drive = -1.0;
    CHECK_THROWS_AS(synth_voice(p), std::invalid_argument);
    p = base_params();
    p.sample_rate = 6000;
    CHECK_THROWS_AS(synth_voice(p), std::invalid_argument);
    p = base_params();
    p.f0_end_hz = 30000.0;
    CHECK_THROWS_AS(synth_voice(p), std::invalid_argument);
}

TEST_CASE("bundled driven profile: five partials on 49.48 Hz, unit maximum") {
    const SpectralProfile profile = reference_driven_profile();
    REQUIRE(profile.partials.size() == 5);
    CHECK(profile.fundamental_hz() == Approx(49.48));
    CHECK(profile.partials[0].amplitude == Approx(1.0));
    for (const Partial& p : profile.partials) {
        CHECK(p.amplitude <= 1.0);
        CHECK(p.frequency_hz == Approx(p.harmonic_index * 49.48));
    }
    CHECK_NOTHROW(profile.validate());
}

TEST_CASE("bundled profile data file matches the built-in table") {
    const SpectralProfile from_file =
        load_profile_table(std::string(BASSTUNE_DATA_DIR) + "/driven_profile_v1.txt");
    const SpectralProfile built_in = reference_driven_profile();
    REQUIRE(from_file.partials.size() == built_in.partials.size());
    for (std::size_t i = 0; i < built_in.partials.size(); ++i) {
        CHECK(from_file.partials[i].harmonic_index == built_in.partials[i].harmonic_index);
        CHECK(from_file.partials[i].frequency_hz ==
              Approx(built_in.partials[i].frequency_hz).margin(1e-9));
        CHECK(from_file.partials[i].amplitude ==
              Approx(built_in.partials[i].amplitude).margin(1e-9));
    }
}

TEST_CASE("profile table parsing errors") {
    CHECK_THROWS_AS(load_profile_table("/nonexistent/profile.txt"), std::invalid_argument);
    CHECK_THROWS_AS(fundamental_profile(-5.0), std::invalid_argument);
    CHECK_THROWS_AS(harmonic_profile(49.48, {}), std::invalid_argument);
    SpectralProfile bad{{Partial{1, 49.48, 1.0}, Partial{2, 120.0, 0.5}}};  // inharmonic
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
