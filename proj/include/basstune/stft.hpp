// include/basstune/stft.hpp

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
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "basstune/audio.hpp"
#include "basstune/fft.hpp"

namespace basstune {

inline constexpr std::size_t default_stft_window = 8192;  // ~0.19 s at 44.1 kHz
inline constexpr std::size_t default_stft_hop = default_stft_window / 4;

/// Periodic taper of the given length. Known names: hann (default),
/// hamming, blackman, rect.
inline std::vector<double> make_window(const std::string& name, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (name == "rect" || name == "rectangular") return w;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = two_pi * static_cast<double>(i) / static_cast<double>(n);
        if (name == "hann")
            w[i] = 0.5 - 0.5 * std::cos(x);
        else if (name == "hamming")
            w[i] = 0.54 - 0.46 * std::cos(x);
        else if (name == "blackman")
            w[i] = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
        else
            throw std::invalid_argument("unknown window function '" + name + "'");
    }
    return w;
}

/// Magnitude spectrogram. Frame k covers samples [k*hop, k*hop + window_size);
/// its nominal time is k*hop/sample_rate. Bin b sits at b*sample_rate/window_size.
struct Spectrogram {
    std::vector<std::vector<double>> frames;  // frame-major magnitudes
    std::size_t window_size = 0;
    std::size_t hop = 0;
    int sample_rate = 0;

    std::size_t bin_count() const { return window_size / 2 + 1; }
    std::size_t frame_count() const { return frames.size(); }
    double frame_time(std::size_t k) const {
        return static_cast<double>(k * hop) / sample_rate;
    }
    double bin_frequency(std::size_t b) const {
        return static_cast<double>(b) * sample_rate / static_cast<double>(window_size);
    }
    double peak_magnitude() const {
        double p = 0.0;
        for (const auto& f : frames)
            for (double m : f) p = std::max(p, m);
        return p;
    }
};

inline Spectrogram stft(const AudioClip& clip, std::size_t window_size = default_stft_window,
                        std::size_t hop = default_stft_hop,
                        const std::string& window = "hann") {
    clip.validate();
    if (window_size < 4) throw std::invalid_argument("stft: window too small");
    if (hop < 1) throw std::invalid_argument("stft: hop must be at least 1");
    if (window_size > clip.samples.size())
        throw std::invalid_argument("insufficient signal: clip of " +
                                    std::to_string(clip.samples.size()) +
                                    " samples is shorter than one window of " +
                                    std::to_string(window_size));

    const std::vector<double> taper = make_window(window, window_size);
    const std::size_t len = clip.samples.size();
    const std::size_t n_frames =
        1 + (len - window_size + hop - 1) / hop;  // final frame zero-padded

    Spectrogram out;
    out.window_size = window_size;
    out.hop = hop;
    out.sample_rate = clip.sample_rate;
    out.frames.reserve(n_frames);

    std::vector<double> buf(window_size);
    for (std::size_t k = 0; k < n_frames; ++k) {
        const std::size_t start = k * hop;
        for (std::size_t i = 0; i < window_size; ++i) {
            const std::size_t s = start + i;
            buf[i] = (s < len) ? clip.samples[s] * taper[i] : 0.0;
        }
        const auto bins = fft::real_forward(buf);
        std::vector<double> mags(bins.size());
        for (std::size_t b = 0; b < bins.size(); ++b) mags[b] = std::abs(bins[b]);
        out.frames.push_back(std::move(mags));
    }
    return out;
}

/// Quadratic peak interpolation on log magnitudes around bin `b`.
/// Returns the fractional bin offset in [-0.5, 0.5].
inline double quadratic_peak_offset(double m_left, double m_center, double m_right) {
    const double floor_mag = 1e-300;
    const double a = std::log(std::max(m_left, floor_mag));
    const double b = std::log(std::max(m_center, floor_mag));
    const double c = std::log(std::max(m_right, floor_mag));
    const double denom = a - 2.0 * b + c;
    if (denom >= 0.0 || !std::isfinite(denom)) return 0.0;  // not a proper peak
    const double delta = 0.5 * (a - c) / denom;
    return std::clamp(delta, -0.5, 0.5);
}

}  // namespace basstune
