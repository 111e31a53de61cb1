// include/basstune/analysis.hpp

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
#include "basstune/stft.hpp"

namespace basstune {

struct FrequencyBand {
    double low_hz = 25.0;
    double high_hz = 120.0;
};

inline constexpr FrequencyBand default_f0_band{25.0, 120.0};
inline constexpr double default_f0_window_s = 0.2;

struct F0Point {
    double time_s = 0.0;   // window center
    double f0_hz = 0.0;
    double energy = 0.0;   // linear power at the f0 bin
};

struct F0Track {
    std::vector<F0Point> points;
    double window_s = default_f0_window_s;
};

struct PartialPoint {
    double time_s = 0.0;  // frame start, as in Spectrogram
    double frequency_hz = 0.0;
    double magnitude = 0.0;
};

struct PartialTrack {
    int harmonic_index = 1;
    std::vector<PartialPoint> points;
    double stop_time_s = 0.0;  // first frame below threshold (0 if never above)
};

struct WeightedHistogram {
    double low_hz = 0.0;
    double high_hz = 0.0;
    double bin_width_hz = 0.25;
    std::vector<double> masses;  // sums to 1
    double mode_frequency_hz = 0.0;
    std::vector<double> secondary_modes_hz;  // local maxima >= 10% of the mode

    double bin_center(std::size_t i) const {
        return low_hz + (static_cast<double>(i) + 0.5) * bin_width_hz;
    }
};

/// Per-window fundamental estimates: quadratically interpolated magnitude
/// peak inside search_band, on windows of `window_s` seconds (hop = window/4).
/// Windows whose in-band energy sits more than 60 dB below what a full-scale
/// in-band sinusoid would produce are treated as unvoiced and omitted.
inline F0Track estimate_f0_track(const AudioClip& clip, double window_s = default_f0_window_s,
                                 FrequencyBand search_band = default_f0_band) {
    clip.validate();
    if (window_s <= 0.0) throw std::invalid_argument("f0 window must be positive");
    if (search_band.low_hz <= 0.0 || search_band.high_hz <= search_band.low_hz)
        throw std::invalid_argument("bad f0 search band");
    if (search_band.high_hz > clip.sample_rate / 2.0)
        throw std::invalid_argument("f0 search band exceeds Nyquist");

    const std::size_t win = static_cast<std::size_t>(std::llround(window_s * clip.sample_rate));
    if (win < 8 || win > clip.samples.size())
        throw std::invalid_argument("insufficient signal: clip shorter than one " +
                                    std::to_string(window_s) + " s analysis window");
    const std::size_t hop = std::max<std::size_t>(1, win / 4);
    // zero-padded transform so the quadratic interpolation works on a fine grid
    const std::size_t nfft = 2 * fft::next_power_of_two(win);

    const std::vector<double> taper = make_window("hann", win);
    double taper_sq = 0.0;
    for (double w : taper) taper_sq += w * w;
    const double clip_peak = clip.peak();
    // in-band energy of a full-scale windowed sinusoid, as time-domain sum
    const double reference_energy = clip_peak * clip_peak * taper_sq / 2.0;
    const double gate = 1e-6 * reference_energy;  // -60 dB

    const double bin_hz = static_cast<double>(clip.sample_rate) / static_cast<double>(nfft);
    const std::size_t b_lo =
        static_cast<std::size_t>(std::ceil(search_band.low_hz / bin_hz));
    const std::size_t b_hi =
        static_cast<std::size_t>(std::floor(search_band.high_hz / bin_hz));

    F0Track track;
    track.window_s = window_s;
    std::vector<double> buf(nfft, 0.0);
    const std::size_t len = clip.samples.size();
    for (std::size_t start = 0; start + win <= len; start += hop) {
        for (std::size_t i = 0; i < win; ++i) buf[i] = clip.samples[start + i] * taper[i];
        std::fill(buf.begin() + static_cast<std::ptrdiff_t>(win), buf.end(), 0.0);
        const auto bins = fft::real_forward(buf);

        double band_energy = 0.0;
        std::size_t peak_bin = b_lo;
        double peak_mag = -1.0;
        for (std::size_t b = b_lo; b <= b_hi && b < bins.size(); ++b) {
            const double m = std::abs(bins[b]);
            band_energy += 2.0 * m * m / static_cast<double>(nfft);
            if (m > peak_mag) {
                peak_mag = m;
                peak_bin = b;
            }
        }
        if (band_energy < gate || peak_mag <= 0.0) continue;

        const double m_l = (peak_bin > 0) ? std::abs(bins[peak_bin - 1]) : 0.0;
        const double m_r = (peak_bin + 1 < bins.size()) ? std::abs(bins[peak_bin + 1]) : 0.0;
        const double delta = quadratic_peak_offset(m_l, peak_mag, m_r);
        F0Point point;
        point.time_s = (static_cast<double>(start) + win / 2.0) / clip.sample_rate;
        point.f0_hz = (static_cast<double>(peak_bin) + delta) * bin_hz;
        point.energy = peak_mag * peak_mag;
        track.points.push_back(point);
    }

    if (track.points.empty()) throw std::invalid_argument("no fundamental detected");
    return track;
}

/// Median f0 of the final quarter of the track -- the settled value.
inline double steady_f0(const F0Track& track) {
    if (track.points.empty()) throw std::invalid_argument("empty f0 track");
    const std::size_t n = track.points.size();
    const std::size_t tail = std::max<std::size_t>(1, n / 4);
    std::vector<double> vals;
    vals.reserve(tail);
    for (std::size_t i = n - tail; i < n; ++i) vals.push_back(track.points[i].f0_hz);
    std::sort(vals.begin(), vals.end());
    const std::size_t m = vals.size();
    return (m % 2 == 1) ? vals[m / 2] : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
}

namespace detail {

// Mean of exp(-u/tau) under the squared-Hann weight of a window of length w,
// u centered on the window. An analysis window reports the power-weighted
// average frequency over its span, so an exponential sweep appears scaled by
// this factor; sweep_range divides it back out.
inline double hann_smear_factor(double window_s, double tau_s) {
    if (tau_s <= 0.0) return 1.0;
    const int steps = 512;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / steps - 0.5;  // [-0.5, 0.5)
        const double hann = 0.5 - 0.5 * std::cos(two_pi * (u + 0.5));
        const double wgt = hann * hann;
        num += wgt * std::exp(-u * window_s / tau_s);
        den += wgt;
    }
    return num / den;
}

}  // namespace detail

/// Size of the initial downward pitch sweep, in semitones above the steady
/// fundamental.
///
/// The raw track understates a fast sweep: the first analysis window already
/// averages over window_s seconds of falling pitch. So when the early points
/// carry a decaying offset, an exponential relaxation is fitted through them,
/// corrected for the window smear, and extrapolated to the clip onset. Tracks
/// that do not fit that shape (too few points, no positive offset) fall back
/// to the literal max-early-over-steady ratio.
inline double sweep_range(const F0Track& track) {
    if (track.points.size() < 2)
        throw std::invalid_argument("sweep_range needs at least 2 track points");
    const double steady = steady_f0(track);
    const std::size_t n = track.points.size();

    // literal estimate: max f0 among the earlier half of the points
    double max_early = steady;
    for (std::size_t i = 0; i < std::max<std::size_t>(1, n / 2); ++i)
        max_early = std::max(max_early, track.points[i].f0_hz);
    const double literal = 12.0 * std::log2(max_early / steady);

    if (n < 6) return literal;

    std::vector<double> t(n), offset(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = track.points[i].time_s;
        offset[i] = std::log2(track.points[i].f0_hz / steady);
    }

    double best_amp = 0.0, best_tau = 0.0, best_sse = -1.0;
    for (int g = 0; g < 120; ++g) {
        const double tau =
            0.02 * std::pow(2.0 / 0.02, static_cast<double>(g) / 119.0);  // 0.02..2 s
        double se = 0.0, ee = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(-t[i] / tau);
            se += offset[i] * e;
            ee += e * e;
        }
        if (ee <= 0.0) continue;
        const double amp = se / ee;
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = offset[i] - amp * std::exp(-t[i] / tau);
            sse += r * r;
        }
        if (best_sse < 0.0 || sse < best_sse) {
            best_sse = sse;
            best_amp = amp;
            best_tau = tau;
        }
    }

    if (best_amp <= 0.0 || !std::isfinite(best_amp)) return literal;
    const double corrected =
        12.0 * best_amp / detail::hann_smear_factor(track.window_s, best_tau);
    return std::max(corrected, literal);
}

/// Follows harmonics 1..n_harmonics of f0 through the spectrogram. Each track
/// takes the magnitude peak within a quartertone of k*f0, frame by frame, and
/// stops at the first frame whose peak falls below stop_ratio times the
/// global spectrogram peak (0.7 for the fundamental, 0.5 for harmonics).
/// A partial already below threshold in frame 0 yields an empty track.
inline std::vector<PartialTrack> track_partials(const Spectrogram& spec, double f0_hz,
                                                int n_harmonics,
                                                double fundamental_stop = 0.7,
                                                double harmonic_stop = 0.5) {
    if (f0_hz <= 0.0) throw std::invalid_argument("track_partials: f0 must be positive");
    if (n_harmonics < 1) throw std::invalid_argument("track_partials: need n_harmonics >= 1");
    const double nyquist = spec.sample_rate / 2.0;
    if (f0_hz * n_harmonics >= nyquist)
        throw std::invalid_argument("track_partials: harmonic " +
                                    std::to_string(n_harmonics) + " of " +
                                    std::to_string(f0_hz) + " Hz exceeds Nyquist");
    if (fundamental_stop <= 0.0 || harmonic_stop <= 0.0)
        throw std::invalid_argument("track_partials: stop thresholds must be positive");

    const double global_peak = spec.peak_magnitude();
    const double bin_hz = static_cast<double>(spec.sample_rate) / spec.window_size;
    const double quartertone = std::pow(2.0, 0.5 / 12.0);

    std::vector<PartialTrack> tracks;
    tracks.reserve(static_cast<std::size_t>(n_harmonics));
    for (int k = 1; k <= n_harmonics; ++k) {
        PartialTrack track;
        track.harmonic_index = k;
        const double center = k * f0_hz;
        // a quartertone can be narrower than one bin at low f0; always search
        // at least the bin nearest the harmonic and its neighbors
        const auto b_center = static_cast<std::size_t>(
            std::max(1.0, std::round(center / bin_hz)));
        auto b_lo = static_cast<std::size_t>(
            std::max(0.0, std::ceil(center / quartertone / bin_hz)));
        auto b_hi = static_cast<std::size_t>(std::floor(center * quartertone / bin_hz));
        b_lo = std::min(b_lo, b_center - 1);
        b_hi = std::max(b_hi, b_center + 1);
        const double threshold = (k == 1 ? fundamental_stop : harmonic_stop) * global_peak;

        bool stopped = false;
        for (std::size_t frame = 0; frame < spec.frame_count(); ++frame) {
            const auto& mags = spec.frames[frame];
            std::size_t peak_bin = b_lo;
            double peak_mag = -1.0;
            for (std::size_t b = b_lo; b <= b_hi && b < mags.size(); ++b) {
                if (mags[b] > peak_mag) {
                    peak_mag = mags[b];
                    peak_bin = b;
                }
            }
            if (peak_mag < threshold) {
                track.stop_time_s = spec.frame_time(frame);
                stopped = true;
                break;
            }
            const double m_l = (peak_bin > 0) ? mags[peak_bin - 1] : 0.0;
            const double m_r = (peak_bin + 1 < mags.size()) ? mags[peak_bin + 1] : 0.0;
            const double delta = quadratic_peak_offset(m_l, peak_mag, m_r);
            track.points.push_back(PartialPoint{
                spec.frame_time(frame), (static_cast<double>(peak_bin) + delta) * bin_hz,
                peak_mag});
        }
        if (!stopped) track.stop_time_s = spec.frame_time(spec.frame_count());
        tracks.push_back(std::move(track));
    }
    return tracks;
}

/// Pools f0 estimates from all clips into an energy-weighted histogram
/// (0.25 Hz bins over the search band). Clips in which no fundamental is
/// found are skipped; if every clip fails, the error propagates.
inline WeightedHistogram f0_distribution(const std::vector<AudioClip>& clips,
                                         double window_s = default_f0_window_s,
                                         FrequencyBand search_band = default_f0_band,
                                         double bin_width_hz = 0.25) {
    if (clips.empty()) throw std::invalid_argument("f0_distribution: no clips");
    if (bin_width_hz <= 0.0) throw std::invalid_argument("bad histogram bin width");

    const auto n_bins = static_cast<std::size_t>(
        std::ceil((search_band.high_hz - search_band.low_hz) / bin_width_hz));
    WeightedHistogram hist;
    hist.low_hz = search_band.low_hz;
    hist.high_hz = search_band.high_hz;
    hist.bin_width_hz = bin_width_hz;
    hist.masses.assign(n_bins, 0.0);

    std::size_t analyzed = 0;
    for (const AudioClip& clip : clips) {
        F0Track track;
        try {
            track = estimate_f0_track(clip, window_s, search_band);
        } catch (const std::invalid_argument&) {
            continue;  // unvoiced clip; only fatal if all clips fail
        }
        ++analyzed;
        for (const F0Point& p : track.points) {
            // peak interpolation can land up to half a bin outside the band
            const double pos = (p.f0_hz - search_band.low_hz) / bin_width_hz;
            const auto idx =
                (pos <= 0.0) ? std::size_t{0}
                             : std::min(static_cast<std::size_t>(pos), n_bins - 1);
            hist.masses[idx] += p.energy;
        }
    }
    if (analyzed == 0) throw std::invalid_argument("no fundamental detected");

    double total = 0.0;
    for (double m : hist.masses) total += m;
    if (total <= 0.0) throw std::invalid_argument("no fundamental detected");
    for (double& m : hist.masses) m /= total;

    std::size_t mode = 0;
    for (std::size_t i = 1; i < n_bins; ++i)
        if (hist.masses[i] > hist.masses[mode]) mode = i;
    hist.mode_frequency_hz = hist.bin_center(mode);

    // local maxima above 10% of the mode's mass, strongest first
    std::vector<std::pair<double, double>> peaks;  // (mass, center)
    for (std::size_t i = 0; i < n_bins; ++i) {
        if (i == mode) continue;
        const double left = (i > 0) ? hist.masses[i - 1] : 0.0;
        const double right = (i + 1 < n_bins) ? hist.masses[i + 1] : 0.0;
        if (hist.masses[i] > left && hist.masses[i] >= right &&
            hist.masses[i] >= 0.1 * hist.masses[mode])
            peaks.emplace_back(hist.masses[i], hist.bin_center(i));
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [mass, center] : peaks) hist.secondary_modes_hz.push_back(center);
    return hist;
}

}  // namespace basstune
