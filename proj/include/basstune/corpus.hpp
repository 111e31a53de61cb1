// include/basstune/corpus.hpp

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
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "basstune/audio.hpp"
#include "basstune/fft.hpp"
#include "basstune/stft.hpp"
#include "basstune/wav.hpp"

namespace basstune {

// Diachronic band-power analysis: per-track Welch spectra reduced to
// band densities, averaged per release year.

struct ManifestEntry {
    std::string path;
    int year = 0;
};

struct CorpusManifest {
    std::vector<ManifestEntry> entries;
};

struct Band {
    double low_hz = 0.0;
    double high_hz = 0.0;
};

struct BandMatrix {
    std::vector<int> years;            // sorted
    std::vector<Band> bands;
    std::vector<std::vector<double>> values;  // [year][band] mean power density
    bool normalized = false;
};

struct SkippedFile {
    std::string path;
    std::string reason;
};

struct EvolutionResult {
    BandMatrix matrix;
    std::vector<SkippedFile> skipped;
};

/// Octave bands 20..1280 Hz plus a residual top band up to the Nyquist.
inline std::vector<Band> default_bands(double nyquist_hz) {
    std::vector<Band> bands;
    for (double lo = 20.0; lo < 1280.0; lo *= 2.0) bands.push_back(Band{lo, lo * 2.0});
    if (nyquist_hz > 1280.0) bands.push_back(Band{1280.0, nyquist_hz});
    return bands;
}

/// Manifest rows are `path,year`; a literal `path,year` header line is
/// allowed and skipped. Relative paths resolve against the manifest's
/// directory.
inline CorpusManifest load_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::invalid_argument("cannot open manifest '" + manifest_path + "'");
    const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();

    CorpusManifest manifest;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line == "path,year") continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos)
            throw std::invalid_argument(manifest_path + ":" + std::to_string(line_no) +
                                        ": expected 'path,year'");
        const std::string path_text = line.substr(0, comma);
        int year = 0;
        try {
            std::size_t used = 0;
            year = std::stoi(line.substr(comma + 1), &used);
            if (used != line.size() - comma - 1) throw std::invalid_argument("year");
        } catch (const std::exception&) {
            throw std::invalid_argument(manifest_path + ":" + std::to_string(line_no) +
                                        ": bad year in '" + line + "'");
        }
        if (year < 1900 || year > 2100)
            throw std::invalid_argument(manifest_path + ":" + std::to_string(line_no) +
                                        ": year " + std::to_string(year) +
                                        " outside [1900, 2100]");
        std::filesystem::path p(path_text);
        if (p.is_relative()) p = base / p;
        const std::string resolved = p.string();
        if (!seen.insert(resolved).second)
            throw std::invalid_argument(manifest_path + ":" + std::to_string(line_no) +
                                        ": duplicate path '" + path_text + "'");
        manifest.entries.push_back(ManifestEntry{resolved, year});
    }
    if (manifest.entries.empty())
        throw std::invalid_argument(manifest_path + ": no entries");
    return manifest;
}

/// One-sided Welch power spectral density (power per Hz), Hann segments with
/// 50% overlap. Returned vector has segment/2+1 bins spaced fs/segment apart.
inline std::vector<double> welch_psd(const AudioClip& clip, std::size_t segment = 4096) {
    clip.validate();
    segment = std::min(segment, fft::next_power_of_two(clip.samples.size() + 1) / 2);
    segment = std::max<std::size_t>(segment, 16);
    if (segment > clip.samples.size())
        throw std::invalid_argument("insufficient signal for Welch segment");

    const std::vector<double> taper = make_window("hann", segment);
    double taper_sq = 0.0;
    for (double w : taper) taper_sq += w * w;
    const double scale = 2.0 / (clip.sample_rate * taper_sq);

    const std::size_t hop = segment / 2;
    std::vector<double> psd(segment / 2 + 1, 0.0);
    std::vector<double> buf(segment);
    std::size_t n_segments = 0;
    for (std::size_t start = 0; start + segment <= clip.samples.size(); start += hop) {
        for (std::size_t i = 0; i < segment; ++i) buf[i] = clip.samples[start + i] * taper[i];
        const auto bins = fft::real_forward(buf);
        for (std::size_t b = 0; b < psd.size(); ++b) {
            const double m2 = std::norm(bins[b]);
            const double one_sided = (b == 0 || b == psd.size() - 1) ? 0.5 : 1.0;
            psd[b] += scale * one_sided * m2;
        }
        ++n_segments;
    }
    for (double& v : psd) v /= static_cast<double>(n_segments);
    return psd;
}

/// Mean power density of the clip in each band (integrated PSD divided by
/// band width, so bands of different widths are comparable).
inline std::vector<double> band_energy(const AudioClip& clip, const std::vector<Band>& bands) {
    clip.validate();
    if (bands.empty()) throw std::invalid_argument("band_energy: no bands");
    const double nyquist = clip.sample_rate / 2.0;
    for (const Band& b : bands) {
        if (!(b.low_hz >= 0.0) || !(b.high_hz > b.low_hz))
            throw std::invalid_argument("band_energy: bad band bounds");
        if (b.high_hz > nyquist + 1e-9)
            throw std::invalid_argument("band_energy: band [" + std::to_string(b.low_hz) +
                                        ", " + std::to_string(b.high_hz) +
                                        "] Hz exceeds Nyquist (" + std::to_string(nyquist) +
                                        " Hz)");
    }

    const auto psd = welch_psd(clip);
    const std::size_t segment = (psd.size() - 1) * 2;
    const double bin_hz = static_cast<double>(clip.sample_rate) / static_cast<double>(segment);

    std::vector<double> density(bands.size(), 0.0);
    for (std::size_t i = 0; i < bands.size(); ++i) {
        double power = 0.0;
        for (std::size_t b = 0; b < psd.size(); ++b) {
            const double f = static_cast<double>(b) * bin_hz;
            if (f >= bands[i].low_hz && f < bands[i].high_hz) power += psd[b] * bin_hz;
        }
        density[i] = power / (bands[i].high_hz - bands[i].low_hz);
    }
    return density;
}

inline constexpr double corpus_reference_rms = 0.1;

/// Per-year mean band densities across the manifest. Each decodable track is
/// first normalized to a common RMS so mastering-level drift does not read as
/// spectral drift. Undecodable files are reported in `skipped`, never
/// silently dropped; if nothing decodes, throws with the per-file causes.
inline EvolutionResult evolution(const CorpusManifest& manifest, const std::vector<Band>& bands,
                                 bool normalize) {
    if (manifest.entries.empty()) throw std::invalid_argument("evolution: empty manifest");

    EvolutionResult result;
    std::map<int, std::pair<std::vector<double>, std::size_t>> per_year;  // sums, count
    for (const ManifestEntry& entry : manifest.entries) {
        std::vector<double> density;
        try {
            AudioClip clip = read_wav(entry.path);
            const double rms = clip.rms();
            if (rms > 0.0) {
                const double g = corpus_reference_rms / rms;
                for (double& s : clip.samples) s *= g;
            }
            density = band_energy(clip, bands);
        } catch (const std::exception& e) {
            result.skipped.push_back(SkippedFile{entry.path, e.what()});
            continue;
        }
        auto& [sums, count] = per_year[entry.year];
        if (sums.empty()) sums.assign(bands.size(), 0.0);
        for (std::size_t i = 0; i < bands.size(); ++i) sums[i] += density[i];
        ++count;
    }

    if (per_year.empty()) {
        std::string msg = "evolution: no decodable entries:";
        for (const SkippedFile& s : result.skipped) msg += "\n  " + s.path + ": " + s.reason;
        throw std::invalid_argument(msg);
    }

    BandMatrix& m = result.matrix;
    m.bands = bands;
    m.normalized = normalize;
    for (const auto& [year, acc] : per_year) {
        m.years.push_back(year);
        std::vector<double> mean(bands.size());
        for (std::size_t i = 0; i < bands.size(); ++i)
            mean[i] = acc.first[i] / static_cast<double>(acc.second);
        m.values.push_back(std::move(mean));
    }

    if (normalize) {
        for (std::size_t b = 0; b < bands.size(); ++b) {
            double mean = 0.0;
            for (const auto& row : m.values) mean += row[b];
            mean /= static_cast<double>(m.values.size());
            if (mean > 0.0)
                for (auto& row : m.values) row[b] /= mean;
        }
    }
    return result;
}

}  // namespace basstune
