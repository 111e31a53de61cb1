// include/basstune/profile.hpp

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
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "basstune/common.hpp"

namespace basstune {

struct Partial {
    int harmonic_index = 1;
    double frequency_hz = 0.0;
    double amplitude = 0.0;  // linear, max normalized to 1.0
};

/// Harmonic complex: the advisor's unit of account. Partial frequencies are
/// harmonic_index * fundamental within 1%.
struct SpectralProfile {
    std::vector<Partial> partials;

    double fundamental_hz() const {
        if (partials.empty()) throw std::invalid_argument("profile has no partials");
        const Partial& p = partials.front();
        return p.frequency_hz / p.harmonic_index;
    }

    void validate() const {
        if (partials.empty()) throw std::invalid_argument("profile has no partials");
        double max_amp = 0.0;
        const double f0 = fundamental_hz();
        for (const Partial& p : partials) {
            if (p.harmonic_index < 1)
                throw std::invalid_argument("profile: harmonic index must be >= 1");
            if (p.amplitude < 0.0)
                throw std::invalid_argument("profile: negative amplitude");
            const double expected = p.harmonic_index * f0;
            if (std::abs(p.frequency_hz - expected) > 0.01 * expected)
                throw std::invalid_argument(
                    "profile: partial " + std::to_string(p.harmonic_index) +
                    " at " + std::to_string(p.frequency_hz) +
                    " Hz is not harmonic on " + std::to_string(f0) + " Hz");
            max_amp = std::max(max_amp, p.amplitude);
        }
        if (std::abs(max_amp - 1.0) > 1e-9)
            throw std::invalid_argument("profile: amplitudes must be normalized to max 1.0");
    }
};

/// Single-partial profile: just the fundamental.
inline SpectralProfile fundamental_profile(double f0_hz) {
    if (f0_hz <= 0.0) throw std::invalid_argument("fundamental must be positive");
    return SpectralProfile{{Partial{1, f0_hz, 1.0}}};
}

/// Harmonic profile from relative amplitudes (index i -> harmonic i+1).
inline SpectralProfile harmonic_profile(double f0_hz, const std::vector<double>& amplitudes) {
    if (f0_hz <= 0.0) throw std::invalid_argument("fundamental must be positive");
    if (amplitudes.empty()) throw std::invalid_argument("no amplitudes");
    const double max_amp = *std::max_element(amplitudes.begin(), amplitudes.end());
    if (max_amp <= 0.0) throw std::invalid_argument("amplitudes must have a positive maximum");
    SpectralProfile p;
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
        p.partials.push_back(
            Partial{static_cast<int>(i + 1), f0_hz * static_cast<double>(i + 1),
                    amplitudes[i] / max_amp});
    p.validate();
    return p;
}

/// Reads the bundled profile table format:
///   # comment lines
///   # fundamental_hz = 49.48
///   <harmonic_index> <relative_amplitude>
inline SpectralProfile load_profile_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open profile table '" + path + "'");
    double f0 = 0.0;
    std::vector<std::pair<int, double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto key = line.find("fundamental_hz");
            const auto eq = line.find('=');
            if (key != std::string::npos && eq != std::string::npos)
                f0 = std::stod(line.substr(eq + 1));
            continue;
        }
        std::istringstream row(line);
        int idx = 0;
        double amp = 0.0;
        if (!(row >> idx >> amp))
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected '<harmonic> <amplitude>'");
        rows.emplace_back(idx, amp);
    }
    if (f0 <= 0.0)
        throw std::invalid_argument(path + ": missing '# fundamental_hz = ...' header");
    if (rows.empty()) throw std::invalid_argument(path + ": no partials");

    SpectralProfile p;
    for (const auto& [idx, amp] : rows)
        p.partials.push_back(Partial{idx, f0 * idx, amp});
    p.validate();
    return p;
}

}  // namespace basstune
