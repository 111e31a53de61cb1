// include/basstune/common.hpp

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
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace basstune {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// dB conventions used throughout: 20*log10 for amplitude ratios,
/// 10*log10 for power/energy ratios.
inline double amplitude_db(double amplitude_ratio) {
    return 20.0 * std::log10(amplitude_ratio);
}

inline double power_db(double power_ratio) {
    return 10.0 * std::log10(power_ratio);
}

inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }

/// Frequency scaling for a transposition in (possibly fractional) semitones.
inline double semitone_ratio(double semitones) {
    return std::pow(2.0, semitones / 12.0);
}

inline double octaves_between(double f_low, double f_high) {
    return std::log2(f_high / f_low);
}

namespace detail {

// Deterministic 64-bit generator (splitmix64). Used wherever the library
// needs reproducible pseudo-random values; std::uniform_real_distribution is
// implementation-defined and would break bit-stable outputs across toolchains.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// FNV-1a 64-bit, used to checksum bundled data tables.
inline std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

}  // namespace basstune
