// include/basstune/loudness.hpp

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

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "basstune/common.hpp"

namespace basstune {

// Equal-loudness contours per ISO 226:2003. The standard tabulates three
// parameters at 29 frequencies from 20 Hz to 12.5 kHz:
//   alpha_f  exponent of loudness perception
//   L_U      magnitude of the linear transfer function, dB
//   T_f      hearing threshold, dB
// and defines the contour SPL at loudness level L_N (phon) as
//   A_f = 4.47e-3 (10^(0.025 L_N) - 1.15) + (0.4 10^((T_f + L_U)/10 - 9))^alpha_f
//   L_p = (10 / alpha_f) log10(A_f) - L_U + 94
// Valid for 20..80 phon (20..90 below 4 kHz; we enforce the stricter range).

struct Iso226Row {
    double frequency_hz;
    double alpha_f;
    double l_u_db;
    double t_f_db;
};

inline constexpr int iso226_row_count = 29;

inline constexpr std::array<Iso226Row, iso226_row_count> iso226_table = {{
    {20.0, 0.532, -31.6, 78.5},   {25.0, 0.506, -27.2, 68.7},
    {31.5, 0.480, -23.0, 59.5},   {40.0, 0.455, -19.1, 51.1},
    {50.0, 0.432, -15.9, 44.0},   {63.0, 0.409, -13.0, 37.5},
    {80.0, 0.387, -10.3, 31.5},   {100.0, 0.367, -8.1, 26.5},
    {125.0, 0.349, -6.2, 22.1},   {160.0, 0.330, -4.5, 17.9},
    {200.0, 0.315, -3.1, 14.4},   {250.0, 0.301, -2.0, 11.4},
    {315.0, 0.288, -1.1, 8.6},    {400.0, 0.276, -0.4, 6.2},
    {500.0, 0.267, 0.0, 4.4},     {630.0, 0.259, 0.3, 3.0},
    {800.0, 0.253, 0.5, 2.2},     {1000.0, 0.250, 0.0, 2.4},
    {1250.0, 0.246, -2.7, 3.5},   {1600.0, 0.244, -4.1, 1.7},
    {2000.0, 0.243, -1.0, -1.3},  {2500.0, 0.243, 1.7, -4.2},
    {3150.0, 0.243, 2.5, -6.0},   {4000.0, 0.242, 1.2, -5.4},
    {5000.0, 0.242, -2.1, -1.5},  {6300.0, 0.245, -7.1, 6.0},
    {8000.0, 0.254, -11.2, 12.6}, {10000.0, 0.271, -10.7, 13.9},
    {12500.0, 0.301, -3.1, 12.3},
}};

inline constexpr double elc_min_frequency_hz = 20.0;
inline constexpr double elc_max_frequency_hz = 12500.0;
inline constexpr double min_phon = 20.0;
inline constexpr double max_phon = 80.0;
inline constexpr double default_phon = 60.0;  // typical mixing level

/// Loudness level in phon, restricted to the standard's validity range.
struct PhonLevel {
    double value;

    explicit PhonLevel(double phon) : value(phon) {
        if (!(phon >= min_phon && phon <= max_phon))
            throw std::out_of_range("loudness of " + std::to_string(phon) +
                                    " phon outside the valid range [20, 80]");
    }
};

namespace detail {

inline Iso226Row iso226_params(double f_hz) {
    if (!(f_hz >= elc_min_frequency_hz && f_hz <= elc_max_frequency_hz))
        throw std::out_of_range("frequency " + std::to_string(f_hz) +
                                " Hz outside the ISO 226:2003 range [20, 12500] Hz");
    std::size_t hi = 1;
    while (hi + 1 < iso226_table.size() && iso226_table[hi].frequency_hz < f_hz) ++hi;
    const Iso226Row& a = iso226_table[hi - 1];
    const Iso226Row& b = iso226_table[hi];
    // interpolate the three parameters linearly in log-frequency, then apply
    // the contour formula; this preserves its structure between grid points
    const double t = std::log(f_hz / a.frequency_hz) / std::log(b.frequency_hz / a.frequency_hz);
    return Iso226Row{f_hz, a.alpha_f + t * (b.alpha_f - a.alpha_f),
                     a.l_u_db + t * (b.l_u_db - a.l_u_db), a.t_f_db + t * (b.t_f_db - a.t_f_db)};
}

inline double iso226_spl(const Iso226Row& row, double phon) {
    const double a_f = 4.47e-3 * (std::pow(10.0, 0.025 * phon) - 1.15) +
                       std::pow(0.4 * std::pow(10.0, (row.t_f_db + row.l_u_db) / 10.0 - 9.0),
                                row.alpha_f);
    return (10.0 / row.alpha_f) * std::log10(a_f) - row.l_u_db + 94.0;
}

}  // namespace detail

/// SPL in dB of the equal-loudness contour at the given frequency and level.
inline double elc_spl(double f_hz, PhonLevel loudness) {
    return detail::iso226_spl(detail::iso226_params(f_hz), loudness.value);
}

/// Gain change the ear applies when the content moves from f_from to f_to at
/// a fixed loudness level: negative means the destination frequency is
/// perceived quieter at equal SPL.
inline double ear_gain_delta(double f_from_hz, double f_to_hz, PhonLevel loudness) {
    return elc_spl(f_from_hz, loudness) - elc_spl(f_to_hz, loudness);
}

/// Loads and checks the bundled parameter table (version header, fnv1a64
/// checksum line, then frequency,alpha,L_U,T_f rows). Returns the row count.
inline int verify_iso226_datafile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::string line, body;
    std::uint64_t declared = 0;
    bool have_checksum = false;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.rfind("# fnv1a64:", 0) == 0) {
            declared = std::stoull(line.substr(10), nullptr, 16);
            have_checksum = true;
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        body += line;
        body += '\n';

        std::istringstream row(line);
        std::string field;
        Iso226Row r{};
        std::getline(row, field, ',');
        r.frequency_hz = std::stod(field);
        std::getline(row, field, ',');
        r.alpha_f = std::stod(field);
        std::getline(row, field, ',');
        r.l_u_db = std::stod(field);
        std::getline(row, field, ',');
        r.t_f_db = std::stod(field);

        if (rows >= iso226_row_count)
            throw std::invalid_argument(path + ": more than 29 rows");
        const Iso226Row& expect = iso226_table[static_cast<std::size_t>(rows)];
        if (std::abs(r.frequency_hz - expect.frequency_hz) > 1e-9 ||
            std::abs(r.alpha_f - expect.alpha_f) > 5e-4 ||
            std::abs(r.l_u_db - expect.l_u_db) > 5e-4 ||
            std::abs(r.t_f_db - expect.t_f_db) > 5e-4)
            throw std::invalid_argument(path + ": row " + std::to_string(rows + 1) +
                                        " does not match ISO 226:2003");
        ++rows;
    }
    if (rows != iso226_row_count)
        throw std::invalid_argument(path + ": expected 29 rows, found " + std::to_string(rows));
    if (!have_checksum) throw std::invalid_argument(path + ": missing checksum line");
    if (detail::fnv1a64(body) != declared)
        throw std::invalid_argument(path + ": checksum mismatch");
    return rows;
}

}  // namespace basstune
