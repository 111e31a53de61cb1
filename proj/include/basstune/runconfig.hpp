// include/basstune/runconfig.hpp

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

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "basstune/analysis.hpp"
#include "basstune/loudness.hpp"
#include "basstune/stft.hpp"

namespace basstune {

/// Tool-wide defaults, overridable from the flat key=value file named by
/// BASSTUNE_CONFIG and by per-command flags (flag wins over file).
struct RunConfig {
    double phon = default_phon;
    double pitch_reference_hz = default_pitch_reference_hz;
    std::size_t stft_window = default_stft_window;
    std::size_t stft_hop = default_stft_hop;
    double f0_window_s = default_f0_window_s;
    std::string monitors_data;  // empty = bundled synthetic dataset
    std::string output_format = "table";  // table | json | csv

    void validate() const {
        PhonLevel check(phon);  // throws out_of_range when invalid
        (void)check;
        if (pitch_reference_hz < 200.0 || pitch_reference_hz > 600.0)
            throw std::out_of_range("pitch reference " + std::to_string(pitch_reference_hz) +
                                    " Hz outside [200, 600]");
        if (stft_window < 4) throw std::out_of_range("stft_window too small");
        if (stft_hop < 1) throw std::out_of_range("stft_hop must be >= 1");
        if (f0_window_s <= 0.0 || f0_window_s > 2.0)
            throw std::out_of_range("f0_window_s outside (0, 2]");
        if (output_format != "table" && output_format != "json" && output_format != "csv")
            throw std::out_of_range("output_format must be table, json or csv");
    }
};

inline RunConfig parse_config(std::istream& in, const std::string& origin = "config") {
    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": expected 'key=value'");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "phon")
                cfg.phon = std::stod(value);
            else if (key == "pitch_reference_hz")
                cfg.pitch_reference_hz = std::stod(value);
            else if (key == "stft_window")
                cfg.stft_window = static_cast<std::size_t>(std::stoul(value));
            else if (key == "stft_hop")
                cfg.stft_hop = static_cast<std::size_t>(std::stoul(value));
            else if (key == "f0_window_s")
                cfg.f0_window_s = std::stod(value);
            else if (key == "monitors_data")
                cfg.monitors_data = value;
            else if (key == "output_format")
                cfg.output_format = value;
            else
                throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                            ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": bad value for '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

}  // namespace basstune
