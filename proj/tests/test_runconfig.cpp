// tests/test_runconfig.cpp

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

#include <sstream>

#include "basstune/runconfig.hpp"

using namespace basstune;
using Catch::Approx;

TEST_CASE("defaults are the documented ones") {
    const RunConfig cfg;
    CHECK(cfg.phon == 60.0);
    CHECK(cfg.pitch_reference_hz == 440.0);
    CHECK(cfg.stft_window == 8192);
    CHECK(cfg.stft_hop == 2048);
    CHECK(cfg.f0_window_s == Approx(0.2));
    CHECK(cfg.output_format == "table");
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("key=value parsing with comments and spaces") {
    std::istringstream in(
        "# comment\n"
        "phon = 70\n"
        "pitch_reference_hz=442\n"
        "stft_window = 4096\n"
        "stft_hop = 1024\n"
        "f0_window_s = 0.25\n"
        "monitors_data = /tmp/monitors.csv\n"
        "output_format = json\n");
    const RunConfig cfg = parse_config(in);
    CHECK(cfg.phon == 70.0);
    CHECK(cfg.pitch_reference_hz == 442.0);
    CHECK(cfg.stft_window == 4096);
    CHECK(cfg.stft_hop == 1024);
    CHECK(cfg.f0_window_s == Approx(0.25));
    CHECK(cfg.monitors_data == "/tmp/monitors.csv");
    CHECK(cfg.output_format == "json");
}

TEST_CASE("unknown keys and bad values are named with their line") {
    std::istringstream unknown("phonn = 60\n");
    CHECK_THROWS_WITH(parse_config(unknown),
                      Catch::Matchers::ContainsSubstring("unknown key"));

    std::istringstream noequals("phon 60\n");
    CHECK_THROWS_WITH(parse_config(noequals),
                      Catch::Matchers::ContainsSubstring("key=value"));

    std::istringstream badvalue("phon = sixty\n");
    CHECK_THROWS_AS(parse_config(badvalue), std::invalid_argument);
}

TEST_CASE("owning-module ranges are enforced") {
    std::istringstream phon_range("phon = 99\n");
    CHECK_THROWS_AS(parse_config(phon_range), std::out_of_range);

    std::istringstream ref_range("pitch_reference_hz = 100\n");
    CHECK_THROWS_AS(parse_config(ref_range), std::out_of_range);

    std::istringstream fmt("output_format = yaml\n");
    CHECK_THROWS_AS(parse_config(fmt), std::out_of_range);

    CHECK_THROWS_AS(load_config_file("/nonexistent/config"), std::invalid_argument);
}
