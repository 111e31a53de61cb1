// tests/test_corpus.cpp

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

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "basstune/corpus.hpp"

using namespace basstune;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

AudioClip noise_clip(double seconds, int rate, std::uint64_t seed, double amp = 0.3) {
    AudioClip clip;
    clip.sample_rate = rate;
    const auto n = static_cast<std::size_t>(seconds * rate);
    clip.samples.resize(n);
    detail::SplitMix64 rng(seed);
    for (double& s : clip.samples) s = amp * (2.0 * rng.uniform() - 1.0);
    return clip;
}

AudioClip sine_clip(double f_hz, double seconds, int rate, double amp = 0.5) {
    AudioClip clip;
    clip.sample_rate = rate;
    const auto n = static_cast<std::size_t>(seconds * rate);
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        clip.samples[i] = amp * std::sin(two_pi * f_hz * static_cast<double>(i) / rate);
    return clip;
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() /
                     ("basstune_corpus_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("a 50 Hz tone puts essentially all band power in the low band") {
    const AudioClip clip = sine_clip(50.0, 2.0, 8000);
    const std::vector<Band> bands{{20.0, 80.0}, {80.0, 320.0}};
    const auto density = band_energy(clip, bands);
    const double low_power = density[0] * 60.0;
    const double high_power = density[1] * 240.0;
    CHECK(low_power / (low_power + high_power) > 0.99);
}

TEST_CASE("white noise is flat across bands within 1 dB") {
    const AudioClip clip = noise_clip(12.0, 16000, 0xFEED);
    const std::vector<Band> bands{{20.0, 40.0},   {40.0, 80.0},   {80.0, 160.0},
                                  {160.0, 320.0}, {320.0, 640.0}, {640.0, 1280.0},
                                  {1280.0, 2560.0}, {2560.0, 5120.0}};
    const auto density = band_energy(clip, bands);
    double mean = 0.0;
    for (double d : density) mean += d;
    mean /= static_cast<double>(density.size());
    for (double d : density) CHECK(std::abs(power_db(d / mean)) < 1.0);
}

TEST_CASE("silence has zero band power") {
    AudioClip clip{std::vector<double>(16000, 0.0), 8000};
    const auto density = band_energy(clip, {{20.0, 80.0}, {80.0, 320.0}});
    CHECK(density[0] == 0.0);
    CHECK(density[1] == 0.0);
}

TEST_CASE("bands beyond Nyquist are rejected") {
    const AudioClip clip = sine_clip(50.0, 1.0, 8000);
    CHECK_THROWS_WITH(band_energy(clip, {{20.0, 5000.0}}),
                      Catch::Matchers::ContainsSubstring("Nyquist"));
    CHECK_THROWS_AS(band_energy(clip, {{80.0, 20.0}}), std::invalid_argument);
    CHECK_THROWS_AS(band_energy(clip, {}), std::invalid_argument);
}

TEST_CASE("band powers tile the total Welch power within 2%") {
    const AudioClip clip = noise_clip(8.0, 16000, 0xACDC);
    const double nyquist = 8000.0;
    const std::vector<Band> bands = default_bands(nyquist);
    const auto density = band_energy(clip, bands);
    double banded = 0.0;
    for (std::size_t i = 0; i < bands.size(); ++i)
        banded += density[i] * (bands[i].high_hz - bands[i].low_hz);

    const auto psd = welch_psd(clip);
    const double bin_hz = 16000.0 / ((psd.size() - 1) * 2);
    double total = 0.0;
    for (std::size_t b = 0; b < psd.size(); ++b) {
        const double f = b * bin_hz;
        if (f >= 20.0 && f < nyquist) total += psd[b] * bin_hz;
    }
    CHECK(banded == Approx(total).epsilon(0.02));
}

TEST_CASE("default bands are octaves from 20 Hz plus a residual top") {
    const auto bands = default_bands(22050.0);
    REQUIRE(bands.size() == 7);
    CHECK(bands[0].low_hz == 20.0);
    CHECK(bands[5].high_hz == 1280.0);
    CHECK(bands[6].low_hz == 1280.0);
    CHECK(bands[6].high_hz == 22050.0);
}

TEST_CASE("manifest parsing validates years, paths and duplicates") {
    TempDir dir;
    const auto wav = dir.path / "a.wav";
    write_wav(wav.string(), sine_clip(100.0, 0.5, 8000));

    {
        std::ofstream m(dir.path / "ok.csv");
        m << "path,year\na.wav,1999\n" << wav.string() << "x_missing,2001\n";
    }
    CHECK_THROWS_WITH(load_manifest((dir.path / "nope.csv").string()),
                      Catch::Matchers::ContainsSubstring("cannot open"));

    const CorpusManifest ok = load_manifest((dir.path / "ok.csv").string());
    REQUIRE(ok.entries.size() == 2);
    CHECK(ok.entries[0].path == wav.string());  // relative resolved against the manifest
    CHECK(ok.entries[0].year == 1999);

    {
        std::ofstream m(dir.path / "badyear.csv");
        m << "a.wav,1850\n";
    }
    CHECK_THROWS_WITH(load_manifest((dir.path / "badyear.csv").string()),
                      Catch::Matchers::ContainsSubstring("[1900, 2100]"));

    {
        std::ofstream m(dir.path / "dup.csv");
        m << "a.wav,1999\na.wav,2001\n";
    }
    CHECK_THROWS_WITH(load_manifest((dir.path / "dup.csv").string()),
                      Catch::Matchers::ContainsSubstring("duplicate"));

    {
        std::ofstream m(dir.path / "noyear.csv");
        m << "a.wav\n";
    }
    CHECK_THROWS_AS(load_manifest((dir.path / "noyear.csv").string()), std::invalid_argument);

    {
        std::ofstream m(dir.path / "empty.csv");
        m << "path,year\n";
    }
    CHECK_THROWS_WITH(load_manifest((dir.path / "empty.csv").string()),
                      Catch::Matchers::ContainsSubstring("no entries"));
}

TEST_CASE("a single track gives a one-year matrix equal to its band energy") {
    TempDir dir;
    AudioClip clip = sine_clip(100.0, 1.0, 8000, 0.23);
    const auto wav = dir.path / "one.wav";
    write_wav(wav.string(), clip, WavEncoding::float32);
    {
        std::ofstream m(dir.path / "m.csv");
        m << "one.wav,2010\n";
    }
    const std::vector<Band> bands{{20.0, 320.0}, {320.0, 2560.0}};
    const auto result =
        evolution(load_manifest((dir.path / "m.csv").string()), bands, false);
    REQUIRE(result.matrix.years == std::vector<int>{2010});
    REQUIRE(result.skipped.empty());

    // expected: band_energy after the equal-RMS pre-normalization
    AudioClip normalized = read_wav(wav.string());
    const double g = corpus_reference_rms / normalized.rms();
    for (double& s : normalized.samples) s *= g;
    const auto expect = band_energy(normalized, bands);
    CHECK(result.matrix.values[0][0] == Approx(expect[0]).epsilon(1e-9));
    CHECK(result.matrix.values[0][1] == Approx(expect[1]).epsilon(1e-9));
}

TEST_CASE("per-band normalization maps a constant corpus to all ones") {
    TempDir dir;
    for (int i = 0; i < 4; ++i)
        write_wav((dir.path / ("t" + std::to_string(i) + ".wav")).string(),
                  sine_clip(100.0, 0.8, 8000), WavEncoding::float32);
    {
        std::ofstream m(dir.path / "m.csv");
        for (int i = 0; i < 4; ++i)
            m << "t" << i << ".wav," << (2000 + i) << "\n";
    }
    const auto result = evolution(load_manifest((dir.path / "m.csv").string()),
                                  {{20.0, 320.0}, {320.0, 2560.0}}, true);
    REQUIRE(result.matrix.years.size() == 4);
    for (const auto& row : result.matrix.values)
        for (double v : row) CHECK(v == Approx(1.0).margin(1e-9));
}

TEST_CASE("evolution is invariant to manifest order and per-track gain") {
    TempDir dir;
    for (int i = 0; i < 3; ++i) {
        AudioClip c = noise_clip(1.0, 8000, 100 + i);
        if (i == 1)
            for (double& s : c.samples) s *= 4.0;  // gain drift, pre-normalized away
        write_wav((dir.path / ("t" + std::to_string(i) + ".wav")).string(), c,
                  WavEncoding::float32);
    }
    {
        std::ofstream m(dir.path / "fwd.csv");
        m << "t0.wav,2000\nt1.wav,2001\nt2.wav,2002\n";
        std::ofstream r(dir.path / "rev.csv");
        r << "t2.wav,2002\nt1.wav,2001\nt0.wav,2000\n";
    }
    const std::vector<Band> bands{{20.0, 320.0}, {320.0, 2560.0}};
    const auto a = evolution(load_manifest((dir.path / "fwd.csv").string()), bands, true);
    const auto b = evolution(load_manifest((dir.path / "rev.csv").string()), bands, true);
    REQUIRE(a.matrix.years == b.matrix.years);
    for (std::size_t y = 0; y < a.matrix.values.size(); ++y)
        for (std::size_t i = 0; i < bands.size(); ++i)
            CHECK(a.matrix.values[y][i] == Approx(b.matrix.values[y][i]).margin(1e-12));
}

TEST_CASE("undecodable files are reported, never silently dropped") {
    TempDir dir;
    write_wav((dir.path / "good.wav").string(), sine_clip(100.0, 0.5, 8000));
    std::ofstream(dir.path / "bad.wav") << "not audio";
    {
        std::ofstream m(dir.path / "m.csv");
        m << "good.wav,2000\nbad.wav,2001\n";
    }
    const auto result = evolution(load_manifest((dir.path / "m.csv").string()),
                                  {{20.0, 320.0}}, false);
    REQUIRE(result.skipped.size() == 1);
    CHECK(result.skipped[0].path.find("bad.wav") != std::string::npos);
    CHECK(result.matrix.years == std::vector<int>{2000});
}

TEST_CASE("an all-bad corpus throws with per-file causes") {
    TempDir dir;
    std::ofstream(dir.path / "x.wav") << "junk";
    std::ofstream(dir.path / "y.wav") << "junk";
    {
        std::ofstream m(dir.path / "m.csv");
        m << "x.wav,2000\ny.wav,2001\n";
    }
    CHECK_THROWS_WITH(evolution(load_manifest((dir.path / "m.csv").string()),
                                {{20.0, 320.0}}, false),
                      Catch::Matchers::ContainsSubstring("x.wav"));
}
