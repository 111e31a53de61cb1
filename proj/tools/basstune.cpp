// tools/basstune.cpp

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

// basstune: analyze 808-style bass-drum material and quantify what a key or
// sample transposition costs through the playback chain (loudspeaker response
// x equal-loudness ear sensitivity).
//
// Exit codes: 0 success, 2 invalid input, 1 internal error. Data goes to
// stdout (or --out FILE); diagnostics go to stderr.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "basstune/basstune.hpp"

namespace bt = basstune;
using json = nlohmann::ordered_json;

namespace {

constexpr int schema_version = 1;

std::string format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

/// Every report names its dB convention explicitly.
json conventions() {
    return json{{"gain_db", "20*log10(amplitude ratio)"},
                {"power_db", "10*log10(power ratio)"},
                {"spl_db", "sound pressure level re 20 uPa"}};
}

/// Assembled data output; nothing reaches the stream until the command has
/// fully succeeded.
void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write output file '" + out_path + "'");
    out << text;
}

bt::ResponseCurve load_monitor_curve(const std::string& data_path, double smooth_octaves) {
    const auto speakers = data_path.empty() ? bt::synthetic_monitor_dataset()
                                            : bt::load_speaker_dataset_file(data_path);
    return bt::median_response(speakers, smooth_octaves);
}

bt::SpectralProfile resolve_profile(const std::string& name, double f0_hz) {
    if (name == "driven") return bt::reference_driven_profile();
    if (name == "fundamental") return bt::fundamental_profile(f0_hz);
    return bt::load_profile_table(name);
}

struct CommonFlags {
    bool as_json = false;
    bool as_csv = false;
    std::string out_path;
};

void add_output_flags(CLI::App* cmd, CommonFlags& flags, bool with_csv = true) {
    auto* json_flag = cmd->add_flag("--json", flags.as_json, "emit a JSON report");
    if (with_csv) {
        auto* csv_flag = cmd->add_flag("--csv", flags.as_csv, "emit a flat CSV table");
        csv_flag->excludes(json_flag);
        json_flag->excludes(csv_flag);
    }
    cmd->add_option("--out", flags.out_path, "write the report to a file instead of stdout");
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
    bt::VoiceParams params;
    std::string output;
    bool float32 = false;
    CommonFlags flags;
};

int run_synth(const SynthArgs& a) {
    const bt::AudioClip clip = bt::synth_voice(a.params);
    bt::write_wav(a.output, clip,
                  a.float32 ? bt::WavEncoding::float32 : bt::WavEncoding::pcm16);

    std::string text;
    if (a.flags.as_json) {
        json doc;
        doc["schema_version"] = schema_version;
        doc["command"] = "synth";
        doc["output"] = a.output;
        doc["f0_end_hz"] = a.params.f0_end_hz;
        doc["sweep_semitones"] = a.params.sweep_semitones;
        doc["sweep_duration_s"] = a.params.sweep_duration_s;
        doc["amp_decay_time_s"] = a.params.amp_decay_time_s;
        doc["drive"] = a.params.drive;
        doc["duration_s"] = a.params.duration_s;
        doc["sample_rate"] = a.params.sample_rate;
        doc["samples"] = clip.samples.size();
        doc["peak"] = clip.peak();
        text = doc.dump(2) + "\n";
    } else {
        text = "wrote " + a.output + ": " + format_double("%.3f", a.params.duration_s) +
               " s at " + std::to_string(a.params.sample_rate) + " Hz, f0 " +
               format_double("%.2f", a.params.f0_end_hz) + " Hz, sweep " +
               format_double("%.2f", a.params.sweep_semitones) + " st, drive " +
               format_double("%.2f", a.params.drive) + "\n";
    }
    emit(text, a.flags.out_path);
    return 0;
}

// -------------------------------------------------------------- analyze ----

struct AnalyzeArgs {
    std::vector<std::string> wavs;
    double window_s = bt::default_f0_window_s;
    double band_lo = bt::default_f0_band.low_hz;
    double band_hi = bt::default_f0_band.high_hz;
    int harmonics = 5;
    std::size_t stft_window = bt::default_stft_window;
    std::size_t stft_hop = bt::default_stft_hop;
    CommonFlags flags;
};

int run_analyze(const AnalyzeArgs& a) {
    const bt::FrequencyBand band{a.band_lo, a.band_hi};

    struct FileResult {
        std::string path;
        bt::AudioClip clip;
        bt::F0Track track;
        double steady = 0.0;
        double sweep = 0.0;
        std::vector<bt::PartialTrack> partials;
    };
    std::vector<FileResult> results;
    std::vector<bt::AudioClip> clips;
    for (const std::string& path : a.wavs) {
        FileResult r;
        r.path = path;
        r.clip = bt::read_wav(path);
        r.track = bt::estimate_f0_track(r.clip, a.window_s, band);
        r.steady = bt::steady_f0(r.track);
        r.sweep = bt::sweep_range(r.track);
        if (a.harmonics > 0 &&
            r.steady * a.harmonics < r.clip.sample_rate / 2.0 &&
            a.stft_window <= r.clip.samples.size()) {
            const bt::Spectrogram spec = bt::stft(r.clip, a.stft_window, a.stft_hop);
            r.partials = bt::track_partials(spec, r.steady, a.harmonics);
        }
        clips.push_back(r.clip);
        results.push_back(std::move(r));
    }
    const bt::WeightedHistogram hist = bt::f0_distribution(clips, a.window_s, band);

    std::string text;
    if (a.flags.as_csv) {
        std::ostringstream csv;
        csv << "table,file,field1,field2,field3\n";
        for (const FileResult& r : results) {
            for (const bt::F0Point& p : r.track.points)
                csv << "f0track," << r.path << ',' << format_double("%.6f", p.time_s) << ','
                    << format_double("%.4f", p.f0_hz) << ','
                    << format_double("%.8g", p.energy) << "\n";
            for (const bt::PartialTrack& t : r.partials)
                csv << "partial_stop," << r.path << ',' << t.harmonic_index << ','
                    << format_double("%.6f", t.stop_time_s) << ','
                    << t.points.size() << "\n";
            csv << "summary," << r.path << ',' << format_double("%.4f", r.steady) << ','
                << format_double("%.4f", r.sweep) << ",\n";
        }
        for (std::size_t i = 0; i < hist.masses.size(); ++i)
            if (hist.masses[i] > 0.0)
                csv << "histogram,all," << format_double("%.3f", hist.bin_center(i)) << ','
                    << format_double("%.8g", hist.masses[i]) << ",\n";
        text = csv.str();
    } else if (a.flags.as_json) {
        json doc;
        doc["schema_version"] = schema_version;
        doc["command"] = "analyze";
        doc["conventions"] = conventions();
        doc["f0_window_s"] = a.window_s;
        doc["search_band_hz"] = json::array({band.low_hz, band.high_hz});
        json files = json::array();
        for (const FileResult& r : results) {
            json jf;
            jf["path"] = r.path;
            jf["sample_rate"] = r.clip.sample_rate;
            jf["duration_s"] = r.clip.duration_s();
            jf["steady_f0_hz"] = r.steady;
            const bt::Note note = bt::note_of_frequency(r.steady);
            jf["steady_note"] = bt::note_name(note);
            jf["steady_note_cents"] = note.cents_offset;
            jf["sweep_range_semitones"] = r.sweep;
            json pts = json::array();
            for (const bt::F0Point& p : r.track.points)
                pts.push_back(json{{"t_s", p.time_s}, {"f0_hz", p.f0_hz}, {"energy", p.energy}});
            jf["f0_track"] = std::move(pts);
            json partials = json::array();
            for (const bt::PartialTrack& t : r.partials) {
                json jt;
                jt["harmonic"] = t.harmonic_index;
                jt["stop_time_s"] = t.stop_time_s;
                json tp = json::array();
                for (const bt::PartialPoint& p : t.points)
                    tp.push_back(json{{"t_s", p.time_s},
                                      {"frequency_hz", p.frequency_hz},
                                      {"magnitude", p.magnitude}});
                jt["points"] = std::move(tp);
                partials.push_back(std::move(jt));
            }
            jf["partials"] = std::move(partials);
            files.push_back(std::move(jf));
        }
        doc["files"] = std::move(files);
        json jh;
        jh["bin_width_hz"] = hist.bin_width_hz;
        jh["mode_hz"] = hist.mode_frequency_hz;
        jh["secondary_modes_hz"] = hist.secondary_modes_hz;
        json bins = json::array();
        for (std::size_t i = 0; i < hist.masses.size(); ++i)
            if (hist.masses[i] > 0.0)
                bins.push_back(json{{"center_hz", hist.bin_center(i)}, {"mass", hist.masses[i]}});
        jh["bins"] = std::move(bins);
        doc["histogram"] = std::move(jh);
        text = doc.dump(2) + "\n";
    } else {
        std::ostringstream out;
        for (const FileResult& r : results) {
            const bt::Note note = bt::note_of_frequency(r.steady);
            out << r.path << ":\n";
            out << "  steady f0      " << format_double("%.2f", r.steady) << " Hz ("
                << bt::note_name(note) << " " << format_double("%+.0f", note.cents_offset)
                << " cents)\n";
            out << "  sweep range    " << format_double("%.2f", r.sweep) << " semitones\n";
            out << "  voiced windows " << r.track.points.size() << "\n";
            for (const bt::PartialTrack& t : r.partials)
                out << "  harmonic " << t.harmonic_index << " stops at "
                    << format_double("%.3f", t.stop_time_s) << " s\n";
        }
        out << "pooled f0 distribution: mode " << format_double("%.2f", hist.mode_frequency_hz)
            << " Hz";
        if (!hist.secondary_modes_hz.empty()) {
            out << ", secondary";
            for (double f : hist.secondary_modes_hz) out << " " << format_double("%.2f", f);
            out << " Hz";
        }
        out << "\n";
        text = out.str();
    }
    emit(text, a.flags.out_path);
    return 0;
}

// -------------------------------------------------------------- contour ----

struct ContourArgs {
    double phon = bt::default_phon;
    std::string grid;  // comma-separated frequencies; empty = the 29 table rows
    CommonFlags flags;
};

int run_contour(const ContourArgs& a) {
    const bt::PhonLevel level(a.phon);
    std::vector<double> freqs;
    if (a.grid.empty()) {
        for (const auto& row : bt::iso226_table) freqs.push_back(row.frequency_hz);
    } else {
        std::istringstream in(a.grid);
        std::string item;
        while (std::getline(in, item, ',')) {
            try {
                freqs.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw std::invalid_argument("bad --grid entry '" + item + "'");
            }
        }
        if (freqs.empty()) throw std::invalid_argument("empty --grid");
    }

    std::vector<double> spl;
    spl.reserve(freqs.size());
    for (double f : freqs) spl.push_back(bt::elc_spl(f, level));

    std::string text;
    if (a.flags.as_json) {
        json doc;
        doc["schema_version"] = schema_version;
        doc["command"] = "contour";
        doc["conventions"] = conventions();
        doc["phon"] = a.phon;
        json pts = json::array();
        for (std::size_t i = 0; i < freqs.size(); ++i)
            pts.push_back(json{{"frequency_hz", freqs[i]}, {"spl_db", spl[i]}});
        doc["points"] = std::move(pts);
        text = doc.dump(2) + "\n";
    } else if (a.flags.as_csv) {
        std::ostringstream out;
        out << "frequency_hz,spl_db\n";
        for (std::size_t i = 0; i < freqs.size(); ++i)
            out << format_double("%.6g", freqs[i]) << ',' << format_double("%.4f", spl[i])
                << "\n";
        text = out.str();
    } else {
        std::ostringstream out;
        out << "equal-loudness contour at " << format_double("%.0f", a.phon) << " phon\n";
        for (std::size_t i = 0; i < freqs.size(); ++i)
            out << "  " << format_double("%8.1f", freqs[i]) << " Hz  "
                << format_double("%7.2f", spl[i]) << " dB SPL\n";
        text = out.str();
    }
    emit(text, a.flags.out_path);
    return 0;
}

// ------------------------------------------------------------- monitors ----

struct MonitorsArgs {
    std::string data_path;
    double smooth_octaves = bt::default_smooth_octaves;
    bool percentiles = false;
    CommonFlags flags;
};

int run_monitors(const MonitorsArgs& a) {
    const auto speakers = a.data_path.empty() ? bt::synthetic_monitor_dataset()
                                              : bt::load_speaker_dataset_file(a.data_path);
    const bt::ResponseCurve curve = bt::median_response(speakers, a.smooth_octaves);

    std::string text;
    if (a.flags.as_json) {
        json doc;
        doc["schema_version"] = schema_version;
        doc["command"] = "monitors";
        doc["conventions"] = conventions();
        doc["source"] = a.data_path.empty() ? "bundled-synthetic-36" : a.data_path;
        doc["speakers"] = speakers.size();
        doc["smooth_octaves"] = a.smooth_octaves;
        json pts = json::array();
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            json p{{"frequency_hz", curve.points[i].frequency_hz},
                   {"gain_db", curve.points[i].gain_db}};
            if (a.percentiles) {
                p["p25_db"] = curve.p25_db[i];
                p["p75_db"] = curve.p75_db[i];
            }
            pts.push_back(std::move(p));
        }
        doc["curve"] = std::move(pts);
        text = doc.dump(2) + "\n";
    } else if (a.flags.as_csv) {
        std::ostringstream out;
        out << (a.percentiles ? "frequency_hz,gain_db,p25_db,p75_db\n"
                              : "frequency_hz,gain_db\n");
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            out << format_double("%.4f", curve.points[i].frequency_hz) << ','
                << format_double("%.4f", curve.points[i].gain_db);
            if (a.percentiles)
                out << ',' << format_double("%.4f", curve.p25_db[i]) << ','
                    << format_double("%.4f", curve.p75_db[i]);
            out << "\n";
        }
        text = out.str();
    } else {
        std::ostringstream out;
        out << "median response of " << speakers.size() << " speakers, band ["
            << format_double("%.1f", curve.min_frequency()) << ", "
            << format_double("%.1f", curve.max_frequency()) << "] Hz\n";
        for (double f : {31.5, 37.06, 49.48, 63.0, 100.0, 200.0, 1000.0})
            if (f >= curve.min_frequency() && f <= curve.max_frequency())
                out << "  " << format_double("%8.2f", f) << " Hz  "
                    << format_double("%+7.2f", bt::response_at(curve, f)) << " dB\n";
        out << "  delta 49.48 -> 37.06 Hz: "
            << format_double("%+.2f", bt::speaker_gain_delta(curve, 49.48, 37.06)) << " dB\n";
        text = out.str();
    }
    emit(text, a.flags.out_path);
    return 0;
}

// ----------------------------------------------------------------- loss ----

struct LossArgs {
    double semitones = 0.0;
    std::string profile = "driven";
    double f0 = bt::driven_profile_f0_hz;
    double phon = bt::default_phon;
    std::string monitors_data;
    double smooth_octaves = bt::default_smooth_octaves;
    CommonFlags flags;
};

int run_loss(const LossArgs& a) {
    const bt::SpectralProfile profile = resolve_profile(a.profile, a.f0);
    const bt::CombinedCurve curve =
        bt::combined_response(load_monitor_curve(a.monitors_data, a.smooth_octaves),
                              bt::PhonLevel(a.phon));
    const bt::TranspositionReport report =
        bt::transposition_loss(profile, a.semitones, curve);

    std::string text;
    if (a.flags.as_json) {
        json doc;
        doc["schema_version"] = schema_version;
        doc["command"] = "loss";
        doc["conventions"] = conventions();
        doc["semitones"] = report.semitones;
        doc["phon"] = a.phon;
        json jp = json::array();
        for (const bt::Partial& p : profile.partials)
            jp.push_back(json{{"harmonic", p.harmonic_index},
                              {"frequency_hz", p.frequency_hz},
                              {"amplitude", p.amplitude}});
        doc["profile"] = std::move(jp);
        json deltas = json::array();
        for (const bt::PartialDelta& d : report.per_partial)
            deltas.push_back(json{{"harmonic", d.harmonic_index},
                                  {"f_from_hz", d.f_from_hz},
                                  {"f_to_hz", d.f_to_hz},
                                  {"delta_gain_db", d.delta_db}});
        doc["per_partial"] = std::move(deltas);
        doc["fundamental_delta_gain_db"] = report.fundamental_delta_db;
        doc["total_power_delta_db"] = report.total_power_delta_db;
        text = doc.dump(2) + "\n";
    } else {
        std::ostringstream out;
        out << "transposition of " << format_double("%+.2f", report.semitones)
            << " semitones at " << format_double("%.0f", a.phon) << " phon\n";
        for (const bt::PartialDelta& d : report.per_partial)
            out << "  harmonic " << d.harmonic_index << ": "
                << format_double("%8.2f", d.f_from_hz) << " -> "
                << format_double("%8.2f", d.f_to_hz) << " Hz  "
                << format_double("%+6.2f", d.delta_db) << " dB\n";
        out << "  fundamental delta " << format_double("%+.2f", report.fundamental_delta_db)
            << " dB (gain)\n";
        out << "  total power delta " << format_double("%+.2f", report.total_power_delta_db)
            << " dB\n";
        text = out.str();
    }
    emit(text, a.flags.out_path);
    return 0;
}

// --------------------------------------------------------------- advise ----

std::string chroma_name(const bt::Note& n) {
    std::string full = bt::note_name(n);
    while (!full.empty() && (std::isdigit(full.back()) || full.back() == '-')) full.pop_back();
    return full;
}

struct AdviseArgs {
    std::string key;
    std::string sample_path;
    double f0 = bt::driven_profile_f0_hz;
    double phon = bt::default_phon;
    std::string monitors_data;
    double smooth_octaves = bt::default_smooth_octaves;
    std::string profile = "fundamental";
    int range_low = -6;
    int range_high = 6;
    double f0_window_s = bt::default_f0_window_s;
    CommonFlags flags;
};

int run_advise(const AdviseArgs& a) {
    const bt::Note root = bt::parse_note_name(a.key);
    double sample_f0 = a.f0;
    if (!a.sample_path.empty()) {
        const bt::AudioClip clip = bt::read_wav(a.sample_path);
        sample_f0 = bt::steady_f0(bt::estimate_f0_track(clip, a.f0_window_s));
    }
    const bt::CombinedCurve curve =
        bt::combined_response(load_monitor_curve(a.monitors_data, a.smooth_octaves),
                              bt::PhonLevel(a.phon));
    const bt::SpectralProfile profile = resolve_profile(a.profile, sample_f0);
    const bt::KeyRecommendation rec =
        bt::recommend_key(root, sample_f0, curve, a.range_low, a.range_high, profile);

    // per-partial breakdown: what each partial gains moving from the forced
    // baseline pitch to the top-ranked candidate's pitch
    struct BreakdownRow {
        int harmonic;
        double f_from, f_to;
        bool in_band;
        double delta_db;
    };
    std::vector<BreakdownRow> breakdown;
    const bt::KeyCandidate& top = rec.ranked.front();
    if (top.feasible && rec.baseline.feasible) {
        for (const bt::Partial& p : profile.partials) {
            BreakdownRow row{p.harmonic_index, p.harmonic_index * rec.baseline.pitch_hz,
                             p.harmonic_index * top.pitch_hz, true, 0.0};
            try {
                row.delta_db = curve.gain_db(row.f_to) - curve.gain_db(row.f_from);
            } catch (const std::out_of_range&) {
                row.in_band = false;
            }
            breakdown.push_back(row);
        }
    }

    std::string text;
    if (a.flags.as_json) {
        json doc;
        doc["schema_version"] = schema_version;
        doc["command"] = "advise";
        doc["conventions"] = conventions();
        doc["key"] = chroma_name(root);
        doc["sample_f0_hz"] = sample_f0;
        doc["phon"] = a.phon;
        auto to_json = [](const bt::KeyCandidate& c) {
            json j;
            j["song_semitones"] = c.song_semitones;
            j["realized_root"] = bt::note_name(c.realized_root);
            j["pitch_hz"] = c.pitch_hz;
            j["feasible"] = c.feasible;
            if (c.feasible) {
                j["total_gain_db"] = c.total_gain_db;
                j["delta_vs_baseline_db"] = c.delta_vs_baseline_db;
            }
            return j;
        };
        doc["baseline"] = to_json(rec.baseline);
        json cands = json::array();
        for (const bt::KeyCandidate& c : rec.ranked) cands.push_back(to_json(c));
        doc["candidates"] = std::move(cands);
        json rows = json::array();
        for (const BreakdownRow& r : breakdown) {
            json jr{{"harmonic", r.harmonic},
                    {"f_from_hz", r.f_from},
                    {"f_to_hz", r.f_to},
                    {"in_band", r.in_band}};
            if (r.in_band) jr["delta_gain_db"] = r.delta_db;
            rows.push_back(std::move(jr));
        }
        doc["per_partial_top_vs_baseline"] = std::move(rows);
        text = doc.dump(2) + "\n";
    } else {
        std::ostringstream out;
        out << "song key " << chroma_name(root) << ", 808 sample f0 "
            << format_double("%.2f", sample_f0) << " Hz, " << format_double("%.0f", a.phon)
            << " phon\n";
        out << "  song shift | 808 plays |   pitch   | total gain | vs baseline\n";
        for (const bt::KeyCandidate& c : rec.ranked) {
            out << "  " << format_double("%+10.0f", static_cast<double>(c.song_semitones))
                << " | " << bt::note_name(c.realized_root);
            for (std::size_t pad = bt::note_name(c.realized_root).size(); pad < 9; ++pad)
                out << ' ';
            out << " | " << format_double("%7.2f", c.pitch_hz) << " Hz";
            if (c.feasible)
                out << " | " << format_double("%+7.2f", c.total_gain_db) << " dB | "
                    << format_double("%+7.2f", c.delta_vs_baseline_db) << " dB";
            else
                out << " | out of band |";
            out << "\n";
        }
        if (!breakdown.empty()) {
            out << "per-partial, top candidate vs baseline:\n";
            for (const BreakdownRow& r : breakdown) {
                out << "  harmonic " << r.harmonic << ": "
                    << format_double("%8.2f", r.f_from) << " -> "
                    << format_double("%8.2f", r.f_to) << " Hz  ";
                if (r.in_band)
                    out << format_double("%+6.2f", r.delta_db) << " dB";
                else
                    out << "out of band";
                out << "\n";
            }
        }
        text = out.str();
    }
    emit(text, a.flags.out_path);
    return 0;
}

// --------------------------------------------------------------- corpus ----

struct CorpusArgs {
    std::string manifest_path;
    std::string bands = "default";
    bool normalize = false;
    CommonFlags flags;
};

std::vector<bt::Band> parse_bands(const std::string& text, double nyquist_hz) {
    if (text == "default") return bt::default_bands(nyquist_hz);
    std::vector<bt::Band> bands;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("bad --bands entry '" + item + "' (want low:high)");
        try {
            bands.push_back(bt::Band{std::stod(item.substr(0, colon)),
                                     std::stod(item.substr(colon + 1))});
        } catch (const std::exception&) {
            throw std::invalid_argument("bad --bands entry '" + item + "'");
        }
    }
    if (bands.empty()) throw std::invalid_argument("empty --bands");
    return bands;
}

int run_corpus(const CorpusArgs& a) {
    const bt::CorpusManifest manifest = bt::load_manifest(a.manifest_path);
    // the band list has to clear every file's Nyquist; probe the first file
    double nyquist = 0.0;
    std::string probe_error;
    for (const bt::ManifestEntry& e : manifest.entries) {
        try {
            nyquist = bt::read_wav(e.path).sample_rate / 2.0;
            break;
        } catch (const std::exception& err) {
            probe_error = err.what();
        }
    }
    if (nyquist == 0.0)
        throw std::invalid_argument("corpus: no decodable entries (" + probe_error + ")");
    const std::vector<bt::Band> bands = parse_bands(a.bands, nyquist);
    const bt::EvolutionResult result = bt::evolution(manifest, bands, a.normalize);

    for (const bt::SkippedFile& s : result.skipped)
        std::cerr << "skipped " << s.path << ": " << s.reason << "\n";

    std::string text;
    if (a.flags.as_csv) {
        std::ostringstream out;
        out << "year,band_low_hz,band_high_hz,mean_power_density\n";
        for (std::size_t y = 0; y < result.matrix.years.size(); ++y)
            for (std::size_t b = 0; b < bands.size(); ++b)
                out << result.matrix.years[y] << ',' << format_double("%.2f", bands[b].low_hz)
                    << ',' << format_double("%.2f", bands[b].high_hz) << ','
                    << format_double("%.10g", result.matrix.values[y][b]) << "\n";
        text = out.str();
    } else if (a.flags.as_json) {
        json doc;
        doc["schema_version"] = schema_version;
        doc["command"] = "corpus";
        doc["conventions"] = conventions();
        doc["normalized"] = result.matrix.normalized;
        json jb = json::array();
        for (const bt::Band& b : bands)
            jb.push_back(json{{"low_hz", b.low_hz}, {"high_hz", b.high_hz}});
        doc["bands"] = std::move(jb);
        doc["years"] = result.matrix.years;
        doc["values"] = result.matrix.values;
        json skipped = json::array();
        for (const bt::SkippedFile& s : result.skipped)
            skipped.push_back(json{{"path", s.path}, {"reason", s.reason}});
        doc["skipped"] = std::move(skipped);
        text = doc.dump(2) + "\n";
    } else {
        std::ostringstream out;
        out << "corpus of " << manifest.entries.size() << " entries, "
            << result.matrix.years.size() << " years, " << bands.size() << " bands"
            << (result.matrix.normalized ? " (per-band normalized)" : "") << "\n";
        for (std::size_t y = 0; y < result.matrix.years.size(); ++y) {
            out << "  " << result.matrix.years[y] << ":";
            for (double v : result.matrix.values[y]) out << " " << format_double("%9.4g", v);
            out << "\n";
        }
        text = out.str();
    }
    emit(text, a.flags.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);

    bt::RunConfig cfg;
    try {
        if (const char* env = std::getenv("BASSTUNE_CONFIG"))
            cfg = bt::load_config_file(env);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{
        "basstune: quantify what transposing a sub-bass drum voice costs "
        "through loudspeakers and the ear, and whether to move the song key "
        "instead"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "synthesize an 808-style bass-drum voice");
    synth->add_option("-o,--output", synth_args.output, "output WAV path")->required();
    synth->add_option("--f0", synth_args.params.f0_end_hz, "steady fundamental, Hz");
    synth->add_option("--sweep", synth_args.params.sweep_semitones,
                      "initial pitch sweep, semitones");
    synth->add_option("--sweep-duration", synth_args.params.sweep_duration_s,
                      "sweep settle time, s");
    synth->add_option("--decay", synth_args.params.amp_decay_time_s, "time to -60 dB, s");
    synth->add_option("--drive", synth_args.params.drive, "waveshaper amount (0 = pure sine)");
    synth->add_option("--duration", synth_args.params.duration_s, "length, s");
    synth->add_option("--rate", synth_args.params.sample_rate, "sample rate, Hz");
    synth->add_flag("--float32", synth_args.float32, "write 32-bit float WAV");
    add_output_flags(synth, synth_args.flags, false);

    AnalyzeArgs analyze_args;
    analyze_args.window_s = cfg.f0_window_s;
    analyze_args.stft_window = cfg.stft_window;
    analyze_args.stft_hop = cfg.stft_hop;
    auto* analyze = app.add_subcommand("analyze", "f0 track, sweep range, partials, histogram");
    analyze->add_option("wav", analyze_args.wavs, "input WAV files")->required();
    analyze->add_option("--window", analyze_args.window_s, "f0 analysis window, s");
    analyze->add_option("--band-low", analyze_args.band_lo, "f0 search band low edge, Hz");
    analyze->add_option("--band-high", analyze_args.band_hi, "f0 search band high edge, Hz");
    analyze->add_option("--harmonics", analyze_args.harmonics,
                        "number of partials to track (0 = skip)");
    analyze->add_option("--stft-window", analyze_args.stft_window, "STFT window, samples");
    analyze->add_option("--stft-hop", analyze_args.stft_hop, "STFT hop, samples");
    add_output_flags(analyze, analyze_args.flags);

    ContourArgs contour_args;
    contour_args.phon = cfg.phon;
    auto* contour = app.add_subcommand("contour", "ISO 226:2003 equal-loudness contour");
    contour->add_option("--phon", contour_args.phon, "loudness level, phon [20, 80]");
    contour->add_option("--grid", contour_args.grid,
                        "comma-separated frequencies (default: the 29 table rows)");
    add_output_flags(contour, contour_args.flags);

    MonitorsArgs monitors_args;
    monitors_args.data_path = cfg.monitors_data;
    auto* monitors = app.add_subcommand("monitors", "aggregate loudspeaker response");
    monitors->add_option("--data", monitors_args.data_path,
                         "speaker,frequency_hz,gain_db CSV (default: bundled synthetic)");
    monitors->add_option("--smooth", monitors_args.smooth_octaves,
                         "median smoothing width, octaves");
    monitors->add_flag("--percentiles", monitors_args.percentiles,
                       "include the 25th/75th percentile band");
    add_output_flags(monitors, monitors_args.flags);

    LossArgs loss_args;
    loss_args.phon = cfg.phon;
    loss_args.monitors_data = cfg.monitors_data;
    auto* loss = app.add_subcommand("loss", "transposition gain loss of a harmonic complex");
    loss->add_option("--semitones", loss_args.semitones, "transposition (negative = down)")
        ->required();
    loss->add_option("--profile", loss_args.profile,
                     "driven | fundamental | path to a profile table");
    loss->add_option("--f0", loss_args.f0, "fundamental for --profile fundamental, Hz");
    loss->add_option("--phon", loss_args.phon, "loudness level, phon");
    loss->add_option("--monitors", loss_args.monitors_data, "speaker dataset CSV");
    add_output_flags(loss, loss_args.flags, false);

    AdviseArgs advise_args;
    advise_args.phon = cfg.phon;
    advise_args.monitors_data = cfg.monitors_data;
    advise_args.f0_window_s = cfg.f0_window_s;
    auto* advise = app.add_subcommand(
        "advise", "rank song-key transpositions against the 808's natural register");
    advise->add_option("--key", advise_args.key, "song key root, e.g. D or Eb")->required();
    advise->add_option("--sample", advise_args.sample_path,
                       "808 sample WAV (its steady f0 is measured)");
    advise->add_option("--f0", advise_args.f0, "sample fundamental when no WAV given, Hz");
    advise->add_option("--phon", advise_args.phon, "loudness level, phon");
    advise->add_option("--monitors", advise_args.monitors_data, "speaker dataset CSV");
    advise->add_option("--profile", advise_args.profile,
                       "fundamental | driven | path to a profile table");
    advise->add_option("--range-low", advise_args.range_low, "lowest song shift, semitones");
    advise->add_option("--range-high", advise_args.range_high, "highest song shift, semitones");
    add_output_flags(advise, advise_args.flags, false);

    CorpusArgs corpus_args;
    auto* corpus = app.add_subcommand("corpus", "band-power evolution over a local corpus");
    corpus->add_option("--manifest", corpus_args.manifest_path, "path,year manifest CSV")
        ->required();
    corpus->add_option("--bands", corpus_args.bands,
                       "'default' or comma-separated low:high pairs, Hz");
    corpus->add_flag("--normalize", corpus_args.normalize, "normalize each band to unit mean");
    add_output_flags(corpus, corpus_args.flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return 2;
    }

    try {
        if (synth->parsed()) return run_synth(synth_args);
        if (analyze->parsed()) return run_analyze(analyze_args);
        if (contour->parsed()) return run_contour(contour_args);
        if (monitors->parsed()) return run_monitors(monitors_args);
        if (loss->parsed()) return run_loss(loss_args);
        if (advise->parsed()) return run_advise(advise_args);
        if (corpus->parsed()) return run_corpus(corpus_args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
