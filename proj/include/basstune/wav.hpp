// include/basstune/wav.hpp

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
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "basstune/audio.hpp"

namespace basstune {

// Linear-PCM WAV only: 16/24-bit integer and 32-bit float, mono or
// multichannel (channels are averaged on read). No other containers.

namespace detail {

inline std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline void append_u32(std::vector<unsigned char>& v, std::uint32_t x) {
    v.push_back(static_cast<unsigned char>(x & 0xff));
    v.push_back(static_cast<unsigned char>((x >> 8) & 0xff));
    v.push_back(static_cast<unsigned char>((x >> 16) & 0xff));
    v.push_back(static_cast<unsigned char>((x >> 24) & 0xff));
}

inline void append_u16(std::vector<unsigned char>& v, std::uint16_t x) {
    v.push_back(static_cast<unsigned char>(x & 0xff));
    v.push_back(static_cast<unsigned char>((x >> 8) & 0xff));
}

}  // namespace detail

inline AudioClip read_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open WAV file '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw std::invalid_argument("'" + path + "' is not a RIFF/WAVE file");

    int format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    std::size_t data_off = 0, data_len = 0;
    bool have_fmt = false;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t chunk_len = detail::read_u32(&bytes[pos + 4]);
        const unsigned char* body = bytes.data() + pos + 8;
        if (pos + 8 + chunk_len > bytes.size())
            throw std::invalid_argument("'" + path + "': truncated chunk");
        if (std::memcmp(&bytes[pos], "fmt ", 4) == 0) {
            if (chunk_len < 16) throw std::invalid_argument("'" + path + "': short fmt chunk");
            format = detail::read_u16(body + 0);
            channels = detail::read_u16(body + 2);
            sample_rate = detail::read_u32(body + 4);
            bits = detail::read_u16(body + 14);
            if (format == 0xFFFE) {  // WAVE_FORMAT_EXTENSIBLE: code sits in the GUID
                if (chunk_len < 40)
                    throw std::invalid_argument("'" + path + "': short extensible fmt chunk");
                format = detail::read_u16(body + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(&bytes[pos], "data", 4) == 0) {
            data_off = pos + 8;
            data_len = chunk_len;
        }
        pos += 8 + chunk_len + (chunk_len & 1);  // chunks are word-aligned
    }

    if (!have_fmt || data_len == 0)
        throw std::invalid_argument("'" + path + "': missing fmt or data chunk");
    if (channels < 1) throw std::invalid_argument("'" + path + "': zero channels");
    if (sample_rate < static_cast<std::uint32_t>(min_sample_rate))
        throw std::invalid_argument("'" + path + "': sample rate " +
                                    std::to_string(sample_rate) + " below 8000 Hz");

    const bool pcm_int = (format == 1) && (bits == 16 || bits == 24);
    const bool pcm_f32 = (format == 3) && bits == 32;
    if (!pcm_int && !pcm_f32)
        throw std::invalid_argument("'" + path + "': unsupported format (code " +
                                    std::to_string(format) + ", " + std::to_string(bits) +
                                    " bit); expected 16/24-bit PCM or 32-bit float");

    const std::size_t bytes_per_sample = static_cast<std::size_t>(bits) / 8;
    const std::size_t frame_bytes = bytes_per_sample * static_cast<std::size_t>(channels);
    const std::size_t n_frames = data_len / frame_bytes;
    if (n_frames == 0) throw std::invalid_argument("'" + path + "': empty data chunk");

    AudioClip clip;
    clip.sample_rate = static_cast<int>(sample_rate);
    clip.samples.resize(n_frames);
    const unsigned char* d = bytes.data() + data_off;
    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (int c = 0; c < channels; ++c) {
            const unsigned char* s = d + i * frame_bytes + c * bytes_per_sample;
            if (bits == 16) {
                const std::int16_t v = static_cast<std::int16_t>(s[0] | (s[1] << 8));
                acc += v / 32768.0;
            } else if (bits == 24) {
                std::int32_t v = s[0] | (s[1] << 8) | (s[2] << 16);
                if (v & 0x800000) v |= ~0xFFFFFF;  // sign extend
                acc += v / 8388608.0;
            } else {
                std::uint32_t u = detail::read_u32(s);
                float f;
                std::memcpy(&f, &u, sizeof f);
                acc += static_cast<double>(f);
            }
        }
        clip.samples[i] = acc / channels;  // sub-bass content is essentially mono
    }
    return clip;
}

enum class WavEncoding { pcm16, float32 };

inline void write_wav(const std::string& path, const AudioClip& clip,
                      WavEncoding encoding = WavEncoding::pcm16) {
    clip.validate();
    const bool f32 = encoding == WavEncoding::float32;
    const std::uint16_t bits = f32 ? 32 : 16;
    const std::uint32_t data_len =
        static_cast<std::uint32_t>(clip.samples.size() * (bits / 8));

    std::vector<unsigned char> out;
    out.reserve(44 + data_len);
    const char* head = "RIFF";
    out.insert(out.end(), head, head + 4);
    detail::append_u32(out, 36 + data_len);
    const char* wavefmt = "WAVEfmt ";
    out.insert(out.end(), wavefmt, wavefmt + 8);
    detail::append_u32(out, 16);
    detail::append_u16(out, f32 ? 3 : 1);
    detail::append_u16(out, 1);  // mono
    detail::append_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
    detail::append_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * (bits / 8));
    detail::append_u16(out, bits / 8);
    detail::append_u16(out, bits);
    const char* data = "data";
    out.insert(out.end(), data, data + 4);
    detail::append_u32(out, data_len);

    for (double s : clip.samples) {
        if (f32) {
            const float f = static_cast<float>(s);
            std::uint32_t u;
            std::memcpy(&u, &f, sizeof u);
            detail::append_u32(out, u);
        } else {
            // symmetric with the read-side /32768 so round-trips stay within
            // half a quantization step
            const long v = std::clamp<long>(std::lround(s * 32768.0), -32768, 32767);
            detail::append_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
        }
    }

    std::ofstream of(path, std::ios::binary | std::ios::trunc);
    if (!of) throw std::invalid_argument("cannot write WAV file '" + path + "'");
    of.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
    if (!of) throw std::runtime_error("short write to '" + path + "'");
}

}  // namespace basstune
