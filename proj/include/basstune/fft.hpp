// include/basstune/fft.hpp

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

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "basstune/common.hpp"

namespace basstune::fft {

using cpx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// In-place iterative radix-2 transform. n must be a power of two.
inline void transform_pow2(std::vector<cpx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft: size must be a power of two");

    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? two_pi : -two_pi) / static_cast<double>(len);
        const cpx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cpx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cpx u = a[i + k];
                cpx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv_n;
    }
}

/// Transform of arbitrary length via Bluestein's chirp-z algorithm.
inline std::vector<cpx> transform_any(std::span<const cpx> input, bool inverse) {
    const std::size_t n = input.size();
    if (n == 0) throw std::invalid_argument("fft: empty input");
    if (is_power_of_two(n)) {
        std::vector<cpx> a(input.begin(), input.end());
        transform_pow2(a, inverse);
        return a;
    }

    // x_k * exp(-i*pi*k^2/n), convolved with the conjugate chirp
    const std::size_t m = next_power_of_two(2 * n - 1);
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cpx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the phase argument small for large k
        const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % (2 * n);
        const double ang = sign * pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = cpx(std::cos(ang), std::sin(ang));
    }

    std::vector<cpx> a(m, cpx(0.0, 0.0));
    std::vector<cpx> b(m, cpx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) a[k] = input[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);

    transform_pow2(a, false);
    transform_pow2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    transform_pow2(a, true);

    std::vector<cpx> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& x : out) x *= inv_n;
    }
    return out;
}

/// Forward transform of a real signal; returns bins 0..n/2 (n/2+1 values).
inline std::vector<cpx> real_forward(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("fft: input too short");

    if (n % 2 == 0) {
        // pack even/odd samples into a half-size complex transform
        const std::size_t h = n / 2;
        std::vector<cpx> packed(h);
        for (std::size_t k = 0; k < h; ++k) packed[k] = cpx(x[2 * k], x[2 * k + 1]);
        std::vector<cpx> z = transform_any(packed, false);

        std::vector<cpx> out(h + 1);
        for (std::size_t k = 0; k <= h; ++k) {
            const cpx zk = (k < h) ? z[k] : z[0];
            const cpx znk = std::conj(z[(h - k) % h]);
            const cpx even = 0.5 * (zk + znk);
            const cpx odd = cpx(0.0, -0.5) * (zk - znk);
            const double ang = -pi * static_cast<double>(k) / static_cast<double>(h);
            out[k] = even + cpx(std::cos(ang), std::sin(ang)) * odd;
        }
        return out;
    }

    std::vector<cpx> a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = cpx(x[k], 0.0);
    std::vector<cpx> full = transform_any(a, false);
    full.resize(n / 2 + 1);
    return full;
}

}  // namespace basstune::fft
