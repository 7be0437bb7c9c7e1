/*
   Copyright 2026 The charvar Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <cmath>

namespace charvar {

/**
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * The 64-bit seed is the key. The 128-bit counter is split into a 64-bit
 * stream index (high words) and a 64-bit block index (low words), so every
 * (seed, stream) pair names an independent sequence and streams can be
 * handed to workers in any order without changing what they produce.
 * Each block yields two 64-bit outputs: words (0,1) then (2,3), low word first.
 */
class Philox4x32 {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)}
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        if (pos_ == 2) {
            out_ = generate(ctr_, key_);
            if (++ctr_[0] == 0)
                ++ctr_[1];
            pos_ = 0;
        }
        const std::size_t i = 2 * pos_++;
        return static_cast<std::uint64_t>(out_[i]) | (static_cast<std::uint64_t>(out_[i + 1]) << 32);
    }

    /// Ten Philox rounds applied to one counter block.
    static Block generate(const Block& ctr, const Key& key)
    {
        constexpr std::uint32_t m0 = 0xD2511F53u;
        constexpr std::uint32_t m1 = 0xCD9E8D57u;
        constexpr std::uint32_t w0 = 0x9E3779B9u;
        constexpr std::uint32_t w1 = 0xBB67AE85u;
        std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
        std::uint32_t k0 = key[0], k1 = key[1];
#pragma GCC unroll 10
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * c2;
            const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
            const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
            c1 = static_cast<std::uint32_t>(p1);
            c3 = static_cast<std::uint32_t>(p0);
            c0 = n0;
            c2 = n2;
            k0 += w0;
            k1 += w1;
        }
        return {c0, c1, c2, c3};
    }

private:
    Key key_;
    Block ctr_;
    Block out_{};
    std::size_t pos_ = 2;
};

/// Stream-index namespaces. The top 16 bits name the purpose.
enum class StreamPurpose : std::uint64_t {
    sampling = 0,
    fresh_batch = 1,
    test_words = 2,
    sweep = 3,
    auxiliary = 4,
};

inline std::uint64_t stream_id(StreamPurpose purpose, std::uint64_t index)
{
    return (static_cast<std::uint64_t>(purpose) << 48) | (index & ((1ull << 48) - 1));
}

/**
 * A Philox stream plus the variate transforms drawn from it.
 *
 * The transforms are spelled out rather than taken from <random> so that a
 * (seed, stream) pair produces the same doubles on every standard library:
 * uniforms are the top 53 bits of one output scaled by 2^-53, Gaussians use
 * the Marsaglia polar method (pairs, second value cached), and bounded
 * integers reject the incomplete top range of a 64-bit output.
 */
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) : engine_(seed, stream) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal variate.
    double gaussian()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double x, y, r2;
        do {
            x = 2.0 * uniform() - 1.0;
            y = 2.0 * uniform() - 1.0;
            r2 = x * x + y * y;
        } while (r2 >= 1.0 || r2 == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(r2) / r2);
        spare_ = y * scale;
        has_spare_ = true;
        return x * scale;
    }

    /// Uniform integer in [0, n).
    int below(int n)
    {
        const std::uint64_t range = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % range;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<int>(x % range);
    }

    std::uint64_t bits() { return engine_(); }

private:
    Philox4x32 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace charvar
