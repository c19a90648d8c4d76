// Copyright 2026 The bellsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BELLSIM_PHILOX_HPP
#define BELLSIM_PHILOX_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>

namespace bellsim {

/// Counter-based generator: Philox-4x32 with 10 rounds (Salmon et al.,
/// "Parallel random numbers: as easy as 1, 2, 3", SC 2011).
///
/// The output is a pure function of (seed, stream, block index), so a
/// simulation can hand stream i to trial i and get the same numbers no
/// matter how trials are partitioned across threads. The stream id occupies
/// the high counter words and the block index the low ones; distinct streams
/// can never collide.
class PhiloxRng {
  public:
    explicit PhiloxRng(std::uint64_t seed, std::uint64_t stream = 0)
        : counter_{0u, 0u, static_cast<std::uint32_t>(stream),
                   static_cast<std::uint32_t>(stream >> 32)},
          key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    std::uint32_t next_u32() {
        if (cursor_ == 4) {
            generate_block();
        }
        return block_[cursor_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound), bias-free via masked rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) {
            throw std::invalid_argument("next_below: bound must be positive");
        }
        const std::uint64_t mask = std::bit_ceil(bound) - 1;
        for (;;) {
            const std::uint64_t v = next_u64() & mask;
            if (v < bound) {
                return v;
            }
        }
    }

    /// One 128-bit block for the given counter/key, 10 rounds.
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        ctr = round_once(ctr, key);
        for (int r = 1; r < 10; ++r) {
            key[0] += 0x9E3779B9u;  // golden ratio
            key[1] += 0xBB67AE85u;  // sqrt(3) - 1
            ctr = round_once(ctr, key);
        }
        return ctr;
    }

  private:
    static std::array<std::uint32_t, 4> round_once(const std::array<std::uint32_t, 4>& ctr,
                                                   const std::array<std::uint32_t, 2>& key) {
        const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }

    void generate_block() {
        block_ = block(counter_, key_);
        if (++counter_[0] == 0) {
            ++counter_[1];  // block index is the low 64 bits; streams are untouched
        }
        cursor_ = 0;
    }

    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> block_{};
    int cursor_ = 4;
};

}  // namespace bellsim

#endif  // BELLSIM_PHILOX_HPP
