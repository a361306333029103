// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace polystruct {

/// Counter-based generator: draw i of stream s under seed k is a pure function
/// mix(k, s, i), so any sample can be regenerated independently and parallel
/// partitions of a sample range reproduce the serial stream exactly.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix(seed ^ 0x9E3779B97F4A7C15ULL) ^ mix(stream + 0xD1B54A32D192ED03ULL)) {}

    std::uint64_t at(std::uint64_t counter) const noexcept { return mix(key_ + mix(counter)); }

    std::uint64_t next() noexcept { return at(counter_++); }

    /// Uniform in [0, bound) for bound >= 1 (multiply-shift, bias < 2^-64 * bound).
    std::uint64_t below(std::uint64_t bound) noexcept {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    void seek(std::uint64_t counter) noexcept { counter_ = counter; }
    std::uint64_t position() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace polystruct
