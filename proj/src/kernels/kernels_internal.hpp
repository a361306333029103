// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "polystruct/kernels.hpp"

namespace polystruct::kernels::detail {

// kLowHalfMask[j] selects the bit positions p < 64 with bit j of p clear.
inline constexpr std::uint64_t kLowHalfMask[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

// Moves bit p to bit p ^ y_lo within one word.
inline std::uint64_t permute_in_word(std::uint64_t w, unsigned y_lo) noexcept {
    for (unsigned j = 0; j < 6; ++j) {
        if (y_lo & (1u << j)) {
            const unsigned s = 1u << j;
            w = ((w & kLowHalfMask[j]) << s) | ((w >> s) & kLowHalfMask[j]);
        }
    }
    return w;
}

extern const KernelTable kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Table;
#endif

} // namespace polystruct::kernels::detail
