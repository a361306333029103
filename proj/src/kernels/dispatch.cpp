// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace polystruct::kernels {

const KernelTable& scalar_table() noexcept { return detail::kScalarTable; }

const KernelTable* avx2_table() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &detail::kAvx2Table : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept {
    if (const char* forced = std::getenv("POLYSTRUCT_KERNELS")) {
        if (std::string_view(forced) == "scalar") return scalar_table();
    }
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
}

} // namespace

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

} // namespace polystruct::kernels
