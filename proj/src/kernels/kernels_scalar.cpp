// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>

#include "kernels_internal.hpp"

namespace polystruct::kernels::detail {

namespace {

std::uint64_t popcount_scalar(const std::uint64_t* w, std::size_t count) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < count; ++i) total += static_cast<std::uint64_t>(std::popcount(w[i]));
    return total;
}

void xor_words_scalar(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) dst[i] = a[i] ^ b[i];
}

void f2_derivative_scalar(std::uint64_t* dst, const std::uint64_t* src, std::uint64_t y, unsigned n) {
    const std::size_t words = f2_word_count(n);
    const std::uint64_t y_hi = y >> 6;
    const unsigned y_lo = static_cast<unsigned>(y & 63u);
    for (std::size_t i = 0; i < words; ++i) {
        const std::uint64_t w = permute_in_word(src[i ^ y_hi], y_lo);
        dst[i] = src[i] ^ w;
    }
}

void f2_mobius_scalar(std::uint64_t* words, unsigned n) {
    const std::size_t count = f2_word_count(n);
    const unsigned in_word = n < 6 ? n : 6;
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t w = words[i];
        for (unsigned j = 0; j < in_word; ++j) w ^= (w & kLowHalfMask[j]) << (1u << j);
        words[i] = w;
    }
    for (std::size_t stride = 1; stride < count; stride <<= 1)
        for (std::size_t base = 0; base < count; base += 2 * stride)
            for (std::size_t i = base; i < base + stride; ++i) words[i + stride] ^= words[i];
}

void zq_histogram_scalar(const Elem* values, std::size_t count, unsigned q, std::uint64_t* counts) {
    std::uint64_t local[kMaxModulus + 1] = {};
    for (std::size_t i = 0; i < count; ++i) ++local[values[i]];
    for (unsigned v = 0; v < q; ++v) counts[v] += local[v];
}

void zq_sub_mod_scalar(Elem* dst, const Elem* a, const Elem* b, std::size_t count, unsigned q) {
    for (std::size_t i = 0; i < count; ++i) {
        const unsigned t = a[i] + q - b[i];
        dst[i] = static_cast<Elem>(t >= q ? t - q : t);
    }
}

void zq_axpy_scalar(Elem* dst, const Elem* x, Elem lambda, std::size_t count, unsigned q) {
    for (std::size_t i = 0; i < count; ++i) dst[i] = static_cast<Elem>((dst[i] + unsigned{lambda} * x[i]) % q);
}

void walsh_hadamard_scalar(std::int64_t* data, unsigned n) {
    const std::size_t len = std::size_t{1} << n;
    for (std::size_t h = 1; h < len; h <<= 1)
        for (std::size_t base = 0; base < len; base += 2 * h)
            for (std::size_t i = base; i < base + h; ++i) {
                const std::int64_t u = data[i], v = data[i + h];
                data[i] = u + v;
                data[i + h] = u - v;
            }
}

} // namespace

const KernelTable kScalarTable = {
    "scalar",
    popcount_scalar,
    xor_words_scalar,
    f2_derivative_scalar,
    f2_mobius_scalar,
    zq_histogram_scalar,
    zq_sub_mod_scalar,
    zq_axpy_scalar,
    walsh_hadamard_scalar,
};

} // namespace polystruct::kernels::detail
