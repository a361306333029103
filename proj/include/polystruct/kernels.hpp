// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Data-parallel inner loops behind the exhaustive analyses.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The active table is chosen once at first use from CPUID; setting
// POLYSTRUCT_KERNELS=scalar in the environment forces the reference path.
//
// Bit-packed F_2 tables: a function F_2^n -> F_2 is stored LSB-first, bit x of
// word x/64 holding f(x) where x = sum_i x_{i+1} 2^i. For n < 6 a single word is
// used and the bits at positions >= 2^n are kept zero.

#include <cstddef>
#include <cstdint>
#include <span>

#include "polystruct/gf.hpp"

namespace polystruct::kernels {

struct KernelTable {
    const char* name;
    std::uint64_t (*popcount)(const std::uint64_t* words, std::size_t count);
    void (*xor_words)(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b, std::size_t count);
    // dst[x] = src[x] ^ src[x ^ y] over a 2^n-bit table.
    void (*f2_derivative)(std::uint64_t* dst, const std::uint64_t* src, std::uint64_t y, unsigned n);
    // In-place binary Moebius transform (ANF <-> truth table), an involution.
    void (*f2_mobius)(std::uint64_t* words, unsigned n);
    // counts[v] += #{i : values[i] == v} for v < q.
    void (*zq_histogram)(const Elem* values, std::size_t count, unsigned q, std::uint64_t* counts);
    // dst[i] = (a[i] - b[i]) mod q.
    void (*zq_sub_mod)(Elem* dst, const Elem* a, const Elem* b, std::size_t count, unsigned q);
    // dst[i] = (dst[i] + lambda * x[i]) mod q.
    void (*zq_axpy)(Elem* dst, const Elem* x, Elem lambda, std::size_t count, unsigned q);
    // In-place unnormalized Walsh-Hadamard transform of length 2^n.
    void (*walsh_hadamard)(std::int64_t* data, unsigned n);
};

const KernelTable& scalar_table() noexcept;
/// The AVX2 table, or nullptr when the CPU or build lacks AVX2.
const KernelTable* avx2_table() noexcept;
/// Table used by the library.
const KernelTable& active() noexcept;

/// Number of 64-bit words holding a 2^n-bit table.
constexpr std::size_t f2_word_count(unsigned n) noexcept {
    return n >= 6 ? (std::size_t{1} << (n - 6)) : 1;
}

inline std::uint64_t popcount(std::span<const std::uint64_t> w) { return active().popcount(w.data(), w.size()); }

inline void xor_words(std::span<std::uint64_t> dst, std::span<const std::uint64_t> a,
                      std::span<const std::uint64_t> b) {
    active().xor_words(dst.data(), a.data(), b.data(), dst.size());
}

inline void f2_derivative(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::uint64_t y,
                          unsigned n) {
    active().f2_derivative(dst.data(), src.data(), y, n);
}

inline void f2_mobius(std::span<std::uint64_t> words, unsigned n) { active().f2_mobius(words.data(), n); }

inline void zq_histogram(std::span<const Elem> values, unsigned q, std::uint64_t* counts) {
    active().zq_histogram(values.data(), values.size(), q, counts);
}

inline void zq_sub_mod(std::span<Elem> dst, std::span<const Elem> a, std::span<const Elem> b, unsigned q) {
    active().zq_sub_mod(dst.data(), a.data(), b.data(), dst.size(), q);
}

inline void zq_axpy(std::span<Elem> dst, std::span<const Elem> x, Elem lambda, unsigned q) {
    active().zq_axpy(dst.data(), x.data(), lambda, dst.size(), q);
}

inline void walsh_hadamard(std::span<std::int64_t> data, unsigned n) { active().walsh_hadamard(data.data(), n); }

} // namespace polystruct::kernels
