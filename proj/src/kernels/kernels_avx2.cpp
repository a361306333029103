// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

// AVX2 variants. Functions carry target("avx2") instead of the translation unit
// being compiled with -mavx2, so no AVX2 code can leak into shared inline
// definitions; dispatch only selects this table after a CPUID check.

#include "kernels_internal.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <bit>

#define PS_AVX2 __attribute__((target("avx2")))

namespace polystruct::kernels::detail {

namespace {

PS_AVX2 inline __m256i popcount_epi8_sum(__m256i v) {
    const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                            0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low = _mm256_set1_epi8(0x0f);
    const __m256i lo = _mm256_and_si256(v, low);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
    const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

PS_AVX2 std::uint64_t popcount_avx2(const std::uint64_t* w, std::size_t count) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(w + i));
        acc = _mm256_add_epi64(acc, popcount_epi8_sum(v));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < count; ++i) total += static_cast<std::uint64_t>(std::popcount(w[i]));
    return total;
}

PS_AVX2 void xor_words_avx2(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b, std::size_t count) {
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_xor_si256(va, vb));
    }
    for (; i < count; ++i) dst[i] = a[i] ^ b[i];
}

PS_AVX2 inline __m256i permute_in_lanes(__m256i w, unsigned y_lo) {
    for (unsigned j = 0; j < 6; ++j) {
        if (y_lo & (1u << j)) {
            const __m256i m = _mm256_set1_epi64x(static_cast<long long>(kLowHalfMask[j]));
            const __m128i s = _mm_cvtsi32_si128(static_cast<int>(1u << j));
            w = _mm256_or_si256(_mm256_sll_epi64(_mm256_and_si256(w, m), s),
                                _mm256_and_si256(_mm256_srl_epi64(w, s), m));
        }
    }
    return w;
}

// Word-lane permutation t -> t ^ sel for sel in [0, 4).
PS_AVX2 inline __m256i xor_lanes(__m256i v, unsigned sel) {
    switch (sel) {
    case 1: return _mm256_permute4x64_epi64(v, 0xB1); // 1,0,3,2
    case 2: return _mm256_permute4x64_epi64(v, 0x4E); // 2,3,0,1
    case 3: return _mm256_permute4x64_epi64(v, 0x1B); // 3,2,1,0
    default: return v;
    }
}

PS_AVX2 void f2_derivative_avx2(std::uint64_t* dst, const std::uint64_t* src, std::uint64_t y, unsigned n) {
    const std::size_t words = f2_word_count(n);
    const std::uint64_t y_hi = y >> 6;
    const unsigned y_lo = static_cast<unsigned>(y & 63u);
    if (words < 4) {
        for (std::size_t i = 0; i < words; ++i) dst[i] = src[i] ^ permute_in_word(src[i ^ y_hi], y_lo);
        return;
    }
    const unsigned lane_sel = static_cast<unsigned>(y_hi & 3u);
    const std::uint64_t group_xor = y_hi & ~std::uint64_t{3};
    for (std::size_t i = 0; i < words; i += 4) {
        const __m256i own = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        __m256i other = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + (i ^ group_xor)));
        other = permute_in_lanes(xor_lanes(other, lane_sel), y_lo);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_xor_si256(own, other));
    }
}

PS_AVX2 void f2_mobius_avx2(std::uint64_t* words, unsigned n) {
    const std::size_t count = f2_word_count(n);
    const unsigned in_word = n < 6 ? n : 6;
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + i));
        for (unsigned j = 0; j < in_word; ++j) {
            const __m256i m = _mm256_set1_epi64x(static_cast<long long>(kLowHalfMask[j]));
            const __m128i s = _mm_cvtsi32_si128(static_cast<int>(1u << j));
            w = _mm256_xor_si256(w, _mm256_sll_epi64(_mm256_and_si256(w, m), s));
        }
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(words + i), w);
    }
    for (; i < count; ++i) {
        std::uint64_t w = words[i];
        for (unsigned j = 0; j < in_word; ++j) w ^= (w & kLowHalfMask[j]) << (1u << j);
        words[i] = w;
    }
    for (std::size_t stride = 1; stride < count; stride <<= 1) {
        for (std::size_t base = 0; base < count; base += 2 * stride) {
            std::size_t k = base;
            if (stride >= 4) {
                for (; k + 4 <= base + stride; k += 4) {
                    const __m256i lo = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + k));
                    const __m256i hi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + k + stride));
                    _mm256_storeu_si256(reinterpret_cast<__m256i*>(words + k + stride), _mm256_xor_si256(lo, hi));
                }
            }
            for (; k < base + stride; ++k) words[k + stride] ^= words[k];
        }
    }
}

PS_AVX2 void zq_histogram_avx2(const Elem* values, std::size_t count, unsigned q, std::uint64_t* counts) {
    std::uint64_t local[kMaxModulus + 1] = {};
    std::size_t i = 0;
    for (; i + 32 <= count; i += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values + i));
        for (unsigned c = 0; c < q; ++c) {
            const __m256i eq = _mm256_cmpeq_epi8(v, _mm256_set1_epi8(static_cast<char>(c)));
            local[c] += static_cast<std::uint64_t>(std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(eq))));
        }
    }
    for (; i < count; ++i) ++local[values[i]];
    for (unsigned c = 0; c < q; ++c) counts[c] += local[c];
}

// For t in [0, 2q): t mod q == min_u8(t, t - q) with wrapping subtraction.
PS_AVX2 inline __m256i fold_mod(__m256i t, __m256i vq) { return _mm256_min_epu8(t, _mm256_sub_epi8(t, vq)); }

PS_AVX2 void zq_sub_mod_avx2(Elem* dst, const Elem* a, const Elem* b, std::size_t count, unsigned q) {
    const __m256i vq = _mm256_set1_epi8(static_cast<char>(q));
    std::size_t i = 0;
    for (; i + 32 <= count; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const __m256i t = _mm256_add_epi8(va, _mm256_sub_epi8(vq, vb));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), fold_mod(t, vq));
    }
    for (; i < count; ++i) {
        const unsigned t = a[i] + q - b[i];
        dst[i] = static_cast<Elem>(t >= q ? t - q : t);
    }
}

PS_AVX2 void zq_axpy_avx2(Elem* dst, const Elem* x, Elem lambda, std::size_t count, unsigned q) {
    alignas(32) Elem table[32] = {};
    for (unsigned v = 0; v < q; ++v) table[v] = static_cast<Elem>((unsigned{lambda} * v) % q);
    const __m128i lo128 = _mm_load_si128(reinterpret_cast<const __m128i*>(table));
    const __m128i hi128 = _mm_load_si128(reinterpret_cast<const __m128i*>(table + 16));
    const __m256i tlo = _mm256_broadcastsi128_si256(lo128);
    const __m256i thi = _mm256_broadcastsi128_si256(hi128);
    const __m256i nib = _mm256_set1_epi8(0x0f);
    const __m256i fifteen = _mm256_set1_epi8(15);
    const __m256i vq = _mm256_set1_epi8(static_cast<char>(q));
    std::size_t i = 0;
    for (; i + 32 <= count; i += 32) {
        const __m256i vx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
        const __m256i idx = _mm256_and_si256(vx, nib);
        const __m256i from_lo = _mm256_shuffle_epi8(tlo, idx);
        const __m256i from_hi = _mm256_shuffle_epi8(thi, idx);
        const __m256i prod = _mm256_blendv_epi8(from_lo, from_hi, _mm256_cmpgt_epi8(vx, fifteen));
        const __m256i vd = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), fold_mod(_mm256_add_epi8(vd, prod), vq));
    }
    for (; i < count; ++i) dst[i] = static_cast<Elem>((dst[i] + table[x[i]]) % q);
}

PS_AVX2 void walsh_hadamard_avx2(std::int64_t* data, unsigned n) {
    const std::size_t len = std::size_t{1} << n;
    for (std::size_t h = 1; h < len; h <<= 1) {
        for (std::size_t base = 0; base < len; base += 2 * h) {
            std::size_t i = base;
            if (h >= 4) {
                for (; i + 4 <= base + h; i += 4) {
                    const __m256i u = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
                    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i + h));
                    _mm256_storeu_si256(reinterpret_cast<__m256i*>(data + i), _mm256_add_epi64(u, v));
                    _mm256_storeu_si256(reinterpret_cast<__m256i*>(data + i + h), _mm256_sub_epi64(u, v));
                }
            }
            for (; i < base + h; ++i) {
                const std::int64_t u = data[i], v = data[i + h];
                data[i] = u + v;
                data[i + h] = u - v;
            }
        }
    }
}

} // namespace

const KernelTable kAvx2Table = {
    "avx2",
    popcount_avx2,
    xor_words_avx2,
    f2_derivative_avx2,
    f2_mobius_avx2,
    zq_histogram_avx2,
    zq_sub_mod_avx2,
    zq_axpy_avx2,
    walsh_hadamard_avx2,
};

} // namespace polystruct::kernels::detail

#endif
