// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace polystruct {

/// Caps worker threads used by exhaustive sums. 0 restores the hardware default.
void set_thread_count(unsigned threads) noexcept;
unsigned thread_count() noexcept;

/// Splits [0, total) into contiguous chunks, runs body(chunk_index, begin, end)
/// on worker threads and returns once all chunks are done. The chunk layout
/// depends only on `total` and `chunks`, never on the thread count, so callers
/// that reduce per-chunk results in index order get bitwise-stable output.
void parallel_chunks(std::size_t total, std::size_t chunks,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Deterministic map-reduce over [0, total): each chunk produces a partial
/// result via `map(begin, end)`; partials are folded left-to-right with `reduce`.
template <class T, class Map, class Reduce>
T parallel_reduce(std::size_t total, T init, Map map, Reduce reduce, std::size_t chunks = 64) {
    if (total == 0) return init;
    if (chunks > total) chunks = total;
    std::vector<T> partial(chunks, init);
    parallel_chunks(total, chunks, [&](std::size_t c, std::size_t b, std::size_t e) { partial[c] = map(b, e); });
    T acc = init;
    for (auto& p : partial) acc = reduce(acc, p);
    return acc;
}

} // namespace polystruct
