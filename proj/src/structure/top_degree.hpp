// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

// Linear system behind every strong-rank solver: once the g_i are fixed,
// f - sum g_i h_i having degree < d is linear in the top parts of the h_i.

#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "polystruct/poly.hpp"
#include "polystruct/structure.hpp"

namespace polystruct::detail {

/// Columns contributed by one fixed g: the degree-d part of g * m for each
/// monomial m of degree d - deg(g).
struct Block {
    Poly g;
    std::vector<Monomial> h_monos;
    // q = 2: one packed row-bitset per column; otherwise dense columns.
    std::vector<std::vector<std::uint64_t>> packed;
    std::vector<std::vector<Elem>> dense;
};

class TopDegreeSystem {
public:
    TopDegreeSystem(const Poly& f, int d);

    unsigned q() const { return q_; }
    std::size_t n() const { return n_; }
    int d() const { return d_; }
    std::size_t rows() const { return rows_.size(); }

    /// g must be homogeneous with 1 <= deg(g) < d.
    Block make_block(const Poly& g) const;

    /// Builds the decomposition from per-column coefficients (block order),
    /// dropping pairs whose h vanishes.
    Decomposition assemble(const std::vector<const Block*>& blocks, const std::vector<Elem>& coeffs) const;

    const std::vector<std::uint64_t>& packed_target() const { return packed_target_; }
    const std::vector<Elem>& dense_target() const { return dense_target_; }

private:
    std::uint64_t key(std::span<const std::uint8_t> e) const;

    const Poly* f_;
    unsigned q_;
    std::size_t n_;
    int d_;
    std::unordered_map<std::uint64_t, std::uint32_t> rows_;
    std::vector<std::uint64_t> packed_target_;
    std::vector<Elem> dense_target_;
};

/// Incrementally grown column space with combination tracking. Copyable so
/// recursive searches can branch from a shared prefix.
class Span {
public:
    Span(unsigned q, std::size_t rows, std::size_t max_columns);

    void add(const Block& block, std::size_t first_column);
    /// Coefficients (one per column id) reproducing the target, if any.
    std::optional<std::vector<Elem>> express(const TopDegreeSystem& sys) const;

private:
    struct Vec {
        std::vector<std::uint64_t> bits;  // q = 2
        std::vector<Elem> elems;          // odd q
        std::vector<std::uint64_t> combo_bits;
        std::vector<Elem> combo;
        std::size_t pivot = 0;
    };
    void reduce(Vec& v) const;

    unsigned q_;
    std::size_t rows_;
    std::size_t max_columns_;
    std::vector<Vec> basis_;
};

} // namespace polystruct::detail
