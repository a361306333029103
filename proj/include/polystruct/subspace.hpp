// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polystruct/affine.hpp"
#include "polystruct/poly.hpp"

namespace polystruct {

/// Subset of F_q^n stored as a membership bitmap over point indices.
class PointSet {
public:
    /// Empty set; q^n must not exceed kTableCap.
    PointSet(unsigned q, std::size_t n);

    static PointSet from_points(unsigned q, std::size_t n, const std::vector<Point>& points);
    static PointSet full(unsigned q, std::size_t n);
    static PointSet of_subspace(const AffineSubspace& v);

    unsigned q() const noexcept { return q_; }
    std::size_t n() const noexcept { return n_; }
    /// q^n.
    std::uint64_t universe() const noexcept { return universe_; }

    bool contains_index(std::uint64_t index) const { return (bits_[index >> 6] >> (index & 63)) & 1U; }
    bool contains(std::span<const Elem> x) const;
    void insert_index(std::uint64_t index) { bits_[index >> 6] |= std::uint64_t{1} << (index & 63); }
    void insert(std::span<const Elem> x);

    std::uint64_t count() const;
    /// |A| / q^n.
    double density() const;
    /// Member indices in increasing order.
    std::vector<std::uint64_t> members() const;
    const std::vector<std::uint64_t>& words() const noexcept { return bits_; }

    /// "pointset q=<q> n=<n>" followed by the bitmap in hex, two digits per
    /// byte, byte j holding indices 8j..8j+7 (least significant bit first).
    std::string to_text() const;
    /// Inverse of to_text; blank lines and '#' comments are skipped.
    static PointSet parse(std::string_view text);

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    unsigned q_;
    std::size_t n_;
    std::uint64_t universe_;
    std::vector<std::uint64_t> bits_;
};

enum class SubspaceClaim { constant_value, sumset_membership };
std::string to_string(SubspaceClaim c);

struct SubspaceCertificate {
    AffineSubspace subspace;
    SubspaceClaim claim = SubspaceClaim::constant_value;
    /// The constant value of f on the subspace (constant_value claims only).
    std::optional<Elem> value;
    /// Set only after every point of the subspace was checked.
    bool verified = false;
    std::uint64_t checked_points = 0;
    /// Two points with different values, or a point outside the set.
    std::vector<Point> witness;
};

/// Calls visit(index) for each point of v, in coordinate-counter order.
void for_each_index(const AffineSubspace& v, const std::function<void(std::uint64_t)>& visit);

/// Is f constant on v? Enumerates v until two values differ.
SubspaceCertificate verify_constant(const Poly& f, const AffineSubspace& v);
/// Is v a subset of a? Enumerates v until a point falls outside.
SubspaceCertificate verify_membership(const PointSet& a, const AffineSubspace& v);

struct SubspaceCaps {
    /// Largest (number of subspaces) x (points per subspace) an exhaustive
    /// scan may visit.
    std::uint64_t max_work = std::uint64_t{1} << 28;
};

/// First affine subspace of dimension target_dim on which f is constant, in
/// canonical order: linear parts as reduced echelon bases (pivot sets in
/// lexicographic order), then offsets vanishing on the pivots in index order.
/// nullopt means no such subspace exists.
std::optional<SubspaceCertificate> constant_subspace_exhaustive(const Poly& f, std::size_t target_dim,
                                                                const SubspaceCaps& caps = {});

/// Largest dimension with a constant affine subspace, by exhaustive search.
SubspaceCertificate constant_subspace_max(const Poly& f, const SubspaceCaps& caps = {});

/// Grows a constant affine subspace direction by direction. Round 0 starts
/// at the origin, later rounds at seeded random points; each round tries the
/// unit vectors in seeded order, then 4n seeded random directions. Returns
/// the largest subspace found (earliest round on ties), verified.
SubspaceCertificate constant_subspace_greedy(const Poly& f, int rounds, std::uint64_t seed);

struct ShiftResult {
    /// v + shift is the best coset; shift vanishes on the pivots of v's
    /// reduced echelon basis.
    Point shift;
    AffineSubspace coset;
    double bias = 0.0;
    std::uint64_t cosets = 0;
};

/// The coset of v's direction space with the largest exact restricted bias
/// (first in coset order on ties).
ShiftResult best_shift(const Poly& f, const AffineSubspace& v);

/// kA - kA = {a_1 + ... + a_k - b_1 - ... - b_k}. Requires q^n <= 2^20 and
/// 1 <= k <= 4.
PointSet sumset(const PointSet& a, int k);

struct SumsetSearchOptions {
    /// Seeded greedy growths tried after the coordinate subspaces.
    int random_trials = 64;
    std::uint64_t seed = 0;
    /// Exhaustive scan of linear subspaces when n is at most this.
    std::size_t exhaustive_n = 5;
};

/// A linear subspace of dimension >= min_dim inside kA - kA. Searches
/// coordinate subspaces (largest first), then seeded greedy growths, then
/// every subspace when n <= exhaustive_n; returns the largest found in
/// reduced echelon form. nullopt is relative to that search except in the
/// exhaustive regime.
std::optional<SubspaceCertificate> subspace_in_sumset(const PointSet& a, int k, std::size_t min_dim,
                                                      const SumsetSearchOptions& options = {});

} // namespace polystruct
