// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "polystruct/poly.hpp"

namespace polystruct {

/// Ordered list of classical polynomials over a common F_q^n. Its atoms are
/// the joint level sets of the list.
class PolynomialFactor {
public:
    PolynomialFactor(unsigned q, std::size_t n, std::vector<Poly> polys = {});

    unsigned q() const noexcept { return q_; }
    std::size_t n() const noexcept { return n_; }
    const std::vector<Poly>& polys() const noexcept { return polys_; }
    /// |B|.
    std::size_t complexity() const noexcept { return polys_.size(); }
    /// Largest member degree; 0 for the empty factor.
    int degree() const;

    friend bool operator==(const PolynomialFactor&, const PolynomialFactor&) = default;

private:
    unsigned q_;
    std::size_t n_;
    std::vector<Poly> polys_;
};

using AtomLabel = std::vector<Elem>;
/// Lookup table from atom labels to field values.
using AtomMap = std::map<AtomLabel, Elem>;

struct FactorCaps {
    /// Largest domain scanned point by point.
    std::uint64_t max_points = std::uint64_t{1} << 20;
    /// Largest number of coefficient vectors q^{|B|} scanned.
    std::uint64_t max_combinations = std::uint64_t{1} << 12;
};

/// (P_1(x), ..., P_C(x)).
AtomLabel atom_of(const PolynomialFactor& b, std::span<const Elem> x);

/// Atom label -> member point indices, labels in lexicographic order.
std::map<AtomLabel, std::vector<std::uint64_t>> atoms(const PolynomialFactor& b, const FactorCaps& caps = {});

struct UnbiasednessResult {
    bool pass = true;
    /// First violating coefficient vector in lexicographic order (lambda_1
    /// most significant) and its bias, when the check fails.
    std::optional<std::vector<Elem>> witness;
    double witness_bias = 0.0;
    /// Largest bias over all nonzero combinations.
    double max_bias = 0.0;
    std::uint64_t combinations = 0;
};

/// Checks |E chi(sum lambda_i P_i)| < epsilon for every nonzero lambda.
UnbiasednessResult unbiasedness_check(const PolynomialFactor& b, double epsilon, const FactorCaps& caps = {});

struct RefinementResult {
    /// Every atom of the finer factor lies inside one atom of the coarser.
    bool semantic = false;
    /// The coarser list is a prefix of the finer list.
    bool syntactic = false;
    /// Two points sharing a label of the finer factor but not of the coarser.
    std::optional<std::pair<Point, Point>> witness;
};

/// Does `finer` refine `coarser`?
RefinementResult refines(const PolynomialFactor& finer, const PolynomialFactor& coarser, const FactorCaps& caps = {});

struct ComposeResult {
    bool is_function = false;
    /// Gamma on every nonempty atom when is_function.
    AtomMap gamma;
    /// Atom holding two points with different f-values otherwise.
    std::optional<AtomLabel> witness_atom;
    std::optional<std::pair<Point, Point>> witness_points;
};

/// Writes f = Gamma(P_1, ..., P_C) when f is constant on atoms.
ComposeResult compose(const PolynomialFactor& b, const Poly& f, const FactorCaps& caps = {});

struct RegularityPolicy {
    double epsilon = 0.1;
    /// When nonempty, epsilon(C) = schedule[min(C, size - 1)] for current
    /// complexity C; must be nonincreasing.
    std::vector<double> epsilon_schedule;
    int max_rounds = 20;
    /// Derivatives taken per replacement.
    int directions = 2;
    /// Extra attempts, each with one more direction, when a round fails to
    /// refine the previous factor.
    int retry_cap = 3;
    /// Seeds the pseudorandom tail of the direction sequence.
    std::uint64_t seed = 0;

    double epsilon_at(std::size_t complexity) const;
};

struct RegularizeRound {
    std::vector<Elem> lambda;
    double bias = 0.0;
    /// Index (in the factor before the round) of the polynomial replaced.
    std::size_t replaced = 0;
    std::vector<Point> directions;
    /// Nonconstant, new derivatives appended to the factor.
    std::vector<Poly> added;
    int attempts = 1;
    bool refined = true;
};

struct RegularityCertificate {
    double epsilon = 0.0;
    /// Outcome of a fresh full scan of the final factor.
    bool unbiased = false;
    double max_bias = 0.0;
    std::uint64_t combinations = 0;
    /// Final factor versus the input, decided by enumeration.
    bool semantic_refinement = false;
    bool syntactic_refinement = false;
};

struct RegularizeResult {
    PolynomialFactor factor;
    std::vector<RegularizeRound> trace;
    RegularityCertificate certificate;
    /// max_rounds ran out with a biased combination left.
    bool not_regular = false;
    /// A round could not be made to refine its predecessor; `factor` is the
    /// last factor that did.
    bool refinement_failed = false;
};

/// Replaces the highest-degree member of each biased combination (last one
/// on ties) by derivatives along a fixed direction sequence (unit vectors,
/// then weight-two vectors, then seeded pseudorandom ones) until the factor
/// is epsilon-unbiased. Constant members and duplicates are dropped on entry.
/// Requires deg(B) <= q + 1.
RegularizeResult regularize(const PolynomialFactor& b, const RegularityPolicy& policy, const FactorCaps& caps = {});

} // namespace polystruct
