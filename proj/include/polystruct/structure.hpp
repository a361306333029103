// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polystruct/affine.hpp"
#include "polystruct/poly.hpp"

namespace polystruct {

// --- quadratics --------------------------------------------------------------

/// f o T in normal form. Over F_2 the quadratic part of f o T is
/// sum_{i<=h} u_{2i-1} u_{2i}; over odd q it is sum_i alpha_i u_i^2.
struct QuadNormalForm {
    AffineMap map;
    /// f o T itself.
    Poly normal_form;
    /// F_2: floor(n/2) pair coefficients (1 for the first h, then 0).
    /// Odd q: n diagonal coefficients.
    std::vector<Elem> alpha;
    /// Degree <= 1 part of f o T, constant included.
    Poly linear;

    unsigned q() const { return normal_form.q(); }
    std::size_t n() const { return normal_form.n(); }
    /// Number of hyperbolic pairs (F_2) or of nonzero diagonal entries (odd q).
    std::size_t rank() const;
};

/// Throws DomainError when deg(f) > 2.
QuadNormalForm quad_normal_form(const Poly& f);
/// normal_form o T^{-1}; equals the input of quad_normal_form.
Poly recompose(const QuadNormalForm& nf);
/// Bias read off the normal form without touching the q^n points.
double quad_bias_closed_form(const QuadNormalForm& nf);

// --- strong-rank decompositions ---------------------------------------------

struct ProductPair {
    Poly g;
    Poly h;
};

/// f = sum_i g_i h_i + remainder with deg g_i + deg h_i <= budget,
/// g_i and h_i nonconstant and deg(remainder) <= budget - 1.
struct Decomposition {
    int budget = 0;
    std::vector<ProductPair> pairs;
    Poly remainder;

    std::size_t size() const { return pairs.size(); }
    /// sum_i g_i h_i + remainder.
    Poly expand() const;
};

struct VerifyResult {
    bool ok = false;
    /// Empty when ok; otherwise one of "field mismatch", "nonconstant violated",
    /// "degree budget", "remainder degree", "identity".
    std::string reason;
    explicit operator bool() const { return ok; }
};

VerifyResult verify_decomposition(const Poly& f, const Decomposition& dec);

struct PlantedInstance {
    Poly f;
    /// The planted decomposition of f.
    Decomposition truth;
};

/// f = g_1 h_1 + ... + g_c h_c + r with deg g_i = a, deg h_i = d - a (random
/// homogeneous top part plus a random lower part) and r random of degree
/// <= d - 1. Requires 1 <= a < d.
PlantedInstance planted_instance(unsigned q, std::size_t n, int d, int c, int a, std::uint64_t seed);

/// Work limits for the brute-force oracles. A request whose candidate count
/// exceeds the cap throws InfeasibleError before any work is done.
struct OracleCaps {
    std::uint64_t max_candidates = std::uint64_t{1} << 22;
    /// Largest domain the crank fiber test will tabulate.
    std::uint64_t max_points = std::uint64_t{1} << 12;
};

struct StrongRankResult {
    /// Minimal number of pairs, or nullopt when it exceeds r_max.
    std::optional<int> rank;
    std::optional<Decomposition> witness;
    std::uint64_t candidates = 0;
    bool exceeded() const { return !rank; }
};

/// Exact strong rank up to r_max with degree budget d. The g_i run over every
/// choice of subspaces of homogeneous polynomials (one per degree class); the
/// matching h_i and the remainder come from a linear solve.
StrongRankResult strong_rank_oracle(const Poly& f, int r_max, int d, const OracleCaps& caps = {});

struct CrankResult {
    std::optional<int> rank;
    /// Q_1..Q_r whose joint level sets f is constant on.
    std::vector<Poly> components;
    std::uint64_t candidates = 0;
    bool exceeded() const { return !rank; }
};

/// Smallest r <= r_max with f = Gamma(Q_1, ..., Q_r) for classical Q_i of
/// degree <= d - 1, decided by fiber constancy over all r-dimensional spans
/// of nonconstant candidates.
CrankResult crank_oracle(const Poly& f, int r_max, int d, const OracleCaps& caps = {});

/// Given `dec` for restrict_to(f, w) (in the coordinates of w's
/// parametrization), returns a decomposition of f with at most one extra
/// pair. `w` must be a hyperplane. Throws DomainError when dec does not
/// verify against the restriction or deg(f) exceeds its budget.
Decomposition lift_decomposition(const Poly& f, const AffineSubspace& w, const Decomposition& dec);

struct SearchOptions {
    int c_max = 4;
    /// Wall-clock limit in seconds; <= 0 disables it.
    double time_budget = 60.0;
    /// Degree budget; defaults to deg(f).
    std::optional<int> budget;
    /// Derivative candidates kept per degree class.
    std::size_t derivative_pool = 48;
    /// Homogeneous classes with at most this many members are enumerated
    /// in full as candidates.
    std::uint64_t exhaustive_cap = std::uint64_t{1} << 20;
};

struct SearchResult {
    std::optional<Decomposition> decomposition;
    /// "found" or "budget exhausted". The latter is not a proof that no
    /// decomposition with c_max pairs exists.
    std::string status;
    bool timed_out = false;
    std::uint64_t candidates = 0;
    std::vector<std::string> log;
};

/// For c = 1..c_max and every nondecreasing degree sequence (d_1..d_c) with
/// 1 <= d_i < d, picks g_i from a candidate pool and solves for h_i of degree
/// d - d_i and the remainder. Candidates come, in this order, from
/// sub-monomials of the top-degree terms, top parts of iterated derivatives
/// along low-weight directions, and full enumeration of small classes.
SearchResult decompose_search(const Poly& f, const SearchOptions& options = {});

} // namespace polystruct
