// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polystruct/gf.hpp"
#include "polystruct/poly.hpp"

namespace polystruct {

/// Deepest supported level: values live in U_{k+1} with k <= 2.
inline constexpr unsigned kMaxDepth = 2;

/// Torus-valued polynomial in normal form with zero shift:
///   P(x) = sum c_{d,k} |x_1|^{d_1} ... |x_n|^{d_n} / q^{k+1}  (mod 1)
/// where |a| is the integer in [0, q) representing a, 0 <= d_i < q, and every
/// stored monomial has d_1 + ... + d_n > 0.
class NonclassicalPoly {
public:
    using Key = std::pair<std::vector<std::uint8_t>, unsigned>; // (d_1..d_n, k)

    NonclassicalPoly(unsigned q, std::size_t n);
    /// Coefficients are reduced mod q; zero entries are dropped.
    NonclassicalPoly(unsigned q, std::size_t n, std::map<Key, Elem> coeffs);

    /// Depth-0 embedding f / q of a classical polynomial without constant term.
    static NonclassicalPoly from_classical(const Poly& f);

    unsigned q() const noexcept { return q_; }
    std::size_t n() const noexcept { return n_; }
    const std::map<Key, Elem>& coeffs() const noexcept { return coeffs_; }
    /// Largest k with a nonzero coefficient (0 when P = 0).
    unsigned depth() const noexcept;
    /// max over nonzero coefficients of sum d_i + k(q-1); kZeroDegree for P = 0.
    int degree() const noexcept;

    /// Exact value with log-denominator depth() + 1.
    TorusValue evaluate(std::span<const Elem> x) const;
    TorusValue evaluate_index(std::uint64_t index) const;

    friend bool operator==(const NonclassicalPoly&, const NonclassicalPoly&) = default;

private:
    unsigned q_;
    std::size_t n_;
    std::map<Key, Elem> coeffs_;
};

TorusValue nc_eval(const NonclassicalPoly& p, std::span<const Elem> x);

/// Torus-valued function on F_q^n stored as numerators over q^{log_denominator}.
struct TorusTable {
    unsigned q = 2;
    std::size_t n = 0;
    unsigned log_denominator = 1;
    std::vector<std::uint64_t> numerators;

    TorusValue at(std::uint64_t index) const { return TorusValue(q, numerators[index], log_denominator); }
    bool is_zero() const;
};

/// All values of P (requires q^n <= kTableCap).
TorusTable nc_table(const NonclassicalPoly& p);
/// x -> P(x + y) - P(x) as a table.
TorusTable nc_derivative(const NonclassicalPoly& p, std::span<const Elem> y);
/// x -> T(x + y) - T(x).
TorusTable table_derivative(const TorusTable& t, std::span<const Elem> y);

struct DegreeCheckOptions {
    /// Largest number of (y_1..y_{d+1}, x) tuples for exhaustive mode.
    std::uint64_t exhaustive_cap = std::uint64_t{1} << 28;
    /// Use random tuples instead of refusing infeasible requests.
    bool allow_sampling = false;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
};

struct DegreeCheckResult {
    bool holds = true;
    bool sampled = false;
    std::uint64_t tuples_checked = 0;
    /// y_1, ..., y_{d+1}, x at which the iterated derivative is nonzero.
    std::vector<Point> witness;
    std::optional<TorusValue> witness_value;
};

/// Checks D_{y_1} ... D_{y_{d+1}} P == 0. Exhaustive mode enumerates every
/// tuple with nonzero directions (a zero direction kills the derivative);
/// throws InfeasibleError beyond the cap unless sampling is allowed.
DegreeCheckResult nc_degree_check(const NonclassicalPoly& p, int d, const DegreeCheckOptions& options = {});

/// Text form: header "q=<q> n=<n>", then one "c d_1 ... d_n k" line per
/// coefficient; '#' starts a comment.
NonclassicalPoly parse_nonclassical(std::string_view text);
std::string to_text(const NonclassicalPoly& p);

} // namespace polystruct
