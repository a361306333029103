// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polystruct/gf.hpp"

namespace polystruct {

/// Degree of the zero polynomial: below every integer degree, so budgets such
/// as deg(Q) <= d - 1 hold vacuously for Q = 0.
inline constexpr int kZeroDegree = std::numeric_limits<int>::min() / 2;

/// Largest domain q^n for which dense truth tables are built.
inline constexpr std::uint64_t kTableCap = std::uint64_t{1} << 24;

using Point = std::vector<Elem>;

/// q^n, or nullopt when it exceeds 2^62.
std::optional<std::uint64_t> domain_size(unsigned q, std::size_t n) noexcept;
/// q^n, throwing InfeasibleError when above `cap`.
std::uint64_t checked_domain_size(unsigned q, std::size_t n, std::uint64_t cap, std::string_view what);

/// Points are indexed little-endian in base q: x_1 is the least significant digit.
Point index_to_point(std::uint64_t index, unsigned q, std::size_t n);
std::uint64_t point_to_index(std::span<const Elem> x, unsigned q);
/// index(x + y) for every point index x of F_q^n, in index order.
std::vector<std::uint64_t> translation_indices(unsigned q, std::size_t n, std::span<const Elem> y);

/// Reduced exponent vector; every entry lies in [0, q).
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<std::uint8_t> exponents);
    static Monomial one(std::size_t n) { return Monomial(std::vector<std::uint8_t>(n, 0)); }
    static Monomial variable(std::size_t n, std::size_t i, std::uint8_t power = 1);

    std::size_t arity() const noexcept { return exps_.size(); }
    int degree() const noexcept { return degree_; }
    std::uint8_t operator[](std::size_t i) const { return exps_[i]; }
    std::span<const std::uint8_t> exponents() const noexcept { return exps_; }

    friend bool operator==(const Monomial& a, const Monomial& b) noexcept { return a.exps_ == b.exps_; }

private:
    std::vector<std::uint8_t> exps_;
    int degree_ = 0;
};

/// Higher total degree first, then lexicographically larger exponent vectors
/// (x1 most significant). This is the canonical print order.
struct GradedDescending {
    bool operator()(const Monomial& a, const Monomial& b) const noexcept;
};

/// Product of monomials reduced with x^q = x.
Monomial multiply(const Monomial& a, const Monomial& b, unsigned q);

namespace detail {
struct TableCache;
}

/// Classical polynomial F_q^n -> F_q in reduced form (exponents < q, so x^q
/// and x are the same function). Equality is coefficient equality, which is
/// function equality. Immutable after construction.
class Poly {
public:
    using Terms = std::map<Monomial, Elem, GradedDescending>;

    Poly(unsigned q, std::size_t n);
    /// Coefficients are reduced mod q and exponents must already be < q;
    /// zero coefficients are dropped.
    Poly(unsigned q, std::size_t n, Terms terms);

    static Poly constant(unsigned q, std::size_t n, Elem c);
    /// The coordinate x_{i+1} (0-based i).
    static Poly variable(unsigned q, std::size_t n, std::size_t i);
    static Poly monomial(unsigned q, const Monomial& m, Elem c = 1);
    /// a_0 + sum_i a_{i+1} x_{i+1}.
    static Poly affine(unsigned q, std::span<const Elem> linear, Elem constant);

    unsigned q() const noexcept { return field_.q(); }
    std::size_t n() const noexcept { return n_; }
    const PrimeField& field() const noexcept { return field_; }
    const Terms& terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    /// True for the zero polynomial as well.
    bool is_constant() const noexcept { return degree() <= 0; }
    int degree() const noexcept;
    Elem coefficient(const Monomial& m) const;
    Elem constant_term() const;

    /// Terms of total degree exactly k.
    Poly homogeneous_part(int k) const;
    /// Terms of total degree <= k.
    Poly truncated(int k) const;

    Elem evaluate(std::span<const Elem> x) const;
    Elem evaluate_index(std::uint64_t index) const;

    /// All q^n values indexed as in index_to_point; built once on first use
    /// (thread-safe) and shared by copies. Requires q^n <= kTableCap.
    const std::vector<Elem>& table() const;
    /// Bit-packed table (q = 2 only), layout as in kernels.hpp.
    const std::vector<std::uint64_t>& bit_table() const;

    std::string to_string() const;

    friend bool operator==(const Poly& a, const Poly& b) noexcept {
        return a.q() == b.q() && a.n_ == b.n_ && a.terms_ == b.terms_;
    }

private:
    PrimeField field_;
    std::size_t n_;
    Terms terms_;
    std::shared_ptr<detail::TableCache> cache_;
};

void require_compatible(const Poly& a, const Poly& b);

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator-(const Poly& a);
Poly operator*(const Poly& a, const Poly& b);
Poly scale(const Poly& f, Elem c);
Poly add(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
Poly power(const Poly& f, unsigned e);

/// Same polynomial viewed in `n` >= f.n() variables; existing variables keep
/// their indices shifted by `offset`.
Poly embed(const Poly& f, std::size_t n, std::size_t offset = 0);

/// Interpolates the unique reduced polynomial with the given value table.
Poly from_table(unsigned q, std::size_t n, std::span<const Elem> values);

/// Number of reduced monomials of total degree <= d (or == d).
std::uint64_t monomial_count(unsigned q, std::size_t n, int d, bool exact_degree = false);
/// Reduced monomials of total degree == d, in canonical order.
std::vector<Monomial> monomials_of_degree(unsigned q, std::size_t n, int d);
/// Reduced monomials of total degree <= d, in canonical order.
std::vector<Monomial> monomials_up_to(unsigned q, std::size_t n, int d);

/// Every reduced monomial of degree <= d gets an independent uniform
/// coefficient drawn from the seed.
Poly random_poly(unsigned q, std::size_t n, int d, std::uint64_t seed);
/// Uniform homogeneous polynomial of degree exactly d, redrawn until nonzero.
Poly random_homogeneous(unsigned q, std::size_t n, int d, std::uint64_t seed);
/// Elementary symmetric polynomial of degree 4 over F_2.
Poly s4_generator(std::size_t n);

struct ParseOptions {
    /// Reduce coefficients >= q instead of rejecting them.
    bool auto_reduce = false;
};

/// Parses the grammar
///   expression := term ('+' term)*
///   term       := coeff? ('*'? var)*
///   var        := 'x' index ('^' power)?
/// with whitespace ignored. Throws ParseError with line/column.
Poly parse_poly(std::string_view text, unsigned q, std::size_t n, ParseOptions options = {});

struct PolyHeader {
    std::optional<unsigned> q;
    std::optional<std::size_t> n;
};

/// Splits an optional leading "q=<q> n=<n>" header line off a polynomial file.
std::pair<PolyHeader, std::string> split_header(std::string_view content);

} // namespace polystruct
