// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <utility>

namespace polystruct {

/// A field element of F_q, always held in [0, q).
using Elem = std::uint8_t;

/// Largest supported modulus. Exhaustive enumeration is the cost driver,
/// so only small prime fields are accepted.
inline constexpr unsigned kMaxModulus = 31;

bool is_prime(unsigned q) noexcept;

/// Arithmetic in the prime field F_q, 2 <= q <= 31.
class PrimeField {
public:
    explicit PrimeField(unsigned q);

    unsigned q() const noexcept { return q_; }

    Elem reduce(long long v) const noexcept {
        long long r = v % static_cast<long long>(q_);
        return static_cast<Elem>(r < 0 ? r + q_ : r);
    }
    Elem add(Elem a, Elem b) const noexcept { return static_cast<Elem>((a + b) % q_); }
    Elem sub(Elem a, Elem b) const noexcept { return static_cast<Elem>((a + q_ - b) % q_); }
    Elem neg(Elem a) const noexcept { return static_cast<Elem>((q_ - a) % q_); }
    Elem mul(Elem a, Elem b) const noexcept { return static_cast<Elem>((unsigned{a} * b) % q_); }
    Elem pow(Elem a, unsigned e) const noexcept;
    /// Multiplicative inverse; a must be nonzero.
    Elem inv(Elem a) const;

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    unsigned q_;
};

/// Additive character e_F(e) = exp(2 pi i e / q).
std::complex<double> chi(unsigned e, unsigned q);

/// Exact element of the torus subgroup U_{k+1} = (1/q^{k+1}) Z / Z.
///
/// Stored as numerator / q^{log_denominator}. The raw denominator is kept
/// as given; reduced() exposes the gcd-reduced representation.
class TorusValue {
public:
    TorusValue(unsigned q, std::uint64_t numerator, unsigned log_denominator);

    /// Zero with denominator q^{log_denominator}.
    static TorusValue zero(unsigned q, unsigned log_denominator = 1) {
        return TorusValue(q, 0, log_denominator);
    }

    unsigned q() const noexcept { return q_; }
    std::uint64_t numerator() const noexcept { return num_; }
    unsigned log_denominator() const noexcept { return log_den_; }
    std::uint64_t denominator() const noexcept;

    /// (numerator, log_denominator) with every common factor q removed.
    /// Zero reduces to (0, 0).
    std::pair<std::uint64_t, unsigned> reduced() const noexcept;

    /// Same value written over q^{log_denominator}, which must be >= the current one.
    TorusValue lifted(unsigned log_denominator) const;

    bool is_zero() const noexcept { return num_ == 0; }

    /// Equality of values mod 1, independent of the stored denominator.
    friend bool operator==(const TorusValue& a, const TorusValue& b) noexcept;

private:
    unsigned q_;
    std::uint64_t num_;
    unsigned log_den_;
};

/// Largest torus denominator exponent we represent (q^4 <= 31^4 fits easily).
inline constexpr unsigned kMaxLogDenominator = 4;

std::uint64_t ipow(std::uint64_t base, unsigned e) noexcept;

std::complex<double> torus_exp(const TorusValue& t);
TorusValue torus_add(const TorusValue& a, const TorusValue& b);
TorusValue torus_neg(const TorusValue& a);
TorusValue torus_sub(const TorusValue& a, const TorusValue& b);

} // namespace polystruct
