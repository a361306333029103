// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include "polystruct/gf.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "polystruct/error.hpp"

namespace polystruct {

bool is_prime(unsigned q) noexcept {
    if (q < 2) return false;
    for (unsigned d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

PrimeField::PrimeField(unsigned q) : q_(q) {
    if (q < 2 || q > kMaxModulus || !is_prime(q))
        throw DomainError("modulus must be a prime in [2, 31], got " + std::to_string(q));
}

Elem PrimeField::pow(Elem a, unsigned e) const noexcept {
    unsigned r = 1 % q_, b = a;
    while (e) {
        if (e & 1u) r = r * b % q_;
        b = b * b % q_;
        e >>= 1;
    }
    return static_cast<Elem>(r);
}

Elem PrimeField::inv(Elem a) const {
    if (a % q_ == 0) throw DomainError("zero has no inverse");
    return pow(a, q_ - 2);
}

std::complex<double> chi(unsigned e, unsigned q) {
    if (e % q == 0) return {1.0, 0.0};
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(e % q) / static_cast<double>(q);
    return {std::cos(theta), std::sin(theta)};
}

std::uint64_t ipow(std::uint64_t base, unsigned e) noexcept {
    std::uint64_t r = 1;
    while (e--) r *= base;
    return r;
}

TorusValue::TorusValue(unsigned q, std::uint64_t numerator, unsigned log_denominator)
    : q_(q), num_(0), log_den_(log_denominator) {
    if (!is_prime(q) || q > kMaxModulus) throw DomainError("torus modulus must be a prime <= 31");
    if (log_denominator > kMaxLogDenominator) throw DomainError("torus denominator too deep");
    num_ = numerator % ipow(q, log_denominator);
}

std::uint64_t TorusValue::denominator() const noexcept { return ipow(q_, log_den_); }

std::pair<std::uint64_t, unsigned> TorusValue::reduced() const noexcept {
    if (num_ == 0) return {0, 0};
    std::uint64_t n = num_;
    unsigned k = log_den_;
    while (k > 0 && n % q_ == 0) {
        n /= q_;
        --k;
    }
    return {n, k};
}

TorusValue TorusValue::lifted(unsigned log_denominator) const {
    if (log_denominator < log_den_) throw DomainError("cannot lift torus value to a smaller denominator");
    return TorusValue(q_, num_ * ipow(q_, log_denominator - log_den_), log_denominator);
}

bool operator==(const TorusValue& a, const TorusValue& b) noexcept {
    return a.q_ == b.q_ && a.reduced() == b.reduced();
}

std::complex<double> torus_exp(const TorusValue& t) {
    const auto [n, k] = t.reduced();
    if (n == 0) return {1.0, 0.0};
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(ipow(t.q(), k));
    return {std::cos(theta), std::sin(theta)};
}

TorusValue torus_add(const TorusValue& a, const TorusValue& b) {
    if (a.q() != b.q()) throw FieldMismatch("torus values over different fields");
    const unsigned k = std::max(a.log_denominator(), b.log_denominator());
    return TorusValue(a.q(), a.lifted(k).numerator() + b.lifted(k).numerator(), k);
}

TorusValue torus_neg(const TorusValue& a) {
    const std::uint64_t den = a.denominator();
    return TorusValue(a.q(), (den - a.numerator()) % den, a.log_denominator());
}

TorusValue torus_sub(const TorusValue& a, const TorusValue& b) { return torus_add(a, torus_neg(b)); }

} // namespace polystruct
