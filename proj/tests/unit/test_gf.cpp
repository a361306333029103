// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include <complex>

#include "doctest.h"
#include "polystruct/error.hpp"
#include "polystruct/gf.hpp"

using namespace polystruct;

namespace {
const unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};

bool close(std::complex<double> a, std::complex<double> b, double tol = 1e-12) { return std::abs(a - b) < tol; }
} // namespace

TEST_CASE("prime field construction rejects composites and large moduli") {
    CHECK_THROWS_AS(PrimeField(4), DomainError);
    CHECK_THROWS_AS(PrimeField(1), DomainError);
    CHECK_THROWS_AS(PrimeField(37), DomainError);
    for (unsigned q : kPrimes) CHECK_NOTHROW(PrimeField{q});
}

TEST_CASE("field axioms hold exhaustively") {
    for (unsigned q : kPrimes) {
        const PrimeField f(q);
        for (unsigned a = 0; a < q; ++a) {
            const Elem ea = static_cast<Elem>(a);
            CHECK(f.add(ea, f.neg(ea)) == 0);
            if (a) CHECK(f.mul(ea, f.inv(ea)) == 1);
            CHECK(f.pow(ea, q) == ea); // Fermat
            for (unsigned b = 0; b < q; ++b) {
                const Elem eb = static_cast<Elem>(b);
                CHECK(f.sub(f.add(ea, eb), eb) == ea);
                CHECK(f.mul(ea, eb) == (a * b) % q);
            }
        }
        CHECK_THROWS(f.inv(0));
    }
}

TEST_CASE("chi examples") {
    CHECK(close(chi(0, 2), {1, 0}));
    CHECK(close(chi(1, 2), {-1, 0}));
    CHECK(close(chi(1, 3), {-0.5, 0.8660254037844386}, 1e-9));
}

TEST_CASE("chi is a character and sums to zero") {
    for (unsigned q : kPrimes) {
        std::complex<double> total = 0;
        for (unsigned a = 0; a < q; ++a) {
            total += chi(a, q);
            CHECK(std::abs(std::abs(chi(a, q)) - 1.0) < 1e-12);
            for (unsigned b = 0; b < q; ++b) CHECK(close(chi((a + b) % q, q), chi(a, q) * chi(b, q)));
        }
        CHECK(std::abs(total) < 1e-12);
    }
}

TEST_CASE("torus_exp examples") {
    CHECK(close(torus_exp(TorusValue(2, 0, 1)), {1, 0}));
    CHECK(close(torus_exp(TorusValue(2, 1, 2)), {0, 1}));
    CHECK(close(torus_exp(TorusValue(2, 3, 2)), {0, -1}));
    // Depth-0 values agree with chi through x -> x/q.
    for (unsigned q : kPrimes)
        for (unsigned a = 0; a < q; ++a) CHECK(close(torus_exp(TorusValue(q, a, 1)), chi(a, q)));
}

TEST_CASE("torus_add examples") {
    CHECK(torus_add(TorusValue(2, 1, 1), TorusValue(2, 1, 1)).is_zero());
    const TorusValue half = torus_add(TorusValue(2, 1, 2), TorusValue(2, 1, 2));
    CHECK(half == TorusValue(2, 1, 1));
    CHECK(half.log_denominator() == 2);
    const TorusValue three_quarters = torus_add(TorusValue(2, 1, 2), TorusValue(2, 1, 1));
    CHECK(three_quarters.numerator() == 3);
    CHECK(three_quarters.log_denominator() == 2);
    CHECK_THROWS_AS(torus_add(TorusValue(2, 1, 1), TorusValue(3, 1, 1)), FieldMismatch);
}

TEST_CASE("torus_exp is a homomorphism") {
    for (unsigned q : {2u, 3u, 5u})
        for (unsigned ka = 1; ka <= 3; ++ka)
            for (unsigned kb = 1; kb <= 3; ++kb) {
                const auto da = ipow(q, ka), db = ipow(q, kb);
                for (std::uint64_t a = 0; a < da; a += 1 + da / 7)
                    for (std::uint64_t b = 0; b < db; b += 1 + db / 7) {
                        const TorusValue ta(q, a, ka), tb(q, b, kb);
                        CHECK(close(torus_exp(torus_add(ta, tb)), torus_exp(ta) * torus_exp(tb)));
                        CHECK(torus_sub(torus_add(ta, tb), tb) == ta);
                    }
            }
}

TEST_CASE("torus reduced form keeps the raw denominator") {
    const TorusValue t(3, 6, 2); // 6/9 = 2/3
    CHECK(t.denominator() == 9);
    CHECK(t.reduced() == std::pair<std::uint64_t, unsigned>{2, 1});
    CHECK(TorusValue(3, 9, 2).reduced() == std::pair<std::uint64_t, unsigned>{0, 0});
}
