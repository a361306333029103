// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include <stdexcept>

#include "polystruct/error.hpp"
#include "polystruct/linalg.hpp"
#include "polystruct/rng.hpp"
#include "polystruct/structure.hpp"

namespace polystruct {

Poly Decomposition::expand() const {
    Poly sum = remainder;
    for (const auto& p : pairs) sum = sum + p.g * p.h;
    return sum;
}

VerifyResult verify_decomposition(const Poly& f, const Decomposition& dec) {
    auto fail = [](const char* reason) { return VerifyResult{false, reason}; };
    auto same_ring = [&](const Poly& p) { return p.q() == f.q() && p.n() == f.n(); };
    if (!same_ring(dec.remainder)) return fail("field mismatch");
    for (const auto& p : dec.pairs)
        if (!same_ring(p.g) || !same_ring(p.h)) return fail("field mismatch");
    for (const auto& p : dec.pairs)
        if (p.g.is_constant() || p.h.is_constant()) return fail("nonconstant violated");
    for (const auto& p : dec.pairs)
        if (p.g.degree() + p.h.degree() > dec.budget) return fail("degree budget");
    if (dec.remainder.degree() > dec.budget - 1) return fail("remainder degree");
    if (dec.expand() != f) return fail("identity");
    return {true, {}};
}

Decomposition lift_decomposition(const Poly& f, const AffineSubspace& w, const Decomposition& dec) {
    const unsigned q = f.q();
    const std::size_t n = f.n();
    if (w.q() != q || w.n() != n) throw FieldMismatch("hyperplane and polynomial live in different spaces");
    if (n == 0 || w.dim() + 1 != n) throw DomainError("lift_decomposition needs a hyperplane");
    const Poly fw = restrict_to(f, w);
    if (const auto v = verify_decomposition(fw, dec); !v)
        throw DomainError("decomposition does not verify against the restriction: " + v.reason);
    if (f.degree() > dec.budget) throw DomainError("deg(f) exceeds the decomposition budget");

    // Coordinates u with x = offset + u_1 c + sum_{i>=2} u_i basis_{i-1},
    // where c is the first unit vector outside the direction space. The
    // hyperplane is {u_1 = 0} and u_2.. are its own parametrization.
    Matrix m(q, n, n);
    for (std::size_t j = 0; j < w.dim(); ++j)
        for (std::size_t r = 0; r < n; ++r) m.at(r, j + 1) = w.basis()[j][r];
    for (std::size_t e = 0; e < n; ++e) {
        for (std::size_t r = 0; r < n; ++r) m.at(r, 0) = r == e ? 1 : 0;
        if (rank(m) == n) break;
    }
    const AffineMap a(m, w.offset());
    const AffineMap back = a.inverse();
    const Poly fu = affine_substitute(f, a);

    // fu = u_1 * r + fu|_{u_1 = 0}; r collects the terms containing u_1 with
    // that exponent lowered by one.
    Poly::Terms rt;
    for (const auto& [mono, c] : fu.terms()) {
        if (mono[0] == 0) continue;
        std::vector<std::uint8_t> e(mono.exponents().begin(), mono.exponents().end());
        --e[0];
        rt.emplace(Monomial(std::move(e)), c);
    }
    const Poly r(q, n, std::move(rt));
    const Poly u1 = Poly::variable(q, n, 0);

    auto pull = [&](const Poly& p) { return affine_substitute(embed(p, n, 1), back); };
    Decomposition out{dec.budget, {}, pull(dec.remainder)};
    if (!r.is_zero()) {
        const Poly l = affine_substitute(u1, back), rb = affine_substitute(r, back);
        if (r.is_constant() && dec.budget < 2)
            throw DomainError("degree budget too small to absorb the linear cofactor");
        if (r.is_constant())
            out.remainder = out.remainder + l * rb;  // degree 1 <= budget - 1
        else
            out.pairs.push_back({l, rb});
    }
    for (const auto& p : dec.pairs) out.pairs.push_back({pull(p.g), pull(p.h)});
    if (const auto v = verify_decomposition(f, out); !v)
        throw std::logic_error("lifted decomposition failed verification: " + v.reason);
    return out;
}

PlantedInstance planted_instance(unsigned q, std::size_t n, int d, int c, int a, std::uint64_t seed) {
    if (a < 1 || a >= d) throw DomainError("planted_instance needs 1 <= a < d");
    if (c < 0) throw DomainError("planted_instance needs c >= 0");
    CounterRng rng(seed, 0x706c616e74ULL);
    auto part = [&](int k) { return random_homogeneous(q, n, k, rng.next()) + random_poly(q, n, k - 1, rng.next()); };
    Decomposition truth{d, {}, Poly(q, n)};
    for (int i = 0; i < c; ++i) {
        Poly g = part(a);
        Poly h = part(d - a);
        truth.pairs.push_back({std::move(g), std::move(h)});
    }
    truth.remainder = random_poly(q, n, d - 1, rng.next());
    Poly f = truth.expand();
    return {std::move(f), std::move(truth)};
}

} // namespace polystruct
