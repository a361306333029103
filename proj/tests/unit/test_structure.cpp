// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "polystruct/analysis.hpp"
#include "polystruct/error.hpp"
#include "polystruct/linalg.hpp"
#include "polystruct/rng.hpp"
#include "polystruct/structure.hpp"

using namespace polystruct;
using doctest::Approx;

namespace {

Poly P(const char* text, unsigned q, std::size_t n) { return parse_poly(text, q, n); }

Poly random_quadratic(unsigned q, std::size_t n, std::uint64_t seed) {
    return random_poly(q, n, std::min<int>(2, static_cast<int>(n * (q - 1))), seed);
}

} // namespace

TEST_CASE("subspace enumeration visits each subspace once") {
    for (unsigned q : {2u, 3u})
        for (std::size_t dim = 0; dim <= 4; ++dim)
            for (std::size_t k = 0; k <= dim; ++k) {
                std::set<std::vector<Elem>> seen;
                std::uint64_t count = 0;
                for_each_subspace(q, dim, k, [&](const Matrix& m) {
                    ++count;
                    CHECK(rank(m) == k);
                    std::vector<Elem> flat;
                    for (std::size_t r = 0; r < m.rows(); ++r) flat.insert(flat.end(), m.row(r).begin(), m.row(r).end());
                    CHECK(rref(m).matrix == m);
                    seen.insert(flat);
                    return true;
                });
                CHECK(count == gaussian_binomial(q, dim, k));
                CHECK(seen.size() == count);
            }
    CHECK(gaussian_binomial(2, 4, 2) == 35);
    CHECK(gaussian_binomial(3, 2, 1) == 4);
    CHECK(gaussian_binomial(2, 200, 100) == UINT64_MAX);
}

TEST_CASE("quad_normal_form examples") {
    const Poly f = P("x1*x2 + x1*x3 + x2*x3", 2, 3);
    const auto nf = quad_normal_form(f);
    CHECK(nf.rank() == 1);
    for (const auto& x : oracle::all_points(2, 3)) CHECK(oracle::eval(nf.normal_form, nf.map.inverse().apply(x)) == oracle::eval(f, x));
    CHECK(recompose(nf) == f);

    const auto pair = quad_normal_form(P("x1*x2", 2, 2));
    CHECK(pair.alpha == std::vector<Elem>{1});
    CHECK(pair.linear.is_zero());
    CHECK(pair.map == AffineMap::identity(2, 2));

    const auto diag = quad_normal_form(P("x1^2 + x2^2", 3, 2));
    CHECK(diag.alpha == std::vector<Elem>{1, 1});
    CHECK(diag.linear.is_zero());

    CHECK_THROWS_AS(quad_normal_form(P("x1*x2*x3", 2, 3)), DomainError);
}

TEST_CASE("quad_bias_closed_form examples") {
    CHECK(quad_bias_closed_form(quad_normal_form(P("x1*x2", 2, 2))) == 0.5);
    CHECK(quad_bias_closed_form(quad_normal_form(P("x1*x2 + x3*x4", 2, 4))) == 0.25);
    CHECK(quad_bias_closed_form(quad_normal_form(P("x1*x2 + x3", 2, 3))) == 0.0);
    CHECK(quad_bias_closed_form(quad_normal_form(P("x1*x2 + x1 + 1", 2, 2))) == 0.5);
}

TEST_CASE("property: quadratic normal forms recompose and predict the bias") {
    for (unsigned q : {2u, 3u, 5u})
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            const std::size_t n = 1 + seed % (q == 2 ? 7 : 4);
            const Poly f = random_quadratic(q, n, seed);
            const auto nf = quad_normal_form(f);
            REQUIRE(nf.map.invertible());
            REQUIRE(oracle::same_function(recompose(nf), f));
            for (const auto& u : oracle::all_points(q, n))
                REQUIRE(oracle::eval(nf.normal_form, u) == oracle::eval(f, nf.map.apply(u)));
            const double b = oracle::bias(f);
            CHECK(quad_bias_closed_form(nf) == Approx(b).epsilon(1e-9).scale(1));
            if (q == 2 && b > 1e-12) CHECK(static_cast<double>(nf.rank()) <= 2 * std::log2(1 / b) + 1e-9);
        }
}

TEST_CASE("verify_decomposition examples") {
    const Poly f = P("x1*x2*x3 + x1", 2, 3);
    Decomposition dec{3, {{P("x1", 2, 3), P("x2*x3 + 1", 2, 3)}}, Poly(2, 3)};
    CHECK(verify_decomposition(f, dec).ok);

    Decomposition constant_g{3, {{Poly::constant(2, 3, 1), f}}, Poly(2, 3)};
    CHECK(verify_decomposition(f, constant_g).reason == "nonconstant violated");

    Decomposition over{3, {{P("x1*x2", 2, 3), P("x2*x3 + 1", 2, 3)}}, Poly(2, 3)};
    CHECK(verify_decomposition(P("x1*x2*x3 + x1*x2", 2, 3), over).reason == "degree budget");

    Decomposition high_rest{3, {}, f};
    CHECK(verify_decomposition(f, high_rest).reason == "remainder degree");

    Decomposition wrong{3, {{P("x1", 2, 3), P("x2*x3", 2, 3)}}, Poly(2, 3)};
    CHECK(verify_decomposition(f, wrong).reason == "identity");

    Decomposition other_field{3, {}, Poly(3, 3)};
    CHECK(verify_decomposition(f, other_field).reason == "field mismatch");
}

TEST_CASE("strong_rank_oracle examples") {
    const auto low = strong_rank_oracle(P("x1*x2 + x3", 2, 3), 2, 3);
    CHECK(low.rank == 0);

    const auto cubic = strong_rank_oracle(P("x1*x2*x3", 2, 3), 2, 3);
    CHECK(cubic.rank == 1);
    REQUIRE(cubic.witness);
    CHECK(verify_decomposition(P("x1*x2*x3", 2, 3), *cubic.witness).ok);

    const Poly form = P("x1*x2 + x3*x4", 2, 4);
    CHECK(strong_rank_oracle(form, 2, 2).rank == 2);
    CHECK(strong_rank_oracle(form, 1, 2).exceeded());

    CHECK(strong_rank_oracle(P("x1*x2*x3", 2, 3), 2, 2).exceeded());  // degree above budget

    OracleCaps tiny;
    tiny.max_candidates = 10;
    CHECK_THROWS_AS(strong_rank_oracle(random_poly(2, 6, 4, 1), 2, 4, tiny), InfeasibleError);
}

TEST_CASE("property: strong rank one matches the brute-force product search") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 3 + seed % 2;
        const int d = 3;
        Poly f = random_poly(2, n, d, seed);
        if (f.degree() < d) continue;
        const auto r = strong_rank_oracle(f, 1, d);
        CHECK((r.rank.has_value() && *r.rank <= 1) == oracle::f2_strong_rank_at_most_one(f, d));
        if (r.witness) CHECK(verify_decomposition(f, *r.witness).ok);
    }
}

TEST_CASE("strong_rank_oracle over F_3") {
    const Poly f = P("x1^2*x2 + x2*x3^2", 3, 3);
    const auto r = strong_rank_oracle(f, 2, 3);
    REQUIRE(r.rank);
    CHECK(*r.rank == 1);  // x2 * (x1^2 + x3^2)
    CHECK(verify_decomposition(f, *r.witness).ok);
}

TEST_CASE("crank_oracle examples") {
    CHECK(crank_oracle(Poly::constant(2, 3, 1), 1, 2).rank == 0);
    CHECK(crank_oracle(P("x1 + x2", 2, 2), 3, 1).exceeded());
    CHECK(crank_oracle(P("x1*x2", 2, 2), 1, 2).exceeded());
    const auto two = crank_oracle(P("x1*x2", 2, 2), 2, 2);
    CHECK(two.rank == 2);
    CHECK(two.components.size() == 2);
    // A product of two affine forms is a function of both; of one, never.
    CHECK(crank_oracle(P("x1*x2*x3", 2, 3), 2, 3).rank == 2);
    OracleCaps small;
    small.max_points = 8;
    CHECK_THROWS_AS(crank_oracle(P("x1", 2, 4), 1, 2, small), InfeasibleError);
}

TEST_CASE("property: crank_oracle matches the tuple brute force over F_2^3") {
    for (std::uint64_t seed = 0; seed < 24; ++seed) {
        const int d = 2 + static_cast<int>(seed % 2);
        const Poly f = random_poly(2, 3, d, seed);
        const auto r = crank_oracle(f, 2, d);
        const int expect = oracle::crank_brute_force(f, 2, d);
        CHECK(r.rank.value_or(-1) == expect);
        if (r.rank && *r.rank > 0) {
            // f is constant on every joint fiber of the returned components.
            for (const auto& x : oracle::all_points(2, 3))
                for (const auto& y : oracle::all_points(2, 3)) {
                    bool same = true;
                    for (const auto& c : r.components) same = same && oracle::eval(c, x) == oracle::eval(c, y);
                    if (same) REQUIRE(oracle::eval(f, x) == oracle::eval(f, y));
                }
        }
    }
}

TEST_CASE("lift_decomposition examples") {
    const Poly f = P("x1*x2*x3 + x1", 2, 3);
    const auto w = AffineSubspace::coordinate_hyperplane(2, 3, 0, 0);
    const auto lifted = lift_decomposition(f, w, Decomposition{3, {}, Poly(2, 2)});
    REQUIRE(lifted.size() == 1);
    CHECK(lifted.pairs[0].g == P("x1", 2, 3));
    CHECK(lifted.pairs[0].h == P("x2*x3 + 1", 2, 3));
    CHECK(lifted.remainder.is_zero());

    const Poly g = P("x2*x3*x4 + x2", 2, 4);
    const auto w1 = AffineSubspace::coordinate_hyperplane(2, 4, 0, 0);
    const auto base = strong_rank_oracle(restrict_to(g, w1), 2, 3);
    REQUIRE(base.witness);
    CHECK(lift_decomposition(g, w1, *base.witness).size() == base.witness->size());

    CHECK_THROWS_AS(lift_decomposition(f, w, Decomposition{3, {}, P("x1", 2, 2)}), DomainError);
    CHECK_THROWS_AS(lift_decomposition(f, AffineSubspace::full(2, 3), Decomposition{3, {}, Poly(2, 3)}), DomainError);
}

TEST_CASE("property: lifting through random hyperplanes adds at most one pair") {
    CounterRng rng(31);
    int lifted = 0;
    for (int t = 0; t < 40; ++t) {
        const unsigned q = t % 4 == 3 ? 3 : 2;
        const std::size_t n = q == 2 ? 5 : 3;
        const int d = 3;
        const Poly f = random_poly(q, n, d, rng.next());
        if (f.degree() != d) continue;
        Point wv(n);
        do {
            for (auto& v : wv) v = static_cast<Elem>(rng.below(q));
        } while (std::all_of(wv.begin(), wv.end(), [](Elem e) { return e == 0; }));
        const auto w = AffineSubspace::hyperplane(q, wv, static_cast<Elem>(rng.below(q)));
        const auto base = strong_rank_oracle(restrict_to(f, w), 2, d);
        if (!base.witness) continue;
        const auto up = lift_decomposition(f, w, *base.witness);
        CHECK(verify_decomposition(f, up).ok);
        CHECK(up.size() <= base.witness->size() + 1);
        ++lifted;
    }
    CHECK(lifted > 20);
}

TEST_CASE("property: iterated coordinate lifts add at most one pair each") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Poly f = random_poly(2, 5, 3, seed + 400);
        if (f.degree() != 3) continue;
        // Restrict x1 = 0, then x2 = 0, decompose the 3-variable remainder and lift twice.
        const auto w1 = AffineSubspace::coordinate_hyperplane(2, 5, 0, 0);
        const Poly f1 = restrict_to(f, w1);
        const auto w2 = AffineSubspace::coordinate_hyperplane(2, 4, 0, 0);
        const Poly f2 = restrict_to(f1, w2);
        const int d2 = std::max(f2.degree(), 1);
        auto dec = strong_rank_oracle(f2, 2, 3).witness;
        REQUIRE(dec);
        (void)d2;
        const auto l1 = lift_decomposition(f1, w2, *dec);
        const auto l2 = lift_decomposition(f, w1, l1);
        CHECK(verify_decomposition(f, l2).ok);
        CHECK(l2.size() <= dec->size() + 2);
    }
}

TEST_CASE("decompose_search examples") {
    const auto low = decompose_search(P("x1*x2 + x3", 2, 4), {.budget = 3});
    REQUIRE(low.decomposition);
    CHECK(low.decomposition->size() == 0);

    const Poly mono = P("x1*x2*x3*x4*x5", 2, 5);
    const auto m = decompose_search(mono);
    REQUIRE(m.decomposition);
    CHECK(m.status == "found");
    CHECK(m.decomposition->size() == 1);
    CHECK(verify_decomposition(mono, *m.decomposition).ok);

    CHECK_THROWS_AS(decompose_search(P("x1 + x2", 2, 2)), DomainError);
}

TEST_CASE("decompose_search recovers planted products") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const unsigned q = seed % 3 == 2 ? 3 : 2;
        const std::size_t n = q == 2 ? 7 : 4;
        const Poly g = random_homogeneous(q, n, 2, seed) + random_poly(q, n, 1, seed + 1);
        const Poly h = random_homogeneous(q, n, 2, seed + 2) + random_poly(q, n, 1, seed + 3);
        const Poly f = g * h + random_poly(q, n, 3, seed + 4);
        if (f.degree() != 4) continue;
        const auto r = decompose_search(f, {.c_max = 3, .time_budget = 0});
        REQUIRE(r.decomposition);
        CHECK(verify_decomposition(f, *r.decomposition).ok);
        CHECK(r.decomposition->size() <= 3);
    }
}

TEST_CASE("decompose_search reports an exhausted budget honestly") {
    const Poly f = random_poly(2, 10, 5, 77);
    const auto r = decompose_search(f, {.c_max = 2, .time_budget = 1e-9});
    CHECK(!r.decomposition);
    CHECK(r.status == "budget exhausted");
    CHECK(r.timed_out);
}

TEST_CASE("decompose_search is deterministic") {
    const Poly f = random_poly(2, 7, 4, 5);
    const auto a = decompose_search(f, {.time_budget = 0}), b = decompose_search(f, {.time_budget = 0});
    CHECK(a.log == b.log);
    REQUIRE(a.decomposition.has_value() == b.decomposition.has_value());
    if (a.decomposition) CHECK(a.decomposition->expand() == b.decomposition->expand());
}

TEST_CASE("planted_instance carries a verifying decomposition") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const unsigned q = seed % 2 ? 3 : 2;
        const auto p = planted_instance(q, 5, 4, 1 + static_cast<int>(seed % 3), 1 + static_cast<int>(seed % 2), seed);
        CHECK(verify_decomposition(p.f, p.truth).ok);
        CHECK(p.truth.pairs.front().g.degree() == 1 + static_cast<int>(seed % 2));
    }
    CHECK(planted_instance(2, 6, 5, 1, 2, 7).f == planted_instance(2, 6, 5, 1, 2, 7).f);
    CHECK_THROWS_AS(planted_instance(2, 4, 3, 1, 3, 0), DomainError);
}
