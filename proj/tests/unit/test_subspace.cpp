// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "polystruct/analysis.hpp"
#include "polystruct/error.hpp"
#include "polystruct/rng.hpp"
#include "polystruct/subspace.hpp"

using namespace polystruct;

namespace {

Poly P(const char* text, unsigned q, std::size_t n) { return parse_poly(text, q, n); }

Point e(std::size_t n, std::size_t i) {
    Point x(n, 0);
    x[i] = 1;
    return x;
}

// Re-checks a certificate by listing the subspace through oracle::span_of.
bool reverifies(const Poly& f, const SubspaceCertificate& c) {
    const auto& v = c.subspace;
    const auto span = oracle::span_of(v.basis(), v.q(), v.n());
    if (span.size() != static_cast<std::size_t>(std::pow(v.q(), v.dim()))) return false;
    for (const auto& s : span)
        if (oracle::eval(f, oracle::add(v.offset(), s, v.q())) != *c.value) return false;
    return true;
}

bool reverifies(const std::vector<Point>& set, const SubspaceCertificate& c) {
    const auto& v = c.subspace;
    for (const auto& s : oracle::span_of(v.basis(), v.q(), v.n()))
        if (!std::binary_search(set.begin(), set.end(), oracle::add(v.offset(), s, v.q()))) return false;
    return true;
}

std::vector<Point> sorted_members(const PointSet& s) {
    std::vector<Point> out;
    for (auto i : s.members()) out.push_back(index_to_point(i, s.q(), s.n()));
    std::sort(out.begin(), out.end());
    return out;
}

PointSet random_set(CounterRng& rng, unsigned q, std::size_t n, std::size_t size) {
    PointSet s(q, n);
    for (std::size_t i = 0; i < size; ++i) s.insert_index(rng.below(s.universe()));
    return s;
}

} // namespace

TEST_CASE("PointSet basics and text round trip") {
    auto s = PointSet::from_points(2, 4, {Point{0, 0, 0, 0}, e(4, 2)});
    CHECK(s.count() == 2);
    CHECK(s.density() == doctest::Approx(2.0 / 16));
    CHECK(s.contains(e(4, 2)));
    CHECK(!s.contains(e(4, 1)));
    CHECK(s.members() == std::vector<std::uint64_t>{0, 4});
    CHECK(s.to_text() == "pointset q=2 n=4\n1100\n");
    CHECK(PointSet::parse(s.to_text()) == s);
    CHECK(PointSet::parse("# comment\n\npointset q=2 n=4\n11 00\n") == s);

    CounterRng rng(4);
    for (unsigned q : {2U, 3U, 5U}) {
        const auto r = random_set(rng, q, 5, 40);
        CHECK(PointSet::parse(r.to_text()) == r);
    }
    CHECK_THROWS_AS(PointSet::parse("pointset q=2 n=4\n11\n"), ParseError);
    CHECK_THROWS_AS(PointSet::parse("pointset q=2 n=4\n110000\n"), ParseError);
    CHECK_THROWS_AS(PointSet::parse("pointset q=2 n=2\n10\n"), ParseError);
    CHECK_THROWS_AS(PointSet::parse("pointset q=2 n=4\n1g00\n"), ParseError);
    CHECK_THROWS_AS(PointSet::parse("points q=2 n=4\n"), ParseError);
    CHECK_THROWS_AS(PointSet::parse("pointset q=4 n=2\n0000\n"), ParseError);
    try {
        PointSet::parse("pointset q=2 n=4\n1x00\n");
    } catch (const ParseError& err) {
        CHECK(err.line() == 2);
        CHECK(err.column() == 2);
    }
    CHECK_THROWS_AS(PointSet(2, 25), InfeasibleError);
}

TEST_CASE("verify_constant examples") {
    const Poly f = P("x1*x2*x3*x4*x5", 2, 5);
    const auto c = verify_constant(f, AffineSubspace::coordinate_hyperplane(2, 5, 0, 0));
    CHECK(c.verified);
    CHECK(c.subspace.dim() == 4);
    CHECK(*c.value == 0);
    CHECK(c.checked_points == 16);

    const auto pt = verify_constant(f, AffineSubspace::point(2, Point{1, 1, 1, 1, 1}));
    CHECK(pt.verified);
    CHECK(*pt.value == 1);

    const auto no = verify_constant(P("x1", 2, 2), AffineSubspace::full(2, 2));
    CHECK(!no.verified);
    CHECK(!no.value);
    REQUIRE(no.witness.size() == 2);
    CHECK(oracle::eval(P("x1", 2, 2), no.witness[0]) != oracle::eval(P("x1", 2, 2), no.witness[1]));
}

TEST_CASE("constant_subspace_exhaustive examples") {
    const auto full = constant_subspace_exhaustive(Poly(2, 3), 3);
    REQUIRE(full);
    CHECK(full->subspace.dim() == 3);
    CHECK(*full->value == 0);

    // Canonical order: span{e1} comes first and the offset 0 gives the x2 = 0 line.
    const auto line = constant_subspace_exhaustive(P("x1*x2", 2, 2), 1);
    REQUIRE(line);
    CHECK(line->verified);
    CHECK(*line->value == 0);
    CHECK(line->subspace == AffineSubspace(2, 2, Point{0, 0}, {Point{1, 0}}));

    CHECK(!constant_subspace_exhaustive(P("x1", 2, 2), 2));
    CHECK_THROWS_AS(constant_subspace_exhaustive(P("x1", 2, 2), 3), DomainError);
    CHECK_THROWS_AS(constant_subspace_exhaustive(Poly(2, 12), 6, {.max_work = 1 << 20}), InfeasibleError);
}

TEST_CASE("constant_subspace_greedy examples") {
    const auto r = constant_subspace_greedy(P("x1*x2*x3*x4*x5", 2, 10), 4, 1);
    CHECK(r.verified);
    CHECK(r.subspace.dim() >= 9);
    const auto k = constant_subspace_greedy(P("1", 3, 4), 1, 0);
    CHECK(k.subspace.dim() == 4);
    CHECK(*k.value == 1);
}

TEST_CASE("property: exhaustive optimum matches the oracle and bounds greedy") {
    CounterRng rng(17);
    for (int t = 0; t < 40; ++t) {
        const unsigned q = t % 4 == 3 ? 3 : 2;
        const std::size_t n = q == 2 ? 4 : 2;
        const Poly f = random_poly(q, n, 1 + static_cast<int>(rng.below(q == 2 ? 4 : 4)), rng.next());
        const auto best = constant_subspace_max(f);
        CHECK(best.verified);
        CHECK(reverifies(f, best));
        CHECK(best.subspace.dim() == oracle::max_constant_dim(f));
        const auto g = constant_subspace_greedy(f, 3, rng.next());
        CHECK(g.verified);
        CHECK(reverifies(f, g));
        CHECK(g.subspace.dim() <= best.subspace.dim());
        if (best.subspace.dim() < n) CHECK(!constant_subspace_exhaustive(f, best.subspace.dim() + 1));
    }
}

TEST_CASE("best_shift examples") {
    const Poly f = P("x1*x2 + x3", 2, 3);
    const auto all = best_shift(f, AffineSubspace::full(2, 3));
    CHECK(all.shift == Point{0, 0, 0});
    CHECK(all.bias == doctest::Approx(bias(f).value));
    CHECK(all.cosets == 1);

    const auto lines = best_shift(P("x1", 2, 2), AffineSubspace(2, 2, Point{0, 0}, {Point{0, 1}}));
    CHECK(lines.bias == 1.0);

    const auto prod = best_shift(P("x1*x2", 2, 2), AffineSubspace(2, 2, Point{0, 0}, {Point{1, 0}}));
    CHECK(prod.bias == 1.0);
    CHECK(prod.shift == Point{0, 0});
    CHECK(prod.cosets == 2);
}

TEST_CASE("property: best_shift beats the global bias") {
    CounterRng rng(29);
    for (int t = 0; t < 40; ++t) {
        const unsigned q = t % 3 == 2 ? 3 : 2;
        const std::size_t n = q == 2 ? 6 : 3;
        const Poly f = random_poly(q, n, 2 + static_cast<int>(rng.below(2)), rng.next());
        std::vector<Point> basis;
        for (std::size_t i = 0; i < 1 + rng.below(n - 1); ++i) basis.push_back(e(n, i));
        const AffineSubspace v(q, n, Point(n, 0), basis);
        const auto r = best_shift(f, v);
        CHECK(r.bias >= oracle::bias(f) - 1e-9);
        // Independent check of the reported coset.
        std::vector<Elem> values;
        for (const auto& s : oracle::span_of(basis, q, n)) values.push_back(oracle::eval(f, oracle::add(r.shift, s, q)));
        CHECK(oracle::bias_of_values(values, q) == doctest::Approx(r.bias));
        CHECK(r.cosets == static_cast<std::uint64_t>(std::pow(q, n - basis.size())));
    }
}

TEST_CASE("sumset examples") {
    const auto zero = PointSet::from_points(2, 3, {Point{0, 0, 0}});
    for (int k = 1; k <= 4; ++k) CHECK(sumset(zero, k) == zero);

    const auto sub = PointSet::of_subspace(AffineSubspace(3, 3, Point{0, 0, 0}, {Point{1, 2, 0}}));
    CHECK(sumset(sub, 2) == sub);

    const auto units = PointSet::from_points(2, 4, {e(4, 0), e(4, 1), e(4, 2), e(4, 3)});
    const auto s2 = sumset(units, 2);
    CHECK(s2.count() == 8);
    for (auto i : s2.members()) CHECK(std::popcount(i) % 2 == 0);

    CHECK_THROWS_AS(sumset(units, 5), DomainError);
    CHECK_THROWS_AS(sumset(PointSet(2, 21), 1), InfeasibleError);
}

TEST_CASE("property: sumset matches tuple enumeration and grows with k") {
    CounterRng rng(31);
    for (int t = 0; t < 24; ++t) {
        const unsigned q = t % 3 == 2 ? 3 : 2;
        const std::size_t n = q == 2 ? 5 : 3;
        auto a = random_set(rng, q, n, 1 + rng.below(4));
        const int k = 1 + static_cast<int>(rng.below(2));
        CHECK(sorted_members(sumset(a, k)) == oracle::sumset(sorted_members(a), k, q, n));
        a.insert_index(0);
        const auto s1 = sumset(a, k);
        const auto s2 = sumset(a, k + 1);
        for (auto i : s1.members()) CHECK(s2.contains_index(i));
    }
}

TEST_CASE("sumset transform paths agree with direct addition") {
    // Dense inputs take the transform path; compare with a hand-rolled union.
    CounterRng rng(5);
    for (unsigned q : {2U, 3U}) {
        const std::size_t n = q == 2 ? 12 : 7;
        const auto a = random_set(rng, q, n, 60);
        const auto s = sumset(a, 2);
        PointSet ref(q, n);
        const auto m = sorted_members(a);
        std::vector<Point> two;
        for (const auto& x : m)
            for (const auto& y : m) two.push_back(oracle::add(x, y, q));
        std::sort(two.begin(), two.end());
        two.erase(std::unique(two.begin(), two.end()), two.end());
        for (const auto& x : two)
            for (const auto& y : two) {
                Point d(n);
                for (std::size_t c = 0; c < n; ++c) d[c] = static_cast<Elem>((x[c] + q - y[c]) % q);
                ref.insert(d);
            }
        CHECK(s == ref);
    }
}

TEST_CASE("subspace_in_sumset examples") {
    const auto units = PointSet::from_points(2, 4, {e(4, 0), e(4, 1), e(4, 2), e(4, 3)});
    const auto c = subspace_in_sumset(units, 2, 3);
    REQUIRE(c);
    CHECK(c->verified);
    CHECK(c->claim == SubspaceClaim::sumset_membership);
    CHECK(c->subspace.dim() == 3);
    CHECK(c->checked_points == 8);
    for (const auto& b : c->subspace.basis()) CHECK(std::count(b.begin(), b.end(), 1) % 2 == 0);
    CHECK(reverifies(sorted_members(sumset(units, 2)), *c));

    const auto full = subspace_in_sumset(PointSet::full(3, 2), 1, 0);
    REQUIRE(full);
    CHECK(full->subspace.dim() == 2);

    const auto line = subspace_in_sumset(PointSet::from_points(2, 3, {Point{0, 0, 0}, e(3, 0)}), 1, 1);
    REQUIRE(line);
    CHECK(line->subspace == AffineSubspace(2, 3, Point{0, 0, 0}, {e(3, 0)}));

    CHECK(!subspace_in_sumset(PointSet::from_points(2, 3, {Point{0, 0, 0}, e(3, 0)}), 1, 2));
    CHECK(!subspace_in_sumset(PointSet(2, 3), 1, 0));
}

TEST_CASE("property: subspace_in_sumset certificates re-verify") {
    CounterRng rng(43);
    for (int t = 0; t < 20; ++t) {
        const unsigned q = t % 4 == 3 ? 3 : 2;
        const std::size_t n = q == 2 ? 6 : 3;
        const auto a = random_set(rng, q, n, 2 + rng.below(5));
        const auto c = subspace_in_sumset(a, 2, 0, {.seed = rng.next()});
        REQUIRE(c);
        CHECK(c->verified);
        CHECK(c->subspace.offset() == Point(n, 0));
        CHECK(reverifies(oracle::sumset(sorted_members(a), 2, q, n), *c));
    }
}
