// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "polystruct/error.hpp"
#include "polystruct/linalg.hpp"
#include "polystruct/structure.hpp"
#include "structure/top_degree.hpp"

namespace polystruct {

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > UINT64_MAX - b ? UINT64_MAX : a + b; }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) { return b && a > UINT64_MAX / b ? UINT64_MAX : a * b; }

Poly combine(unsigned q, std::size_t n, const std::vector<Monomial>& basis, std::span<const Elem> coeffs) {
    Poly::Terms t;
    for (std::size_t j = 0; j < basis.size(); ++j)
        if (coeffs[j]) t.emplace(basis[j], coeffs[j]);
    return Poly(q, n, std::move(t));
}

// All ways to write r as k_1 + ... + k_m with 0 <= k_i <= cap_i.
void compositions(int r, const std::vector<std::size_t>& caps, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
    if (cur.size() == caps.size()) {
        if (r == 0) out.push_back(cur);
        return;
    }
    for (int k = std::min<int>(r, static_cast<int>(caps[cur.size()])); k >= 0; --k) {
        cur.push_back(k);
        compositions(r - k, caps, cur, out);
        cur.pop_back();
    }
}

} // namespace

StrongRankResult strong_rank_oracle(const Poly& f, int r_max, int d, const OracleCaps& caps) {
    if (r_max < 0 || d < 1) throw DomainError("strong_rank_oracle needs r_max >= 0 and d >= 1");
    const unsigned q = f.q();
    const std::size_t n = f.n();
    StrongRankResult res;
    if (f.degree() <= d - 1) {
        res.rank = 0;
        res.witness = Decomposition{d, {}, f};
        return res;
    }
    if (f.degree() > d) return res;

    // g_i may be taken homogeneous of degree a <= d/2 (swap g and h
    // otherwise; lower parts only feed the remainder), and only the span of
    // the g's of each degree matters.
    std::vector<std::vector<Monomial>> classes;
    std::vector<std::size_t> dims;
    for (int a = 1; 2 * a <= d; ++a) {
        classes.push_back(monomials_of_degree(q, n, a));
        dims.push_back(classes.back().size());
    }
    std::vector<std::vector<std::vector<int>>> plans(static_cast<std::size_t>(r_max) + 1);
    std::uint64_t total = 0;
    for (int r = 1; r <= r_max; ++r) {
        std::vector<int> cur;
        compositions(r, dims, cur, plans[r]);
        for (const auto& plan : plans[r]) {
            std::uint64_t count = 1;
            for (std::size_t c = 0; c < plan.size(); ++c)
                count = sat_mul(count, gaussian_binomial(q, dims[c], static_cast<std::size_t>(plan[c])));
            total = sat_add(total, count);
        }
    }
    if (total > caps.max_candidates)
        throw InfeasibleError("strong_rank_oracle would examine " + std::to_string(total) + " candidate tuples");

    const detail::TopDegreeSystem sys(f, d);
    for (int r = 1; r <= r_max; ++r) {
        for (const auto& plan : plans[r]) {
            std::size_t columns = 0;
            for (std::size_t c = 0; c < plan.size(); ++c)
                columns += static_cast<std::size_t>(plan[c]) * monomial_count(q, n, d - static_cast<int>(c + 1), true);
            std::vector<detail::Block> blocks;
            std::function<bool(std::size_t, const detail::Span&, std::size_t)> rec =
                [&](std::size_t cls, const detail::Span& span, std::size_t used) -> bool {
                if (cls == plan.size()) {
                    ++res.candidates;
                    if (const auto coeffs = span.express(sys)) {
                        std::vector<const detail::Block*> ptrs;
                        for (const auto& b : blocks) ptrs.push_back(&b);
                        res.witness = sys.assemble(ptrs, *coeffs);
                        return false;
                    }
                    return true;
                }
                if (plan[cls] == 0) return rec(cls + 1, span, used);
                return for_each_subspace(q, dims[cls], static_cast<std::size_t>(plan[cls]), [&](const Matrix& m) {
                    detail::Span next = span;
                    std::size_t at = used;
                    const std::size_t mark = blocks.size();
                    for (std::size_t row = 0; row < m.rows(); ++row) {
                        blocks.push_back(sys.make_block(combine(q, n, classes[cls], m.row(row))));
                        next.add(blocks.back(), at);
                        at += blocks.back().h_monos.size();
                    }
                    const bool go_on = rec(cls + 1, next, at);
                    if (go_on) blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(mark), blocks.end());
                    return go_on;
                });
            };
            if (!rec(0, detail::Span(q, sys.rows(), columns), 0)) {
                res.rank = static_cast<int>(res.witness->size());
                if (res.witness->size() != static_cast<std::size_t>(r) || !verify_decomposition(f, *res.witness))
                    throw std::logic_error("strong_rank_oracle produced an invalid witness");
                return res;
            }
        }
    }
    return res;
}

CrankResult crank_oracle(const Poly& f, int r_max, int d, const OracleCaps& caps) {
    if (r_max < 0 || d < 1) throw DomainError("crank_oracle needs r_max >= 0 and d >= 1");
    const unsigned q = f.q();
    const std::size_t n = f.n();
    const std::uint64_t points = checked_domain_size(q, n, caps.max_points, "crank_oracle");
    CrankResult res;
    if (f.is_constant()) {
        res.rank = 0;
        return res;
    }
    // Constants never separate points, so candidates are spans of the
    // nonconstant monomials of degree <= d - 1.
    std::vector<Monomial> basis;
    for (const auto& m : monomials_up_to(q, n, d - 1))
        if (m.degree() > 0) basis.push_back(m);
    const std::size_t dim = basis.size();
    const int top = std::min<int>(r_max, static_cast<int>(dim));
    std::uint64_t total = 0;
    for (int r = 1; r <= top; ++r) total = sat_add(total, gaussian_binomial(q, dim, static_cast<std::size_t>(r)));
    if (total > caps.max_candidates)
        throw InfeasibleError("crank_oracle would examine " + std::to_string(total) + " candidate spans");

    std::vector<std::vector<Elem>> tables;
    for (const auto& m : basis) tables.push_back(Poly::monomial(q, m).table());
    const auto& ft = f.table();
    const PrimeField& F = f.field();

    for (int r = 1; r <= top; ++r) {
        std::uint64_t fibers = 1;
        for (int i = 0; i < r; ++i) fibers *= q;
        std::vector<int> seen(fibers);
        std::vector<std::vector<Elem>> comp(static_cast<std::size_t>(r), std::vector<Elem>(points));
        const bool stopped = !for_each_subspace(q, dim, static_cast<std::size_t>(r), [&](const Matrix& m) {
            ++res.candidates;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                auto& t = comp[i];
                std::fill(t.begin(), t.end(), 0);
                for (std::size_t j = 0; j < dim; ++j) {
                    const Elem c = m.at(i, j);
                    if (!c) continue;
                    for (std::uint64_t x = 0; x < points; ++x) t[x] = F.add(t[x], F.mul(c, tables[j][x]));
                }
            }
            std::fill(seen.begin(), seen.end(), -1);
            for (std::uint64_t x = 0; x < points; ++x) {
                std::uint64_t key = 0;
                for (std::size_t i = 0; i < comp.size(); ++i) key = key * q + comp[i][x];
                if (seen[key] < 0)
                    seen[key] = ft[x];
                else if (seen[key] != ft[x])
                    return true;  // f separates a fiber
            }
            for (std::size_t i = 0; i < m.rows(); ++i) res.components.push_back(combine(q, n, basis, m.row(i)));
            return false;
        });
        if (stopped) {
            res.rank = r;
            return res;
        }
    }
    return res;
}

} // namespace polystruct
