// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "polystruct/analysis.hpp"
#include "polystruct/error.hpp"
#include "polystruct/structure.hpp"
#include "structure/top_degree.hpp"

namespace polystruct {

namespace {

using Clock = std::chrono::steady_clock;

// Scales p so its leading coefficient (canonical order) is 1.
Poly monic(const Poly& p) {
    const Elem lead = p.terms().begin()->second;
    return lead == 1 ? p : scale(p, p.field().inv(lead));
}

class Pool {
public:
    void offer(const Poly& p) {
        if (p.is_zero()) return;
        Poly m = monic(p);
        if (seen_.insert(m.to_string()).second) items_.push_back(std::move(m));
    }
    std::vector<Poly>& items() { return items_; }
    std::size_t size() const { return items_.size(); }

private:
    std::set<std::string> seen_;
    std::vector<Poly> items_;
};

void sub_monomials(std::span<const std::uint8_t> e, int a, std::size_t i, std::vector<std::uint8_t>& cur,
                   std::vector<std::vector<std::uint8_t>>& out) {
    if (a == 0) {
        std::vector<std::uint8_t> full = cur;
        full.resize(e.size(), 0);
        out.push_back(std::move(full));
        return;
    }
    if (i == e.size()) return;
    for (int k = std::min<int>(e[i], a); k >= 0; --k) {
        cur.push_back(static_cast<std::uint8_t>(k));
        sub_monomials(e, a - k, i + 1, cur, out);
        cur.pop_back();
    }
}

// Low-weight directions: unit vectors, then e_i + e_j for i < j.
std::vector<Point> directions(std::size_t n) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i) {
        Point y(n, 0);
        y[i] = 1;
        out.push_back(std::move(y));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Point y(n, 0);
            y[i] = y[j] = 1;
            out.push_back(std::move(y));
        }
    return out;
}

std::vector<Poly> build_pool(const Poly& top, int a, const SearchOptions& opt) {
    const unsigned q = top.q();
    const std::size_t n = top.n();
    const int d = top.degree();
    Pool pool;

    // (a) divisors of the top-degree monomials.
    for (const auto& [m, c] : top.terms()) {
        std::vector<std::vector<std::uint8_t>> subs;
        std::vector<std::uint8_t> cur;
        sub_monomials(m.exponents(), a, 0, cur, subs);
        for (auto& e : subs) pool.offer(Poly::monomial(q, Monomial(std::move(e))));
    }

    // (b) degree-a parts of (d - a)-fold derivatives. Only the top part of f
    // contributes to them.
    const auto dirs = directions(n);
    const std::size_t want = pool.size() + opt.derivative_pool;
    std::size_t budget = 8 * opt.derivative_pool;
    std::function<void(const Poly&, int, std::size_t)> walk = [&](const Poly& p, int left, std::size_t from) {
        if (pool.size() >= want || budget == 0) return;
        if (left == 0) {
            --budget;
            pool.offer(p.homogeneous_part(a));
            return;
        }
        for (std::size_t i = from; i < dirs.size() && pool.size() < want && budget; ++i) {
            const Poly dp = derivative(p, dirs[i]);
            if (dp.degree() >= a) walk(dp, left - 1, i + 1);
        }
    };
    walk(top, d - a, 0);

    // (c) every member of a small homogeneous class, leading coefficient 1.
    const auto monos = monomials_of_degree(q, n, a);
    double members = 1;
    for (std::size_t i = 0; i < monos.size() && members <= 2.0 * static_cast<double>(opt.exhaustive_cap); ++i) members *= q;
    if (members - 1 <= static_cast<double>(opt.exhaustive_cap)) {
        std::vector<Elem> c(monos.size(), 0);
        for (;;) {
            // Counter with the first monomial as the most significant digit.
            std::size_t i = monos.size();
            while (i > 0 && c[i - 1] == q - 1) c[--i] = 0;
            if (i == 0) break;
            ++c[i - 1];
            std::size_t lead = 0;
            while (c[lead] == 0) ++lead;
            if (c[lead] != 1) continue;
            Poly::Terms t;
            for (std::size_t j = 0; j < monos.size(); ++j)
                if (c[j]) t.emplace(monos[j], c[j]);
            pool.offer(Poly(q, n, std::move(t)));
        }
    }
    return std::move(pool.items());
}

std::string describe(const std::vector<int>& seq) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < seq.size(); ++i) os << (i ? "," : "") << seq[i];
    os << ')';
    return os.str();
}

} // namespace

SearchResult decompose_search(const Poly& f, const SearchOptions& opt) {
    const int d = opt.budget.value_or(f.degree());
    SearchResult res;
    if (f.degree() > d) throw DomainError("deg(f) exceeds the degree budget");
    if (f.degree() <= d - 1) {
        res.decomposition = Decomposition{d, {}, f};
        res.status = "found";
        res.log.push_back("c=0: degree below budget");
        return res;
    }
    if (d < 2) throw DomainError("decompose_search needs degree >= 2");
    if (opt.c_max < 1) throw DomainError("c_max must be positive");

    const auto start = Clock::now();
    auto out_of_time = [&] {
        if (opt.time_budget <= 0) return false;
        return std::chrono::duration<double>(Clock::now() - start).count() > opt.time_budget;
    };

    const unsigned q = f.q();
    const Poly top = f.homogeneous_part(d);
    const detail::TopDegreeSystem sys(f, d);
    // Pools and their column blocks are built once per degree class.
    std::vector<std::optional<std::vector<detail::Block>>> blocks(static_cast<std::size_t>(d));
    auto blocks_for = [&](int a) -> const std::vector<detail::Block>& {
        auto& slot = blocks[static_cast<std::size_t>(a)];
        if (!slot) {
            slot.emplace();
            for (const auto& g : build_pool(top, a, opt)) slot->push_back(sys.make_block(g));
            res.log.push_back("pool degree " + std::to_string(a) + ": " + std::to_string(slot->size()) + " candidates");
        }
        return *slot;
    };

    for (int c = 1; c <= opt.c_max; ++c) {
        // Nondecreasing sequences 1 <= d_1 <= ... <= d_c <= d - 1 in lex order;
        // the partner degrees are d - d_i (lower ones only feed the remainder).
        std::vector<int> seq(static_cast<std::size_t>(c), 1);
        for (;;) {
            std::size_t columns = 0;
            for (int a : seq) columns += monomial_count(q, f.n(), d - a, true);
            std::vector<const detail::Block*> chosen;
            std::uint64_t tried = 0;
            bool found = false;
            std::function<bool(std::size_t, const detail::Span&, std::size_t, std::size_t)> rec =
                [&](std::size_t level, const detail::Span& span, std::size_t used, std::size_t from) -> bool {
                const auto& cands = blocks_for(seq[level]);
                for (std::size_t j = from; j < cands.size(); ++j) {
                    if ((res.candidates & 255) == 0 && out_of_time()) {
                        res.timed_out = true;
                        return false;
                    }
                    detail::Span next = span;
                    next.add(cands[j], used);
                    chosen.push_back(&cands[j]);
                    if (level + 1 == seq.size()) {
                        ++res.candidates;
                        ++tried;
                        if (const auto coeffs = next.express(sys)) {
                            res.decomposition = sys.assemble(chosen, *coeffs);
                            found = true;
                            return false;
                        }
                    } else {
                        const std::size_t nfrom = seq[level + 1] == seq[level] ? j + 1 : 0;
                        if (!rec(level + 1, next, used + cands[j].h_monos.size(), nfrom)) return false;
                    }
                    chosen.pop_back();
                }
                return true;
            };
            rec(0, detail::Span(q, sys.rows(), columns), 0, 0);
            res.log.push_back("c=" + std::to_string(c) + " degrees=" + describe(seq) + ": " + std::to_string(tried) +
                              " tried" + (found ? ", found" : ""));
            if (found) {
                if (!verify_decomposition(f, *res.decomposition))
                    throw std::logic_error("decompose_search assembled an invalid decomposition");
                res.status = "found";
                return res;
            }
            if (res.timed_out) {
                res.log.push_back("time budget exceeded");
                res.status = "budget exhausted";
                return res;
            }
            std::size_t i = seq.size();
            while (i > 0 && seq[i - 1] == d - 1) --i;
            if (i == 0) break;
            ++seq[i - 1];
            for (std::size_t k = i; k < seq.size(); ++k) seq[k] = seq[i - 1];
        }
    }
    res.status = "budget exhausted";
    return res;
}

} // namespace polystruct
