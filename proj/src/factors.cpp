// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include "polystruct/factors.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "polystruct/analysis.hpp"
#include "polystruct/error.hpp"
#include "polystruct/parallel.hpp"
#include "polystruct/rng.hpp"

namespace polystruct {

namespace {

constexpr std::uint64_t kDirectionStream = 0x64697273;  // "dirs"

std::uint64_t checked_points(const PolynomialFactor& b, const FactorCaps& caps, std::string_view what) {
    return checked_domain_size(b.q(), b.n(), caps.max_points, what);
}

// Labels packed base q with P_1 most significant; fits for q^C < 2^63.
class LabelCoder {
public:
    explicit LabelCoder(const PolynomialFactor& b) : b_(b) {
        if (static_cast<double>(b.complexity()) * std::log2(static_cast<double>(b.q())) > 63)
            throw InfeasibleError("factor too large to label atoms");
        for (const auto& p : b.polys()) tables_.push_back(&p.table());
    }
    std::uint64_t key(std::uint64_t x) const {
        std::uint64_t k = 0;
        for (const auto* t : tables_) k = k * b_.q() + (*t)[x];
        return k;
    }
    AtomLabel decode(std::uint64_t k) const {
        AtomLabel l(tables_.size());
        for (std::size_t i = l.size(); i-- > 0;) {
            l[i] = static_cast<Elem>(k % b_.q());
            k /= b_.q();
        }
        return l;
    }

private:
    const PolynomialFactor& b_;
    std::vector<const std::vector<Elem>*> tables_;
};

} // namespace

PolynomialFactor::PolynomialFactor(unsigned q, std::size_t n, std::vector<Poly> polys)
    : q_(q), n_(n), polys_(std::move(polys)) {
    (void)PrimeField(q);
    for (const auto& p : polys_)
        if (p.q() != q || p.n() != n) throw FieldMismatch("factor members must share q and n");
}

int PolynomialFactor::degree() const {
    int d = 0;
    for (const auto& p : polys_) d = std::max(d, p.degree());
    return d;
}

AtomLabel atom_of(const PolynomialFactor& b, std::span<const Elem> x) {
    if (x.size() != b.n()) throw DomainError("point arity does not match the factor");
    AtomLabel l;
    for (const auto& p : b.polys()) l.push_back(p.evaluate(x));
    return l;
}

std::map<AtomLabel, std::vector<std::uint64_t>> atoms(const PolynomialFactor& b, const FactorCaps& caps) {
    const std::uint64_t points = checked_points(b, caps, "atoms");
    const LabelCoder coder(b);
    std::map<std::uint64_t, std::vector<std::uint64_t>> by_key;
    for (std::uint64_t x = 0; x < points; ++x) by_key[coder.key(x)].push_back(x);
    std::map<AtomLabel, std::vector<std::uint64_t>> out;
    for (auto& [k, v] : by_key) out.emplace(coder.decode(k), std::move(v));
    return out;
}

UnbiasednessResult unbiasedness_check(const PolynomialFactor& b, double epsilon, const FactorCaps& caps) {
    const unsigned q = b.q();
    const std::size_t c = b.complexity();
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < c; ++i) {
        combos *= q;
        if (combos > caps.max_combinations)
            throw InfeasibleError("unbiasedness scan over " + std::to_string(c) + " polynomials exceeds the cap");
    }
    (void)checked_points(b, caps, "unbiasedness_check");
    UnbiasednessResult res;
    res.combinations = combos - 1;
    if (combos == 1) return res;

    // Digits of k (base q, lambda_1 most significant) give the combination;
    // k = 1 .. q^C - 1 is lexicographic order.
    auto lambda_of = [&](std::uint64_t k) {
        std::vector<Elem> l(c);
        for (std::size_t i = c; i-- > 0;) {
            l[i] = static_cast<Elem>(k % q);
            k /= q;
        }
        return l;
    };
    std::vector<double> biases(combos - 1);
    if (q == 2) {
        std::vector<const std::vector<std::uint64_t>*> bits;
        for (const auto& p : b.polys()) bits.push_back(&p.bit_table());
        const std::size_t words = bits.front()->size();
        parallel_chunks(biases.size(), 64, [&](std::size_t, std::size_t lo, std::size_t hi) {
            std::vector<std::uint64_t> acc(words);
            for (std::size_t j = lo; j < hi; ++j) {
                const auto l = lambda_of(j + 1);
                std::fill(acc.begin(), acc.end(), 0);
                for (std::size_t i = 0; i < c; ++i)
                    if (l[i])
                        for (std::size_t w = 0; w < words; ++w) acc[w] ^= (*bits[i])[w];
                biases[j] = bias_of_bits(acc, static_cast<unsigned>(b.n()));
            }
        });
    } else {
        std::vector<const std::vector<Elem>*> tables;
        for (const auto& p : b.polys()) tables.push_back(&p.table());
        const std::size_t points = tables.front()->size();
        parallel_chunks(biases.size(), 64, [&](std::size_t, std::size_t lo, std::size_t hi) {
            std::vector<Elem> acc(points);
            for (std::size_t j = lo; j < hi; ++j) {
                const auto l = lambda_of(j + 1);
                std::fill(acc.begin(), acc.end(), 0);
                for (std::size_t i = 0; i < c; ++i)
                    if (l[i])
                        for (std::size_t x = 0; x < points; ++x)
                            acc[x] = static_cast<Elem>((acc[x] + unsigned{l[i]} * (*tables[i])[x]) % q);
                biases[j] = bias_of_values(acc, q);
            }
        });
    }
    for (std::size_t j = 0; j < biases.size(); ++j) {
        res.max_bias = std::max(res.max_bias, biases[j]);
        if (res.pass && biases[j] >= epsilon) {
            res.pass = false;
            res.witness = lambda_of(j + 1);
            res.witness_bias = biases[j];
        }
    }
    return res;
}

RefinementResult refines(const PolynomialFactor& finer, const PolynomialFactor& coarser, const FactorCaps& caps) {
    if (finer.q() != coarser.q() || finer.n() != coarser.n()) throw FieldMismatch("factors live in different spaces");
    const std::uint64_t points = checked_points(finer, caps, "refines");
    RefinementResult res;
    res.syntactic = coarser.complexity() <= finer.complexity() &&
                    std::equal(coarser.polys().begin(), coarser.polys().end(), finer.polys().begin());
    const LabelCoder fine(finer), coarse(coarser);
    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> seen;  // fine -> (coarse, point)
    res.semantic = true;
    for (std::uint64_t x = 0; x < points; ++x) {
        const auto [it, fresh] = seen.try_emplace(fine.key(x), coarse.key(x), x);
        if (!fresh && it->second.first != coarse.key(x)) {
            res.semantic = false;
            res.witness = {index_to_point(it->second.second, finer.q(), finer.n()),
                           index_to_point(x, finer.q(), finer.n())};
            break;
        }
    }
    return res;
}

ComposeResult compose(const PolynomialFactor& b, const Poly& f, const FactorCaps& caps) {
    if (f.q() != b.q() || f.n() != b.n()) throw FieldMismatch("polynomial and factor live in different spaces");
    const std::uint64_t points = checked_points(b, caps, "compose");
    const LabelCoder coder(b);
    const auto& ft = f.table();
    std::map<std::uint64_t, std::pair<Elem, std::uint64_t>> gamma;
    ComposeResult res;
    for (std::uint64_t x = 0; x < points; ++x) {
        const auto [it, fresh] = gamma.try_emplace(coder.key(x), ft[x], x);
        if (!fresh && it->second.first != ft[x]) {
            res.witness_atom = coder.decode(it->first);
            res.witness_points = {index_to_point(it->second.second, b.q(), b.n()), index_to_point(x, b.q(), b.n())};
            return res;
        }
    }
    res.is_function = true;
    for (const auto& [k, v] : gamma) res.gamma.emplace(coder.decode(k), v.first);
    return res;
}

double RegularityPolicy::epsilon_at(std::size_t complexity) const {
    if (epsilon_schedule.empty()) return epsilon;
    return epsilon_schedule[std::min(complexity, epsilon_schedule.size() - 1)];
}

namespace {

// Unit vectors, weight-two vectors, then `extra` seeded nonzero vectors.
std::vector<Point> direction_sequence(unsigned q, std::size_t n, std::uint64_t seed, std::size_t extra) {
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
    CounterRng rng(seed, kDirectionStream);
    while (extra > 0 && n > 0) {
        Point y(n);
        for (auto& v : y) v = static_cast<Elem>(rng.below(q));
        if (std::any_of(y.begin(), y.end(), [](Elem e) { return e != 0; })) {
            out.push_back(std::move(y));
            --extra;
        }
    }
    return out;
}

std::vector<Poly> cleaned(const std::vector<Poly>& polys) {
    std::vector<Poly> out;
    for (const auto& p : polys)
        if (!p.is_constant() && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    return out;
}

} // namespace

RegularizeResult regularize(const PolynomialFactor& b, const RegularityPolicy& policy, const FactorCaps& caps) {
    if (b.degree() > static_cast<int>(b.q()) + 1)
        throw DomainError("regularize handles factors of degree <= q + 1 only");
    if (policy.max_rounds < 0 || policy.directions < 1 || policy.retry_cap < 0)
        throw DomainError("invalid regularity policy");
    for (std::size_t i = 1; i < policy.epsilon_schedule.size(); ++i)
        if (policy.epsilon_schedule[i] > policy.epsilon_schedule[i - 1])
            throw DomainError("epsilon schedule must be nonincreasing");

    const unsigned q = b.q();
    const std::size_t n = b.n();
    const auto dirs = direction_sequence(q, n, policy.seed, 64);
    RegularizeResult res{PolynomialFactor(q, n, cleaned(b.polys())), {}, {}, false, false};

    bool unbiased = false;
    for (int round = 0; round < policy.max_rounds; ++round) {
        const PolynomialFactor& cur = res.factor;
        const auto check = unbiasedness_check(cur, policy.epsilon_at(cur.complexity()), caps);
        if (check.pass) {
            unbiased = true;
            break;
        }
        const auto& lambda = *check.witness;
        std::size_t idx = 0;
        int best = -1;
        for (std::size_t i = 0; i < lambda.size(); ++i)
            if (lambda[i] && cur.polys()[i].degree() >= best) {
                best = cur.polys()[i].degree();
                idx = i;
            }
        const Poly& p = cur.polys()[idx];
        std::vector<Poly> rest;
        for (std::size_t i = 0; i < cur.complexity(); ++i)
            if (i != idx) rest.push_back(cur.polys()[i]);

        RegularizeRound entry{lambda, check.witness_bias, idx, {}, {}, 0, false};
        std::optional<PolynomialFactor> next;
        for (int r = policy.directions; r <= policy.directions + policy.retry_cap; ++r) {
            ++entry.attempts;
            entry.directions.clear();
            entry.added.clear();
            // First r directions whose derivative is nonconstant and new.
            for (const auto& y : dirs) {
                if (static_cast<int>(entry.directions.size()) == r) break;
                Poly dp = derivative(p, y);
                if (dp.is_constant()) continue;
                if (std::find(rest.begin(), rest.end(), dp) != rest.end()) continue;
                if (std::find(entry.added.begin(), entry.added.end(), dp) != entry.added.end()) continue;
                entry.directions.push_back(y);
                entry.added.push_back(std::move(dp));
            }
            std::vector<Poly> polys = rest;
            polys.insert(polys.end(), entry.added.begin(), entry.added.end());
            PolynomialFactor candidate(q, n, std::move(polys));
            if (refines(candidate, cur, caps).semantic) {
                next = std::move(candidate);
                break;
            }
        }
        entry.refined = next.has_value();
        res.trace.push_back(std::move(entry));
        if (!next) {
            res.refinement_failed = true;
            break;
        }
        res.factor = std::move(*next);
    }
    if (!unbiased && !res.refinement_failed) {
        // Rounds ran out; the final scan below decides.
        res.not_regular = !unbiasedness_check(res.factor, policy.epsilon_at(res.factor.complexity()), caps).pass;
    }

    auto& cert = res.certificate;
    cert.epsilon = policy.epsilon_at(res.factor.complexity());
    const auto fresh = unbiasedness_check(res.factor, cert.epsilon, caps);
    cert.unbiased = fresh.pass;
    cert.max_bias = fresh.max_bias;
    cert.combinations = fresh.combinations;
    const auto ref = refines(res.factor, b, caps);
    cert.semantic_refinement = ref.semantic;
    cert.syntactic_refinement = ref.syntactic;
    return res;
}

} // namespace polystruct
