// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include "polystruct/nonclassical.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "polystruct/error.hpp"
#include "polystruct/rng.hpp"

namespace polystruct {

NonclassicalPoly::NonclassicalPoly(unsigned q, std::size_t n) : q_(q), n_(n) { (void)PrimeField(q); }

NonclassicalPoly::NonclassicalPoly(unsigned q, std::size_t n, std::map<Key, Elem> coeffs) : NonclassicalPoly(q, n) {
    for (auto& [key, c] : coeffs) {
        const auto& [exps, k] = key;
        if (exps.size() != n) throw DomainError("normal-form exponent vector has wrong length");
        if (k > kMaxDepth) throw DomainError("depth above " + std::to_string(kMaxDepth) + " is not supported");
        int total = 0;
        for (auto e : exps) {
            if (e >= q) throw DomainError("normal-form exponent must be below q");
            total += e;
        }
        if (total == 0) throw DomainError("normal-form monomials need positive total degree (shift is fixed at 0)");
        const auto r = static_cast<Elem>(c % q);
        if (r) coeffs_.emplace(key, r);
    }
}

NonclassicalPoly NonclassicalPoly::from_classical(const Poly& f) {
    std::map<Key, Elem> coeffs;
    for (const auto& [m, c] : f.terms()) {
        if (m.degree() == 0) throw DomainError("classical embedding needs a zero constant term");
        coeffs.emplace(Key{std::vector<std::uint8_t>(m.exponents().begin(), m.exponents().end()), 0}, c);
    }
    return NonclassicalPoly(f.q(), f.n(), std::move(coeffs));
}

unsigned NonclassicalPoly::depth() const noexcept {
    unsigned d = 0;
    for (const auto& [key, c] : coeffs_) d = std::max(d, key.second);
    return d;
}

int NonclassicalPoly::degree() const noexcept {
    int best = kZeroDegree;
    for (const auto& [key, c] : coeffs_) {
        int total = static_cast<int>(key.second * (q_ - 1));
        for (auto e : key.first) total += e;
        best = std::max(best, total);
    }
    return best;
}

TorusValue NonclassicalPoly::evaluate(std::span<const Elem> x) const {
    if (x.size() != n_) throw DomainError("evaluation point has wrong dimension");
    const unsigned top = depth();
    const std::uint64_t modulus = ipow(q_, top + 1);
    std::uint64_t acc = 0;
    for (const auto& [key, c] : coeffs_) {
        // Integer product |x_1|^{d_1}...|x_n|^{d_n}, reduced mod q^{top+1}.
        std::uint64_t term = c;
        for (std::size_t i = 0; i < n_ && term; ++i)
            for (unsigned e = 0; e < key.first[i]; ++e) term = term * (x[i] % q_) % modulus;
        acc = (acc + term * ipow(q_, top - key.second)) % modulus;
    }
    return TorusValue(q_, acc, top + 1);
}

TorusValue NonclassicalPoly::evaluate_index(std::uint64_t index) const {
    return evaluate(index_to_point(index, q_, n_));
}

TorusValue nc_eval(const NonclassicalPoly& p, std::span<const Elem> x) { return p.evaluate(x); }

bool TorusTable::is_zero() const {
    return std::all_of(numerators.begin(), numerators.end(), [](std::uint64_t v) { return v == 0; });
}

TorusTable nc_table(const NonclassicalPoly& p) {
    const std::uint64_t size = checked_domain_size(p.q(), p.n(), kTableCap, "nonclassical table");
    TorusTable t{p.q(), p.n(), p.depth() + 1, std::vector<std::uint64_t>(size)};
    for (std::uint64_t i = 0; i < size; ++i) t.numerators[i] = p.evaluate_index(i).numerator();
    return t;
}

TorusTable table_derivative(const TorusTable& t, std::span<const Elem> y) {
    if (y.size() != t.n) throw DomainError("direction has wrong dimension");
    const std::uint64_t modulus = ipow(t.q, t.log_denominator);
    const std::uint64_t size = t.numerators.size();
    const auto shifted = translation_indices(t.q, t.n, y);
    TorusTable out{t.q, t.n, t.log_denominator, std::vector<std::uint64_t>(size)};
    for (std::uint64_t x = 0; x < size; ++x)
        out.numerators[x] = (t.numerators[shifted[x]] + modulus - t.numerators[x]) % modulus;
    return out;
}

TorusTable nc_derivative(const NonclassicalPoly& p, std::span<const Elem> y) {
    if (y.size() != p.n()) throw DomainError("direction has wrong dimension");
    return table_derivative(nc_table(p), y);
}

namespace {

// D_{y_1}...D_{y_k} P(x) by inclusion-exclusion over the 2^k corner points.
TorusValue iterated_derivative(const NonclassicalPoly& p, const std::vector<Point>& ys, const Point& x) {
    const unsigned q = p.q();
    const std::size_t k = ys.size();
    const unsigned log_den = p.depth() + 1;
    const std::uint64_t modulus = ipow(q, log_den);
    std::uint64_t acc = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s) {
        Point z = x;
        for (std::size_t j = 0; j < k; ++j)
            if ((s >> j) & 1u)
                for (std::size_t i = 0; i < z.size(); ++i) z[i] = static_cast<Elem>((z[i] + ys[j][i]) % q);
        const std::uint64_t v = p.evaluate(z).lifted(log_den).numerator();
        const bool negative = ((k - static_cast<std::size_t>(std::popcount(s))) & 1u) != 0;
        acc = negative ? (acc + modulus - v) % modulus : (acc + v) % modulus;
    }
    return TorusValue(q, acc, log_den);
}

struct ExhaustiveSearch {
    const NonclassicalPoly& p;
    int d;
    std::uint64_t size;
    std::uint64_t checked = 0;
    std::vector<std::uint64_t> directions;

    // Returns true once a counterexample has been recorded in `directions`.
    bool descend(const TorusTable& t, int level) {
        if (level == d) {
            // Every further derivative vanishes iff t is constant.
            checked += (size - 1) * size;
            for (std::uint64_t x = 1; x < size; ++x)
                if (t.numerators[x] != t.numerators[0]) {
                    directions.push_back(x);
                    return true;
                }
            return false;
        }
        for (std::uint64_t y = 1; y < size; ++y) {
            directions.push_back(y);
            if (descend(table_derivative(t, index_to_point(y, p.q(), p.n())), level + 1)) return true;
            directions.pop_back();
        }
        return false;
    }
};

} // namespace

DegreeCheckResult nc_degree_check(const NonclassicalPoly& p, int d, const DegreeCheckOptions& options) {
    if (d < 0) throw DomainError("degree bound must be nonnegative");
    DegreeCheckResult result;
    const auto size = domain_size(p.q(), p.n());
    // Tuples with nonzero directions: (q^n - 1)^{d+1} * q^n.
    bool feasible = size && *size <= kTableCap;
    std::uint64_t tuples = feasible ? *size : 0;
    for (int j = 0; j <= d && feasible; ++j) {
        if (*size > 1 && tuples > options.exhaustive_cap / (*size - 1)) feasible = false;
        tuples *= *size - 1;
    }
    feasible = feasible && tuples <= options.exhaustive_cap;

    if (feasible) {
        if (*size == 1) return result;
        ExhaustiveSearch search{p, d, *size, 0, {}};
        const bool found = search.descend(nc_table(p), 0);
        result.tuples_checked = found ? search.checked : tuples;
        if (found) {
            result.holds = false;
            for (auto y : search.directions) result.witness.push_back(index_to_point(y, p.q(), p.n()));
            const Point x(p.n(), 0);
            std::vector<Point> ys = result.witness;
            result.witness.push_back(x);
            result.witness_value = iterated_derivative(p, ys, x);
        }
        return result;
    }
    if (!options.allow_sampling)
        throw InfeasibleError("exhaustive degree check needs more than " + std::to_string(options.exhaustive_cap) +
                              " tuples; enable sampling");

    result.sampled = true;
    CounterRng rng(options.seed, 0x6e636465); // "ncde"
    auto draw = [&] {
        Point v(p.n());
        for (auto& c : v) c = static_cast<Elem>(rng.below(p.q()));
        return v;
    };
    for (std::uint64_t s = 0; s < options.samples; ++s) {
        std::vector<Point> ys;
        for (int j = 0; j <= d; ++j) ys.push_back(draw());
        const Point x = draw();
        ++result.tuples_checked;
        const TorusValue v = iterated_derivative(p, ys, x);
        if (!v.is_zero()) {
            result.holds = false;
            result.witness = ys;
            result.witness.push_back(x);
            result.witness_value = v;
            break;
        }
    }
    return result;
}

// --- text format ------------------------------------------------------------

NonclassicalPoly parse_nonclassical(std::string_view text) {
    auto [header, body] = split_header(text);
    if (!header.q || !header.n) throw ParseError("nonclassical file needs a 'q=<q> n=<n>' header", 1, 1);
    const unsigned q = *header.q;
    const std::size_t n = *header.n;
    if (!is_prime(q) || q > kMaxModulus) throw ParseError("header modulus must be a prime <= 31", 1, 1);
    std::map<NonclassicalPoly::Key, Elem> coeffs;
    std::istringstream in(body);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::vector<long long> values;
        long long v = 0;
        while (fields >> v) values.push_back(v);
        if (!fields.eof()) throw ParseError("expected integers", line_no, 1);
        if (values.empty()) continue;
        if (values.size() != n + 2)
            throw ParseError("expected 'c d1 ... d" + std::to_string(n) + " k' (" + std::to_string(n + 2) + " integers)",
                             line_no, 1);
        for (auto x : values)
            if (x < 0) throw ParseError("negative entry", line_no, 1);
        std::vector<std::uint8_t> exps;
        for (std::size_t i = 0; i < n; ++i) {
            if (values[1 + i] >= static_cast<long long>(q)) throw ParseError("exponent must be below q", line_no, 1);
            exps.push_back(static_cast<std::uint8_t>(values[1 + i]));
        }
        const auto k = static_cast<unsigned>(values[n + 1]);
        if (k > kMaxDepth) throw ParseError("depth above 2 is not supported", line_no, 1);
        auto& slot = coeffs[{exps, k}];
        slot = static_cast<Elem>((slot + values[0]) % q);
    }
    try {
        return NonclassicalPoly(q, n, std::move(coeffs));
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 1, 1);
    }
}

std::string to_text(const NonclassicalPoly& p) {
    std::string out = "q=" + std::to_string(p.q()) + " n=" + std::to_string(p.n()) + "\n";
    for (const auto& [key, c] : p.coeffs()) {
        out += std::to_string(c);
        for (auto e : key.first) out += ' ' + std::to_string(e);
        out += ' ' + std::to_string(key.second) + '\n';
    }
    return out;
}

} // namespace polystruct
