// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include "polystruct/poly.hpp"

#include <algorithm>
#include <bit>
#include <mutex>

#include "polystruct/error.hpp"
#include "polystruct/kernels.hpp"
#include "polystruct/rng.hpp"

namespace polystruct {

namespace detail {
struct TableCache {
    std::once_flag values_once;
    std::vector<Elem> values;
    std::once_flag bits_once;
    std::vector<std::uint64_t> bits;
};
} // namespace detail

std::optional<std::uint64_t> domain_size(unsigned q, std::size_t n) noexcept {
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (size > (std::uint64_t{1} << 62) / q) return std::nullopt;
        size *= q;
    }
    return size;
}

std::uint64_t checked_domain_size(unsigned q, std::size_t n, std::uint64_t cap, std::string_view what) {
    const auto size = domain_size(q, n);
    if (!size || *size > cap)
        throw InfeasibleError(std::string(what) + ": domain " + std::to_string(q) + "^" + std::to_string(n) +
                              " exceeds the exhaustive cap of " + std::to_string(cap));
    return *size;
}

Point index_to_point(std::uint64_t index, unsigned q, std::size_t n) {
    Point x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = static_cast<Elem>(index % q);
        index /= q;
    }
    return x;
}

std::uint64_t point_to_index(std::span<const Elem> x, unsigned q) {
    std::uint64_t index = 0;
    for (std::size_t i = x.size(); i-- > 0;) index = index * q + x[i];
    return index;
}

std::vector<std::uint64_t> translation_indices(unsigned q, std::size_t n, std::span<const Elem> y) {
    const std::uint64_t size = checked_domain_size(q, n, kTableCap, "translation table");
    std::vector<std::uint64_t> out(size);
    if (q == 2) {
        const std::uint64_t yi = point_to_index(y, 2);
        for (std::uint64_t x = 0; x < size; ++x) out[x] = x ^ yi;
        return out;
    }
    Point digits(n, 0);
    for (std::uint64_t x = 0; x < size; ++x) {
        std::uint64_t idx = 0, scale = 1;
        for (std::size_t i = 0; i < n; ++i) {
            idx += ((digits[i] + y[i]) % q) * scale;
            scale *= q;
        }
        out[x] = idx;
        for (std::size_t i = 0; i < n && ++digits[i] == q; ++i) digits[i] = 0;
    }
    return out;
}

// --- Monomial ---------------------------------------------------------------

Monomial::Monomial(std::vector<std::uint8_t> exponents) : exps_(std::move(exponents)) {
    for (auto e : exps_) degree_ += e;
}

Monomial Monomial::variable(std::size_t n, std::size_t i, std::uint8_t power) {
    std::vector<std::uint8_t> e(n, 0);
    e.at(i) = power;
    return Monomial(std::move(e));
}

bool GradedDescending::operator()(const Monomial& a, const Monomial& b) const noexcept {
    if (a.degree() != b.degree()) return a.degree() > b.degree();
    const auto ea = a.exponents();
    const auto eb = b.exponents();
    return std::lexicographical_compare(eb.begin(), eb.end(), ea.begin(), ea.end());
}

namespace {
std::uint8_t reduce_exponent(unsigned e, unsigned q) {
    if (e == 0) return 0;
    return static_cast<std::uint8_t>((e - 1) % (q - 1) + 1);
}
} // namespace

Monomial multiply(const Monomial& a, const Monomial& b, unsigned q) {
    if (a.arity() != b.arity()) throw FieldMismatch("monomial arity mismatch");
    std::vector<std::uint8_t> e(a.arity());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = reduce_exponent(unsigned{a[i]} + b[i], q);
    return Monomial(std::move(e));
}

// --- Poly -------------------------------------------------------------------

Poly::Poly(unsigned q, std::size_t n) : field_(q), n_(n), cache_(std::make_shared<detail::TableCache>()) {}

Poly::Poly(unsigned q, std::size_t n, Terms terms) : Poly(q, n) {
    for (auto it = terms.begin(); it != terms.end();) {
        const Monomial& m = it->first;
        if (m.arity() != n) throw FieldMismatch("monomial arity does not match variable count");
        for (auto e : m.exponents())
            if (e >= q) throw DomainError("monomial exponent not reduced below q");
        it->second = static_cast<Elem>(it->second % q);
        it = it->second == 0 ? terms.erase(it) : std::next(it);
    }
    terms_ = std::move(terms);
}

Poly Poly::constant(unsigned q, std::size_t n, Elem c) {
    Terms t;
    t.emplace(Monomial::one(n), c);
    return Poly(q, n, std::move(t));
}

Poly Poly::variable(unsigned q, std::size_t n, std::size_t i) {
    if (i >= n) throw DomainError("variable index out of range");
    Terms t;
    t.emplace(Monomial::variable(n, i), Elem{1});
    return Poly(q, n, std::move(t));
}

Poly Poly::monomial(unsigned q, const Monomial& m, Elem c) {
    Terms t;
    t.emplace(m, c);
    return Poly(q, m.arity(), std::move(t));
}

Poly Poly::affine(unsigned q, std::span<const Elem> linear, Elem constant) {
    const std::size_t n = linear.size();
    Terms t;
    t.emplace(Monomial::one(n), constant);
    for (std::size_t i = 0; i < n; ++i)
        if (linear[i] % q) t.emplace(Monomial::variable(n, i), linear[i]);
    return Poly(q, n, std::move(t));
}

int Poly::degree() const noexcept { return terms_.empty() ? kZeroDegree : terms_.begin()->first.degree(); }

Elem Poly::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Elem{0} : it->second;
}

Elem Poly::constant_term() const { return coefficient(Monomial::one(n_)); }

Poly Poly::homogeneous_part(int k) const {
    Terms t;
    for (const auto& [m, c] : terms_)
        if (m.degree() == k) t.emplace(m, c);
    return Poly(q(), n_, std::move(t));
}

Poly Poly::truncated(int k) const {
    Terms t;
    for (const auto& [m, c] : terms_)
        if (m.degree() <= k) t.emplace(m, c);
    return Poly(q(), n_, std::move(t));
}

Elem Poly::evaluate(std::span<const Elem> x) const {
    if (x.size() != n_) throw DomainError("evaluation point has wrong dimension");
    unsigned acc = 0;
    for (const auto& [m, c] : terms_) {
        unsigned term = c;
        for (std::size_t i = 0; i < n_ && term != 0; ++i)
            if (m[i]) term = term * field_.pow(static_cast<Elem>(x[i] % q()), m[i]) % q();
        acc += term;
    }
    return static_cast<Elem>(acc % q());
}

Elem Poly::evaluate_index(std::uint64_t index) const {
    const Point x = index_to_point(index, q(), n_);
    return evaluate(x);
}

namespace {

// Dense coefficient tensor indexed like points: exponent e_i is digit i.
std::vector<Elem> dense_coefficients(const Poly& f, std::uint64_t size) {
    std::vector<Elem> dense(size, 0);
    for (const auto& [m, c] : f.terms()) dense[point_to_index(m.exponents(), f.q())] = c;
    return dense;
}

// Applies the q x q matrix `mat` along every axis of a q^n tensor in place.
void axis_transform(std::vector<Elem>& data, unsigned q, std::size_t n, const std::vector<Elem>& mat) {
    std::vector<unsigned> in(q);
    std::uint64_t stride = 1;
    for (std::size_t axis = 0; axis < n; ++axis) {
        const std::uint64_t block = stride * q;
        for (std::uint64_t base = 0; base < data.size(); base += block)
            for (std::uint64_t off = 0; off < stride; ++off) {
                for (unsigned e = 0; e < q; ++e) in[e] = data[base + off + e * stride];
                for (unsigned a = 0; a < q; ++a) {
                    unsigned acc = 0;
                    for (unsigned e = 0; e < q; ++e) acc += mat[a * q + e] * in[e];
                    data[base + off + a * stride] = static_cast<Elem>(acc % q);
                }
            }
        stride = block;
    }
}

// V[a][e] = a^e with 0^0 = 1: maps coefficients to values along one axis.
std::vector<Elem> vandermonde(const PrimeField& f) {
    const unsigned q = f.q();
    std::vector<Elem> v(q * q);
    for (unsigned a = 0; a < q; ++a)
        for (unsigned e = 0; e < q; ++e) v[a * q + e] = e == 0 ? Elem{1} : f.pow(static_cast<Elem>(a), e);
    return v;
}

std::vector<std::uint64_t> pack_bits(std::span<const Elem> values) {
    const unsigned n = static_cast<unsigned>(std::countr_zero(values.size()));
    std::vector<std::uint64_t> bits(kernels::f2_word_count(n), 0);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i]) bits[i / 64] |= std::uint64_t{1} << (i % 64);
    return bits;
}

} // namespace

const std::vector<Elem>& Poly::table() const {
    std::call_once(cache_->values_once, [this] {
        const std::uint64_t size = checked_domain_size(q(), n_, kTableCap, "truth table");
        if (q() == 2) {
            const auto& bits = bit_table();
            cache_->values.resize(size);
            for (std::uint64_t i = 0; i < size; ++i) cache_->values[i] = static_cast<Elem>((bits[i / 64] >> (i % 64)) & 1u);
            return;
        }
        std::vector<Elem> data = dense_coefficients(*this, size);
        axis_transform(data, q(), n_, vandermonde(field_));
        cache_->values = std::move(data);
    });
    return cache_->values;
}

const std::vector<std::uint64_t>& Poly::bit_table() const {
    if (q() != 2) throw DomainError("bit-packed tables exist only over F_2");
    std::call_once(cache_->bits_once, [this] {
        const std::uint64_t size = checked_domain_size(2, n_, kTableCap, "truth table");
        std::vector<std::uint64_t> bits(kernels::f2_word_count(static_cast<unsigned>(n_)), 0);
        for (const auto& [m, c] : terms_) {
            const std::uint64_t i = point_to_index(m.exponents(), 2);
            bits[i / 64] |= std::uint64_t{1} << (i % 64);
        }
        (void)size;
        kernels::f2_mobius(bits, static_cast<unsigned>(n_));
        cache_->bits = std::move(bits);
    });
    return cache_->bits;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
        if (!out.empty()) out += " + ";
        std::string mono;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!m[i]) continue;
            if (!mono.empty()) mono += '*';
            mono += 'x' + std::to_string(i + 1);
            if (m[i] > 1) mono += '^' + std::to_string(m[i]);
        }
        if (mono.empty()) {
            out += std::to_string(c);
        } else {
            if (c != 1) out += std::to_string(c) + '*';
            out += mono;
        }
    }
    return out;
}

// --- arithmetic -------------------------------------------------------------

void require_compatible(const Poly& a, const Poly& b) {
    if (a.q() != b.q()) throw FieldMismatch("polynomials over different fields");
    if (a.n() != b.n()) throw FieldMismatch("polynomials in different variable counts");
}

Poly add(const Poly& a, const Poly& b) {
    require_compatible(a, b);
    Poly::Terms t = a.terms();
    for (const auto& [m, c] : b.terms()) {
        auto [it, inserted] = t.emplace(m, c);
        if (!inserted) it->second = a.field().add(it->second, c);
    }
    return Poly(a.q(), a.n(), std::move(t));
}

Poly scale(const Poly& f, Elem c) {
    Poly::Terms t;
    const Elem r = static_cast<Elem>(c % f.q());
    if (r != 0)
        for (const auto& [m, v] : f.terms()) t.emplace(m, f.field().mul(v, r));
    return Poly(f.q(), f.n(), std::move(t));
}

Poly mul(const Poly& a, const Poly& b) {
    require_compatible(a, b);
    Poly::Terms t;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            const Elem c = a.field().mul(ca, cb);
            auto [it, inserted] = t.emplace(multiply(ma, mb, a.q()), c);
            if (!inserted) it->second = a.field().add(it->second, c);
        }
    return Poly(a.q(), a.n(), std::move(t));
}

Poly operator+(const Poly& a, const Poly& b) { return add(a, b); }
Poly operator-(const Poly& a) { return scale(a, a.field().neg(1)); }
Poly operator-(const Poly& a, const Poly& b) { return add(a, -b); }
Poly operator*(const Poly& a, const Poly& b) { return mul(a, b); }

Poly power(const Poly& f, unsigned e) {
    Poly result = Poly::constant(f.q(), f.n(), 1);
    Poly base = f;
    while (e) {
        if (e & 1u) result = mul(result, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return result;
}

Poly embed(const Poly& f, std::size_t n, std::size_t offset) {
    if (offset + f.n() > n) throw DomainError("embedding does not fit the target variable count");
    Poly::Terms t;
    for (const auto& [m, c] : f.terms()) {
        std::vector<std::uint8_t> e(n, 0);
        std::copy(m.exponents().begin(), m.exponents().end(), e.begin() + static_cast<std::ptrdiff_t>(offset));
        t.emplace(Monomial(std::move(e)), c);
    }
    return Poly(f.q(), n, std::move(t));
}

Poly from_table(unsigned q, std::size_t n, std::span<const Elem> values) {
    const std::uint64_t size = checked_domain_size(q, n, kTableCap, "interpolation");
    if (values.size() != size) throw DomainError("value table has wrong length");
    const PrimeField field(q);
    std::vector<Elem> data(values.begin(), values.end());
    for (auto& v : data) v = static_cast<Elem>(v % q);
    if (q == 2) {
        std::vector<std::uint64_t> bits = pack_bits(data);
        kernels::f2_mobius(bits, static_cast<unsigned>(n));
        for (std::uint64_t i = 0; i < size; ++i) data[i] = static_cast<Elem>((bits[i / 64] >> (i % 64)) & 1u);
    } else {
        // Invert the per-axis Vandermonde system once; it is q x q.
        const std::vector<Elem> v = vandermonde(field);
        std::vector<Elem> inv(q * q, 0);
        std::vector<Elem> aug(q * 2 * q, 0);
        for (unsigned r = 0; r < q; ++r) {
            for (unsigned c = 0; c < q; ++c) aug[r * 2 * q + c] = v[r * q + c];
            aug[r * 2 * q + q + r] = 1;
        }
        for (unsigned c = 0; c < q; ++c) {
            unsigned p = c;
            while (aug[p * 2 * q + c] == 0) ++p;
            for (unsigned k = 0; k < 2 * q; ++k) std::swap(aug[p * 2 * q + k], aug[c * 2 * q + k]);
            const Elem s = field.inv(aug[c * 2 * q + c]);
            for (unsigned k = 0; k < 2 * q; ++k) aug[c * 2 * q + k] = field.mul(aug[c * 2 * q + k], s);
            for (unsigned r = 0; r < q; ++r) {
                if (r == c || aug[r * 2 * q + c] == 0) continue;
                const Elem fct = aug[r * 2 * q + c];
                for (unsigned k = 0; k < 2 * q; ++k)
                    aug[r * 2 * q + k] = field.sub(aug[r * 2 * q + k], field.mul(fct, aug[c * 2 * q + k]));
            }
        }
        for (unsigned r = 0; r < q; ++r)
            for (unsigned c = 0; c < q; ++c) inv[r * q + c] = aug[r * 2 * q + q + c];
        axis_transform(data, q, n, inv);
    }
    Poly::Terms t;
    for (std::uint64_t i = 0; i < size; ++i)
        if (data[i]) {
            const Point e = index_to_point(i, q, n);
            t.emplace(Monomial(std::vector<std::uint8_t>(e.begin(), e.end())), data[i]);
        }
    return Poly(q, n, std::move(t));
}

// --- monomial enumeration ---------------------------------------------------

namespace {
// Number of exponent vectors in [0, q)^n with sum exactly s.
std::vector<std::vector<std::uint64_t>> count_table(unsigned q, std::size_t n, int d) {
    std::vector<std::vector<std::uint64_t>> ways(n + 1, std::vector<std::uint64_t>(d + 1, 0));
    ways[0][0] = 1;
    for (std::size_t k = 1; k <= n; ++k)
        for (int s = 0; s <= d; ++s)
            for (unsigned e = 0; e < q && static_cast<int>(e) <= s; ++e) ways[k][s] += ways[k - 1][s - e];
    return ways;
}

void enumerate_degree(unsigned q, std::size_t n, int d, std::size_t i, std::vector<std::uint8_t>& e,
                      std::vector<Monomial>& out) {
    if (i == n) {
        if (d == 0) out.emplace_back(e);
        return;
    }
    const int room = static_cast<int>((n - i - 1) * (q - 1));
    // Larger exponent on earlier variables first gives the canonical order.
    for (int v = std::min<int>(d, static_cast<int>(q) - 1); v >= 0 && d - v <= room; --v) {
        e[i] = static_cast<std::uint8_t>(v);
        enumerate_degree(q, n, d - v, i + 1, e, out);
    }
    e[i] = 0;
}
} // namespace

std::uint64_t monomial_count(unsigned q, std::size_t n, int d, bool exact_degree) {
    if (d < 0) return 0;
    const auto ways = count_table(q, n, d);
    if (exact_degree) return ways[n][d];
    std::uint64_t total = 0;
    for (int s = 0; s <= d; ++s) total += ways[n][s];
    return total;
}

std::vector<Monomial> monomials_of_degree(unsigned q, std::size_t n, int d) {
    std::vector<Monomial> out;
    if (d < 0 || d > static_cast<int>(n * (q - 1))) return out;
    std::vector<std::uint8_t> e(n, 0);
    enumerate_degree(q, n, d, 0, e, out);
    return out;
}

std::vector<Monomial> monomials_up_to(unsigned q, std::size_t n, int d) {
    std::vector<Monomial> out;
    for (int k = std::min(d, static_cast<int>(n * (q - 1))); k >= 0; --k) {
        auto part = monomials_of_degree(q, n, k);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

Poly random_poly(unsigned q, std::size_t n, int d, std::uint64_t seed) {
    const PrimeField field(q);
    if (d > static_cast<int>(n * (q - 1))) throw DomainError("degree exceeds the maximal reduced degree n(q-1)");
    CounterRng rng(seed, 0x706f6c79); // "poly"
    Poly::Terms t;
    for (auto& m : monomials_up_to(q, n, d)) {
        const auto c = static_cast<Elem>(rng.below(q));
        if (c) t.emplace(std::move(m), c);
    }
    return Poly(q, n, std::move(t));
}

Poly random_homogeneous(unsigned q, std::size_t n, int d, std::uint64_t seed) {
    const PrimeField field(q);
    if (d < 0 || d > static_cast<int>(n * (q - 1))) throw DomainError("degree exceeds the maximal reduced degree n(q-1)");
    const auto monos = monomials_of_degree(q, n, d);
    CounterRng rng(seed, 0x686f6d6f); // "homo"
    for (;;) {
        Poly::Terms t;
        for (const auto& m : monos) {
            const auto c = static_cast<Elem>(rng.below(q));
            if (c) t.emplace(m, c);
        }
        if (!t.empty()) return Poly(q, n, std::move(t));
    }
}

Poly s4_generator(std::size_t n) {
    Poly::Terms t;
    if (n >= 4)
        for (const auto& m : monomials_of_degree(2, n, 4)) t.emplace(m, Elem{1});
    return Poly(2, n, std::move(t));
}

} // namespace polystruct
