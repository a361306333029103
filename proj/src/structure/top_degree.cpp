// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include "structure/top_degree.hpp"

#include <bit>

#include "polystruct/error.hpp"
#include "polystruct/gf.hpp"

namespace polystruct::detail {

namespace {

std::size_t words(std::size_t bits) { return (bits + 63) / 64; }

} // namespace

std::uint64_t TopDegreeSystem::key(std::span<const std::uint8_t> e) const {
    std::uint64_t k = 0;
    for (std::size_t i = e.size(); i-- > 0;) k = k * q_ + e[i];
    return k;
}

TopDegreeSystem::TopDegreeSystem(const Poly& f, int d) : f_(&f), q_(f.q()), n_(f.n()), d_(d) {
    if (static_cast<double>(n_) * std::log2(static_cast<double>(q_)) > 63)
        throw InfeasibleError("too many variables for the top-degree solver");
    const auto monos = monomials_of_degree(q_, n_, d);
    rows_.reserve(monos.size());
    for (std::uint32_t i = 0; i < monos.size(); ++i) rows_.emplace(key(monos[i].exponents()), i);
    packed_target_.assign(words(monos.size()), 0);
    dense_target_.assign(monos.size(), 0);
    for (const auto& [m, c] : f.terms()) {
        if (m.degree() != d) continue;
        const auto r = rows_.at(key(m.exponents()));
        dense_target_[r] = c;
        if (c & 1) packed_target_[r / 64] |= std::uint64_t{1} << (r % 64);
    }
}

Block TopDegreeSystem::make_block(const Poly& g) const {
    const int a = g.degree();
    if (a < 1 || a >= d_) throw DomainError("block polynomial degree out of range");
    Block b{g, monomials_of_degree(q_, n_, d_ - a), {}, {}};
    const PrimeField& field = g.field();
    std::vector<std::uint8_t> e(n_);
    for (const auto& m : b.h_monos) {
        std::vector<Elem> col(rows_.size(), 0);
        for (const auto& [gm, c] : g.terms()) {
            if (gm.degree() != a) continue;
            bool top = true;
            for (std::size_t i = 0; i < n_ && top; ++i) {
                const unsigned s = unsigned{gm[i]} + m[i];
                if (s >= q_) top = false;  // x^q = x would lower the degree
                e[i] = static_cast<std::uint8_t>(s);
            }
            if (!top) continue;
            auto& slot = col[rows_.at(key(e))];
            slot = field.add(slot, c);
        }
        if (q_ == 2) {
            std::vector<std::uint64_t> bits(words(rows_.size()), 0);
            for (std::size_t r = 0; r < col.size(); ++r)
                if (col[r]) bits[r / 64] |= std::uint64_t{1} << (r % 64);
            b.packed.push_back(std::move(bits));
        } else {
            b.dense.push_back(std::move(col));
        }
    }
    return b;
}

Decomposition TopDegreeSystem::assemble(const std::vector<const Block*>& blocks, const std::vector<Elem>& coeffs) const {
    Decomposition dec{d_, {}, *f_};
    std::size_t id = 0;
    Poly sum(q_, n_);
    for (const Block* b : blocks) {
        Poly::Terms terms;
        for (const auto& m : b->h_monos) {
            if (coeffs[id]) terms.emplace(m, coeffs[id]);
            ++id;
        }
        Poly h(q_, n_, std::move(terms));
        if (h.is_zero()) continue;
        sum = sum + b->g * h;
        dec.pairs.push_back({b->g, std::move(h)});
    }
    dec.remainder = *f_ - sum;
    return dec;
}

Span::Span(unsigned q, std::size_t rows, std::size_t max_columns) : q_(q), rows_(rows), max_columns_(max_columns) {}

void Span::reduce(Vec& v) const {
    const PrimeField field(q_);
    for (const auto& b : basis_) {
        if (q_ == 2) {
            if (!((v.bits[b.pivot / 64] >> (b.pivot % 64)) & 1)) continue;
            for (std::size_t w = 0; w < v.bits.size(); ++w) v.bits[w] ^= b.bits[w];
            for (std::size_t w = 0; w < v.combo_bits.size(); ++w) v.combo_bits[w] ^= b.combo_bits[w];
        } else {
            const Elem c = v.elems[b.pivot];
            if (!c) continue;
            const Elem neg = field.neg(c);
            for (std::size_t r = 0; r < rows_; ++r) v.elems[r] = field.add(v.elems[r], field.mul(neg, b.elems[r]));
            for (std::size_t k = 0; k < max_columns_; ++k) v.combo[k] = field.add(v.combo[k], field.mul(neg, b.combo[k]));
        }
    }
}

void Span::add(const Block& block, std::size_t first_column) {
    const PrimeField field(q_);
    const std::size_t count = q_ == 2 ? block.packed.size() : block.dense.size();
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t id = first_column + j;
        if (id >= max_columns_) throw DomainError("span column capacity exceeded");
        Vec v;
        if (q_ == 2) {
            v.bits = block.packed[j];
            v.combo_bits.assign(words(max_columns_), 0);
            v.combo_bits[id / 64] |= std::uint64_t{1} << (id % 64);
        } else {
            v.elems = block.dense[j];
            v.combo.assign(max_columns_, 0);
            v.combo[id] = 1;
        }
        reduce(v);
        bool found = false;
        if (q_ == 2) {
            for (std::size_t w = 0; w < v.bits.size() && !found; ++w)
                if (v.bits[w]) {
                    v.pivot = w * 64 + static_cast<std::size_t>(std::countr_zero(v.bits[w]));
                    found = true;
                }
        } else {
            for (std::size_t r = 0; r < rows_ && !found; ++r)
                if (v.elems[r]) {
                    v.pivot = r;
                    const Elem inv = field.inv(v.elems[r]);
                    for (auto& e : v.elems) e = field.mul(e, inv);
                    for (auto& e : v.combo) e = field.mul(e, inv);
                    found = true;
                }
        }
        if (found) basis_.push_back(std::move(v));
    }
}

std::optional<std::vector<Elem>> Span::express(const TopDegreeSystem& sys) const {
    Vec t;
    if (q_ == 2) {
        t.bits = sys.packed_target();
        t.combo_bits.assign(words(max_columns_), 0);
    } else {
        t.elems = sys.dense_target();
        t.combo.assign(max_columns_, 0);
    }
    reduce(t);
    std::vector<Elem> out(max_columns_, 0);
    if (q_ == 2) {
        for (auto w : t.bits)
            if (w) return std::nullopt;
        // target = sum of basis vectors that were subtracted.
        for (std::size_t k = 0; k < max_columns_; ++k) out[k] = (t.combo_bits[k / 64] >> (k % 64)) & 1;
    } else {
        for (auto e : t.elems)
            if (e) return std::nullopt;
        const PrimeField field(q_);
        for (std::size_t k = 0; k < max_columns_; ++k) out[k] = field.neg(t.combo[k]);
    }
    return out;
}

} // namespace polystruct::detail
