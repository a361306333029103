// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include "polystruct/affine.hpp"

#include <map>

#include "polystruct/error.hpp"

namespace polystruct {

AffineMap::AffineMap(Matrix matrix, Point offset) : matrix_(std::move(matrix)), offset_(std::move(offset)) {
    if (offset_.size() != matrix_.rows()) throw DomainError("affine offset length does not match matrix rows");
    for (auto& v : offset_) v = static_cast<Elem>(v % matrix_.q());
    invertible_ = matrix_.rows() == matrix_.cols() && rank(matrix_) == matrix_.rows();
}

AffineMap AffineMap::identity(unsigned q, std::size_t n) { return AffineMap(Matrix::identity(q, n), Point(n, 0)); }

AffineMap AffineMap::translation(unsigned q, std::span<const Elem> shift) {
    return AffineMap(Matrix::identity(q, shift.size()), Point(shift.begin(), shift.end()));
}

Point AffineMap::apply(std::span<const Elem> x) const {
    Point y = matrix_.apply(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = matrix_.field().add(y[i], offset_[i]);
    return y;
}

AffineMap AffineMap::inverse() const {
    auto inv = polystruct::inverse(matrix_);
    if (!invertible_ || !inv) throw DomainError("affine map is not invertible");
    Point b = inv->apply(offset_);
    for (auto& v : b) v = matrix_.field().neg(v);
    return AffineMap(std::move(*inv), std::move(b));
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
    if (outer.n_in() != inner.n_out()) throw DomainError("affine composition dimension mismatch");
    return AffineMap(outer.matrix() * inner.matrix(), outer.apply(inner.offset()));
}

Poly affine_substitute(const Poly& f, const AffineMap& m) {
    if (f.n() != m.n_out()) throw DomainError("substitution map does not produce f's variables");
    if (f.q() != m.q()) throw FieldMismatch("substitution map over a different field");
    const unsigned q = f.q();
    const std::size_t n_in = m.n_in();
    // Powers L_i^e of each substituted linear form, built on demand.
    std::vector<std::vector<Poly>> powers(f.n());
    auto power_of = [&](std::size_t i, unsigned e) -> const Poly& {
        auto& list = powers[i];
        if (list.empty()) {
            Poly::Terms t;
            t.emplace(Monomial::one(n_in), m.offset()[i]);
            for (std::size_t j = 0; j < n_in; ++j)
                if (m.matrix().at(i, j)) t.emplace(Monomial::variable(n_in, j), m.matrix().at(i, j));
            list.push_back(Poly::constant(q, n_in, 1));
            list.emplace_back(q, n_in, std::move(t));
        }
        while (list.size() <= e) list.push_back(mul(list.back(), list[1]));
        return list[e];
    };
    Poly::Terms acc;
    for (const auto& [mono, c] : f.terms()) {
        Poly term = Poly::constant(q, n_in, c);
        for (std::size_t i = 0; i < f.n() && !term.is_zero(); ++i)
            if (mono[i]) term = mul(term, power_of(i, mono[i]));
        for (const auto& [tm, tc] : term.terms()) {
            auto [it, inserted] = acc.emplace(tm, tc);
            if (!inserted) it->second = f.field().add(it->second, tc);
        }
    }
    return Poly(q, n_in, std::move(acc));
}

// --- AffineSubspace ---------------------------------------------------------

AffineSubspace::AffineSubspace(unsigned q, std::size_t n, Point offset, std::vector<Point> basis)
    : q_(q), n_(n), offset_(std::move(offset)), basis_(std::move(basis)) {
    const PrimeField field(q);
    if (offset_.size() != n) throw DomainError("subspace offset has wrong dimension");
    for (auto& v : offset_) v = static_cast<Elem>(v % q);
    Matrix m(q, basis_.size(), n);
    for (std::size_t r = 0; r < basis_.size(); ++r) {
        if (basis_[r].size() != n) throw DomainError("subspace basis vector has wrong dimension");
        for (std::size_t c = 0; c < n; ++c) m.at(r, c) = basis_[r][c] = static_cast<Elem>(basis_[r][c] % q);
    }
    if (rank(m) != basis_.size()) throw DomainError("subspace basis vectors are linearly dependent");
}

AffineSubspace AffineSubspace::full(unsigned q, std::size_t n) {
    std::vector<Point> basis;
    for (std::size_t i = 0; i < n; ++i) {
        Point e(n, 0);
        e[i] = 1;
        basis.push_back(std::move(e));
    }
    return AffineSubspace(q, n, Point(n, 0), std::move(basis));
}

AffineSubspace AffineSubspace::point(unsigned q, Point x) {
    const std::size_t n = x.size();
    return AffineSubspace(q, n, std::move(x), {});
}

AffineSubspace AffineSubspace::hyperplane(unsigned q, std::span<const Elem> w, Elem a) {
    const PrimeField field(q);
    const std::size_t n = w.size();
    std::size_t j = 0;
    while (j < n && w[j] % q == 0) ++j;
    if (j == n) throw DomainError("hyperplane normal vector is zero");
    const Elem inv = field.inv(static_cast<Elem>(w[j] % q));
    Point offset(n, 0);
    offset[j] = field.mul(static_cast<Elem>(a % q), inv);
    std::vector<Point> basis;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        Point v(n, 0);
        v[k] = 1;
        v[j] = field.neg(field.mul(static_cast<Elem>(w[k] % q), inv));
        basis.push_back(std::move(v));
    }
    return AffineSubspace(q, n, std::move(offset), std::move(basis));
}

AffineSubspace AffineSubspace::coordinate_hyperplane(unsigned q, std::size_t n, std::size_t i, Elem a) {
    Point w(n, 0);
    w.at(i) = 1;
    return hyperplane(q, w, a);
}

Point AffineSubspace::at(std::span<const Elem> coords) const {
    if (coords.size() != dim()) throw DomainError("subspace coordinates have wrong dimension");
    std::vector<unsigned> acc(offset_.begin(), offset_.end());
    for (std::size_t k = 0; k < dim(); ++k)
        if (coords[k])
            for (std::size_t i = 0; i < n_; ++i) acc[i] += unsigned{coords[k]} * basis_[k][i];
    Point x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = static_cast<Elem>(acc[i] % q_);
    return x;
}

Point AffineSubspace::at_index(std::uint64_t index) const { return at(index_to_point(index, q_, dim())); }

bool AffineSubspace::contains(std::span<const Elem> x) const {
    if (x.size() != n_) throw DomainError("point has wrong dimension");
    const PrimeField field(q_);
    // Solve sum_k c_k basis_k = x - offset (columns are basis vectors).
    Matrix a(q_, n_, dim());
    Point rhs(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = 0; k < dim(); ++k) a.at(i, k) = basis_[k][i];
        rhs[i] = field.sub(static_cast<Elem>(x[i] % q_), offset_[i]);
    }
    return solve(a, rhs).has_value();
}

AffineMap AffineSubspace::parametrization() const {
    Matrix m(q_, n_, dim());
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < dim(); ++k) m.at(i, k) = basis_[k][i];
    return AffineMap(std::move(m), offset_);
}

AffineSubspace AffineSubspace::translated(std::span<const Elem> h) const {
    if (h.size() != n_) throw DomainError("shift has wrong dimension");
    Point o(n_);
    for (std::size_t i = 0; i < n_; ++i) o[i] = static_cast<Elem>((offset_[i] + h[i]) % q_);
    return AffineSubspace(q_, n_, std::move(o), basis_);
}

AffineSubspace AffineSubspace::canonical() const {
    const PrimeField field(q_);
    Matrix m(q_, dim(), n_);
    for (std::size_t r = 0; r < dim(); ++r)
        for (std::size_t c = 0; c < n_; ++c) m.at(r, c) = basis_[r][c];
    const Rref red = rref(std::move(m));
    std::vector<Point> basis;
    Point offset = offset_;
    for (std::size_t r = 0; r < red.pivots.size(); ++r) {
        const auto row = red.matrix.row(r);
        basis.emplace_back(row.begin(), row.end());
        const Elem factor = offset[red.pivots[r]];
        if (factor)
            for (std::size_t c = 0; c < n_; ++c) offset[c] = field.sub(offset[c], field.mul(factor, row[c]));
    }
    return AffineSubspace(q_, n_, std::move(offset), std::move(basis));
}

std::string AffineSubspace::to_string() const {
    auto vec = [](const Point& p) {
        std::string s = "(";
        for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
        return s + ")";
    };
    std::string s = vec(offset_) + " + span{";
    for (std::size_t k = 0; k < basis_.size(); ++k) s += (k ? ", " : "") + vec(basis_[k]);
    return s + "}";
}

Poly restrict_to(const Poly& f, const AffineSubspace& v) {
    if (f.q() != v.q()) throw FieldMismatch("subspace over a different field");
    if (f.n() != v.n()) throw FieldMismatch("subspace lives in a different dimension");
    return affine_substitute(f, v.parametrization());
}

} // namespace polystruct
