// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polystruct/linalg.hpp"
#include "polystruct/poly.hpp"

namespace polystruct {

/// x -> M x + b from F_q^{n_in} to F_q^{n_out}.
class AffineMap {
public:
    AffineMap(Matrix matrix, Point offset);

    static AffineMap identity(unsigned q, std::size_t n);
    static AffineMap translation(unsigned q, std::span<const Elem> shift);

    unsigned q() const noexcept { return matrix_.q(); }
    std::size_t n_in() const noexcept { return matrix_.cols(); }
    std::size_t n_out() const noexcept { return matrix_.rows(); }
    const Matrix& matrix() const noexcept { return matrix_; }
    const Point& offset() const noexcept { return offset_; }
    /// Square and full rank; computed once at construction.
    bool invertible() const noexcept { return invertible_; }

    Point apply(std::span<const Elem> x) const;
    /// The inverse map; throws DomainError when not invertible.
    AffineMap inverse() const;

    friend bool operator==(const AffineMap& a, const AffineMap& b) {
        return a.matrix_ == b.matrix_ && a.offset_ == b.offset_;
    }

private:
    Matrix matrix_;
    Point offset_;
    bool invertible_ = false;
};

/// (outer after inner)(x) = outer(inner(x)).
AffineMap compose(const AffineMap& outer, const AffineMap& inner);

/// f(m(y)) as a reduced polynomial in m.n_in() variables.
Poly affine_substitute(const Poly& f, const AffineMap& m);

/// offset + span(basis) with linearly independent basis vectors.
class AffineSubspace {
public:
    AffineSubspace(unsigned q, std::size_t n, Point offset, std::vector<Point> basis);

    static AffineSubspace full(unsigned q, std::size_t n);
    static AffineSubspace point(unsigned q, Point x);
    /// {x : <w, x> = a} for nonzero w.
    static AffineSubspace hyperplane(unsigned q, std::span<const Elem> w, Elem a);
    /// {x : x_{i+1} = a}.
    static AffineSubspace coordinate_hyperplane(unsigned q, std::size_t n, std::size_t i, Elem a);

    unsigned q() const noexcept { return q_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    const Point& offset() const noexcept { return offset_; }
    const std::vector<Point>& basis() const noexcept { return basis_; }

    /// offset + sum_i c_i basis_i.
    Point at(std::span<const Elem> coords) const;
    /// Point with coordinates given by the base-q digits of `index`.
    Point at_index(std::uint64_t index) const;
    bool contains(std::span<const Elem> x) const;
    /// Parametrization F_q^dim -> F_q^n.
    AffineMap parametrization() const;
    AffineSubspace translated(std::span<const Elem> h) const;

    /// Same set with a reduced-echelon basis and the offset cleared on pivot
    /// coordinates; equal sets have equal canonical forms.
    AffineSubspace canonical() const;

    std::string to_string() const;

    friend bool operator==(const AffineSubspace& a, const AffineSubspace& b) {
        return a.q_ == b.q_ && a.n_ == b.n_ && a.offset_ == b.offset_ && a.basis_ == b.basis_;
    }

private:
    unsigned q_;
    std::size_t n_;
    Point offset_;
    std::vector<Point> basis_;
};

/// f restricted to v in the subspace coordinates: result(c) = f(v.at(c)).
Poly restrict_to(const Poly& f, const AffineSubspace& v);

} // namespace polystruct
