// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "polystruct/gf.hpp"

namespace polystruct {

/// Dense row-major matrix over F_q.
class Matrix {
public:
    Matrix(unsigned q, std::size_t rows, std::size_t cols) : field_(q), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static Matrix identity(unsigned q, std::size_t n);

    unsigned q() const noexcept { return field_.q(); }
    const PrimeField& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Elem& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Elem at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<Elem> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Elem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<Elem> apply(std::span<const Elem> x) const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix transposed() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Elem> data_;
};

struct Rref {
    Matrix matrix;
    std::vector<std::size_t> pivots; // pivot column of each nonzero row
};

/// Reduced row echelon form with unit pivots.
Rref rref(Matrix m);
std::size_t rank(const Matrix& m);

/// Some x with A x = b (free variables set to zero), or nullopt if inconsistent.
std::optional<std::vector<Elem>> solve(const Matrix& a, std::span<const Elem> b);

std::optional<Matrix> inverse(const Matrix& m);

/// Basis of {x : A x = 0}, one vector per row of the result.
Matrix kernel_basis(const Matrix& a);

/// Solves A x = b over F_2 with bit-packed rows; same contract as solve().
std::optional<std::vector<Elem>> solve_gf2(const Matrix& a, std::span<const Elem> b);

/// Number of k-dimensional subspaces of F_q^dim, saturating at UINT64_MAX.
std::uint64_t gaussian_binomial(unsigned q, std::size_t dim, std::size_t k);

/// Calls `visit` once per k-dimensional subspace of F_q^dim with its basis
/// in reduced row echelon form (k x dim). Pivot sets are visited in
/// lexicographic order and free entries in base-q counting order. Stops
/// early when `visit` returns false; returns false in that case.
bool for_each_subspace(unsigned q, std::size_t dim, std::size_t k, const std::function<bool(const Matrix&)>& visit);

} // namespace polystruct
