// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include "polystruct/linalg.hpp"

#include <algorithm>
#include <cstdint>

#include "polystruct/error.hpp"
#include "polystruct/kernels.hpp"

namespace polystruct {

Matrix Matrix::identity(unsigned q, std::size_t n) {
    Matrix m(q, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::vector<Elem> Matrix::apply(std::span<const Elem> x) const {
    if (x.size() != cols_) throw DomainError("matrix-vector dimension mismatch");
    std::vector<Elem> y(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
        unsigned acc = 0;
        for (std::size_t c = 0; c < cols_; ++c) acc += unsigned{at(r, c)} * x[c];
        y[r] = static_cast<Elem>(acc % q());
    }
    return y;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_ || q() != rhs.q()) throw DomainError("matrix product dimension mismatch");
    Matrix out(q(), rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < rhs.cols_; ++c) {
            unsigned acc = 0;
            for (std::size_t k = 0; k < cols_; ++k) acc += unsigned{at(r, k)} * rhs.at(k, c);
            out.at(r, c) = static_cast<Elem>(acc % q());
        }
    return out;
}

Matrix Matrix::transposed() const {
    Matrix t(q(), cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

Rref rref(Matrix m) {
    const PrimeField& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m.at(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m.at(p, k), m.at(r, k));
        const Elem inv = f.inv(m.at(r, c));
        for (std::size_t k = 0; k < m.cols(); ++k) m.at(r, k) = f.mul(m.at(r, k), inv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            const Elem factor = m.at(i, c);
            for (std::size_t k = 0; k < m.cols(); ++k) m.at(i, k) = f.sub(m.at(i, k), f.mul(factor, m.at(r, k)));
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::optional<std::vector<Elem>> solve(const Matrix& a, std::span<const Elem> b) {
    if (b.size() != a.rows()) throw DomainError("right-hand side length mismatch");
    if (a.q() == 2) return solve_gf2(a, b);
    Matrix aug(a.q(), a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, a.cols()) = b[r];
    }
    const Rref red = rref(std::move(aug));
    if (!red.pivots.empty() && red.pivots.back() == a.cols()) return std::nullopt;
    std::vector<Elem> x(a.cols(), 0);
    for (std::size_t i = 0; i < red.pivots.size(); ++i) x[red.pivots[i]] = red.matrix.at(i, a.cols());
    return x;
}

std::optional<std::vector<Elem>> solve_gf2(const Matrix& a, std::span<const Elem> b) {
    if (a.q() != 2) throw DomainError("solve_gf2 requires q = 2");
    const std::size_t n = a.cols();
    const std::size_t words = (n + 1 + 63) / 64; // last column holds the rhs
    std::vector<std::uint64_t> rows(a.rows() * words, 0);
    auto bit = [&](std::size_t r, std::size_t c) { return (rows[r * words + c / 64] >> (c % 64)) & 1u; };
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < n; ++c)
            if (a.at(r, c) & 1u) rows[r * words + c / 64] |= std::uint64_t{1} << (c % 64);
        if (b[r] & 1u) rows[r * words + n / 64] |= std::uint64_t{1} << (n % 64);
    }
    std::vector<std::size_t> pivots;
    std::size_t rank_so_far = 0;
    for (std::size_t c = 0; c <= n && rank_so_far < a.rows(); ++c) {
        std::size_t p = rank_so_far;
        while (p < a.rows() && !bit(p, c)) ++p;
        if (p == a.rows()) continue;
        if (c == n) return std::nullopt; // 0 = 1
        if (p != rank_so_far)
            for (std::size_t w = 0; w < words; ++w) std::swap(rows[p * words + w], rows[rank_so_far * words + w]);
        const std::span<const std::uint64_t> pivot_row(rows.data() + rank_so_far * words, words);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == rank_so_far || !bit(i, c)) continue;
            std::span<std::uint64_t> target(rows.data() + i * words, words);
            kernels::xor_words(target, target, pivot_row);
        }
        pivots.push_back(c);
        ++rank_so_far;
    }
    std::vector<Elem> x(n, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = static_cast<Elem>(bit(i, n));
    return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    const std::size_t n = m.rows();
    Matrix aug(m.q(), n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, n + r) = 1;
    }
    const Rref red = rref(std::move(aug));
    if (red.pivots.size() < n || red.pivots[n - 1] != n - 1) return std::nullopt;
    Matrix inv(m.q(), n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv.at(r, c) = red.matrix.at(r, n + c);
    return inv;
}

Matrix kernel_basis(const Matrix& a) {
    const Rref red = rref(a);
    const PrimeField& f = a.field();
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : red.pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < a.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Matrix basis(a.q(), free_cols.size(), a.cols());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        basis.at(k, free_cols[k]) = 1;
        for (std::size_t i = 0; i < red.pivots.size(); ++i)
            basis.at(k, red.pivots[i]) = f.neg(red.matrix.at(i, free_cols[k]));
    }
    return basis;
}

std::uint64_t gaussian_binomial(unsigned q, std::size_t dim, std::size_t k) {
    if (k > dim) return 0;
    // [m, j] = [m-1, j-1] + q^j [m-1, j], saturating.
    auto sat_add = [](std::uint64_t a, std::uint64_t b) { return a > UINT64_MAX - b ? UINT64_MAX : a + b; };
    auto sat_mul = [](std::uint64_t a, std::uint64_t b) { return b && a > UINT64_MAX / b ? UINT64_MAX : a * b; };
    std::vector<std::uint64_t> row(k + 1, 0);
    row[0] = 1;
    for (std::size_t m = 1; m <= dim; ++m)
        for (std::size_t j = std::min(m, k); j >= 1; --j) {
            std::uint64_t qj = 1;
            for (std::size_t t = 0; t < j; ++t) qj = sat_mul(qj, q);
            row[j] = sat_add(row[j - 1], sat_mul(qj, row[j]));
        }
    return row[k];
}

bool for_each_subspace(unsigned q, std::size_t dim, std::size_t k, const std::function<bool(const Matrix&)>& visit) {
    if (k > dim) return true;
    std::vector<std::size_t> piv(k);
    for (std::size_t i = 0; i < k; ++i) piv[i] = i;
    for (;;) {
        // Free cells: right of the row's pivot and not in a pivot column.
        std::vector<bool> is_pivot(dim, false);
        for (auto p : piv) is_pivot[p] = true;
        std::vector<std::pair<std::size_t, std::size_t>> cells;
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = piv[r] + 1; c < dim; ++c)
                if (!is_pivot[c]) cells.emplace_back(r, c);
        Matrix m(q, k, dim);
        for (std::size_t r = 0; r < k; ++r) m.at(r, piv[r]) = 1;
        for (;;) {
            if (!visit(m)) return false;
            std::size_t i = 0;
            for (; i < cells.size(); ++i) {
                Elem& e = m.at(cells[i].first, cells[i].second);
                if (++e < q) break;
                e = 0;
            }
            if (i == cells.size()) break;
        }
        // Next k-combination of pivot columns.
        std::size_t i = k;
        while (i > 0 && piv[i - 1] == dim - k + i - 1) --i;
        if (i == 0) return true;
        ++piv[i - 1];
        for (std::size_t j = i; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
}

} // namespace polystruct
