// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <stdexcept>

#include "polystruct/error.hpp"
#include "polystruct/linalg.hpp"
#include "polystruct/structure.hpp"

namespace polystruct {

namespace {

using Vec = std::vector<Elem>;

// Symmetric matrix of the polar form: for F_2 the alternating form
// B(y, z) = f(y+z) + f(y) + f(z) + f(0); for odd q the matrix A with
// f_2(x) = x^T A x.
std::vector<Vec> polar_matrix(const Poly& f) {
    const std::size_t n = f.n();
    const PrimeField& F = f.field();
    std::vector<Vec> a(n, Vec(n, 0));
    const Elem half = f.q() == 2 ? 0 : F.inv(2);
    for (const auto& [m, c] : f.terms()) {
        if (m.degree() != 2) continue;
        std::size_t i = n, j = n;
        for (std::size_t k = 0; k < n; ++k) {
            if (m[k] == 2) i = j = k;
            if (m[k] == 1) (i == n ? i : j) = k;
        }
        if (i == j) {
            a[i][i] = c;
        } else {
            const Elem v = f.q() == 2 ? c : F.mul(c, half);
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    return a;
}

Elem form(const std::vector<Vec>& a, const Vec& v, const Vec& w, const PrimeField& F) {
    unsigned acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i]) continue;
        unsigned row = 0;
        for (std::size_t j = 0; j < w.size(); ++j) row += unsigned{a[i][j]} * w[j];
        acc += v[i] * (row % F.q());
    }
    return static_cast<Elem>(acc % F.q());
}

void axpy(Vec& y, Elem c, const Vec& x, const PrimeField& F) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = F.add(y[i], F.mul(c, x[i]));
}

AffineMap columns_to_map(unsigned q, const std::vector<Vec>& cols) {
    const std::size_t n = cols.size();
    Matrix m(q, n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) m.at(r, c) = cols[c][r];
    return AffineMap(std::move(m), Point(n, 0));
}

std::vector<Vec> unit_vectors(std::size_t n) {
    std::vector<Vec> e(n, Vec(n, 0));
    for (std::size_t i = 0; i < n; ++i) e[i][i] = 1;
    return e;
}

// Symplectic Gram-Schmidt: pairs (e_i, f_i) with B(e_i, f_i) = 1, all other
// values zero, followed by the radical.
std::vector<Vec> symplectic_basis(const std::vector<Vec>& b, std::size_t& pairs) {
    const PrimeField F(2);
    std::vector<Vec> pool = unit_vectors(b.size()), out;
    std::vector<Vec> radical;
    pairs = 0;
    while (!pool.empty()) {
        const Vec w = pool.front();
        pool.erase(pool.begin());
        std::size_t k = 0;
        while (k < pool.size() && !form(b, w, pool[k], F)) ++k;
        if (k == pool.size()) {
            radical.push_back(w);
            continue;
        }
        const Vec w2 = pool[k];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
        for (auto& v : pool) {
            const Elem bw2 = form(b, v, w2, F), bw = form(b, v, w, F);
            if (bw2) axpy(v, 1, w, F);
            if (bw) axpy(v, 1, w2, F);
        }
        out.push_back(w);
        out.push_back(w2);
        ++pairs;
    }
    // A vector set aside early stays orthogonal to later pairs because the
    // pool was orthogonalized against every pair formed after it.
    out.insert(out.end(), radical.begin(), radical.end());
    return out;
}

// Congruence diagonalization completing squares in variable order.
std::vector<Vec> orthogonal_basis(const std::vector<Vec>& a, const PrimeField& F) {
    const std::size_t n = a.size();
    std::vector<Vec> v = unit_vectors(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!form(a, v[i], v[i], F)) {
            std::size_t j = i + 1;
            while (j < n && !form(a, v[j], v[j], F)) ++j;
            if (j < n) {
                std::swap(v[i], v[j]);
            } else {
                j = i + 1;
                while (j < n && !form(a, v[i], v[j], F)) ++j;
                if (j == n) continue;
                axpy(v[i], 1, v[j], F);  // Q(v_i + v_j) = 2 B(v_i, v_j) != 0
            }
        }
        const Elem inv = F.inv(form(a, v[i], v[i], F));
        for (std::size_t j = i + 1; j < n; ++j) {
            const Elem c = F.mul(form(a, v[j], v[i], F), inv);
            if (c) axpy(v[j], F.neg(c), v[i], F);
        }
    }
    return v;
}

} // namespace

std::size_t QuadNormalForm::rank() const {
    std::size_t r = 0;
    for (auto a : alpha) r += a != 0;
    return r;
}

QuadNormalForm quad_normal_form(const Poly& f) {
    if (f.degree() > 2) throw DomainError("quad_normal_form needs degree <= 2");
    const unsigned q = f.q();
    const std::size_t n = f.n();
    const auto a = polar_matrix(f);
    std::vector<Vec> cols;
    std::size_t pairs = 0;
    if (q == 2)
        cols = symplectic_basis(a, pairs);
    else
        cols = orthogonal_basis(a, f.field());
    const AffineMap t = columns_to_map(q, cols);
    if (!t.invertible()) throw std::logic_error("quadratic reduction produced a singular basis");
    Poly g = affine_substitute(f, t);

    std::vector<Elem> alpha;
    if (q == 2) {
        alpha.assign(n / 2, 0);
        for (std::size_t i = 0; i < pairs; ++i) alpha[i] = 1;
    } else {
        alpha.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) alpha[i] = g.coefficient(Monomial::variable(n, i, 2));
    }
    // The quadratic part must be exactly the advertised shape.
    Poly::Terms expect;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (!alpha[i]) continue;
        std::vector<std::uint8_t> e(n, 0);
        if (q == 2) {
            e[2 * i] = e[2 * i + 1] = 1;
        } else {
            e[i] = 2;
        }
        expect.emplace(Monomial(std::move(e)), alpha[i]);
    }
    if (g.homogeneous_part(2) != Poly(q, n, std::move(expect)))
        throw std::logic_error("quadratic reduction did not reach normal form");
    Poly lin = g.truncated(1);
    return QuadNormalForm{t, std::move(g), std::move(alpha), std::move(lin)};
}

Poly recompose(const QuadNormalForm& nf) { return affine_substitute(nf.normal_form, nf.map.inverse()); }

double quad_bias_closed_form(const QuadNormalForm& nf) {
    const unsigned q = nf.q();
    const std::size_t n = nf.n();
    // A linear term on a coordinate the quadratic part does not touch
    // averages the character to zero; on the others it can be absorbed.
    std::vector<bool> covered(n, false);
    if (q == 2) {
        for (std::size_t i = 0; i < nf.alpha.size(); ++i)
            if (nf.alpha[i]) covered[2 * i] = covered[2 * i + 1] = true;
    } else {
        for (std::size_t i = 0; i < n; ++i) covered[i] = nf.alpha[i] != 0;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!covered[i] && nf.linear.coefficient(Monomial::variable(n, i))) return 0.0;
    const double r = static_cast<double>(nf.rank());
    // F_2: 2^{-h}; odd q: each nondegenerate square is a Gauss sum of
    // magnitude q^{1/2}.
    return q == 2 ? std::exp2(-r) : std::pow(static_cast<double>(q), -r / 2);
}

} // namespace polystruct
