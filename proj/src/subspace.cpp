// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include "polystruct/subspace.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <complex>
#include <numbers>
#include <numeric>

#include "polystruct/analysis.hpp"
#include "polystruct/error.hpp"
#include "polystruct/linalg.hpp"
#include "polystruct/rng.hpp"

namespace polystruct {

namespace {

// Digit-wise arithmetic on point indices.
class IndexArith {
public:
    IndexArith(unsigned q, std::size_t n) : q_(q), n_(n) {}

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        if (q_ == 2) return a ^ b;
        std::uint64_t out = 0, place = 1;
        for (std::size_t i = 0; i < n_; ++i) {
            out += ((a % q_ + b % q_) % q_) * place;
            a /= q_;
            b /= q_;
            place *= q_;
        }
        return out;
    }
    std::uint64_t neg(std::uint64_t a) const {
        if (q_ == 2) return a;
        std::uint64_t out = 0, place = 1;
        for (std::size_t i = 0; i < n_; ++i) {
            out += ((q_ - a % q_) % q_) * place;
            a /= q_;
            place *= q_;
        }
        return out;
    }

private:
    unsigned q_;
    std::size_t n_;
};

// Indices of all points of span(basis), in coordinate-counter order.
std::vector<std::uint64_t> span_indices(unsigned q, std::size_t n, const std::vector<Point>& basis) {
    const IndexArith ar(q, n);
    std::vector<std::uint64_t> out{0};
    for (const auto& b : basis) {
        const std::uint64_t bi = point_to_index(b, q);
        const std::size_t prior = out.size();
        std::uint64_t step = bi;
        for (unsigned t = 1; t < q; ++t) {
            for (std::size_t s = 0; s < prior; ++s) out.push_back(ar.add(out[s], step));
            step = ar.add(step, bi);
        }
    }
    return out;
}

std::vector<std::size_t> pivots_of(const std::vector<Point>& rref_basis) {
    std::vector<std::size_t> piv;
    for (const auto& row : rref_basis)
        piv.push_back(static_cast<std::size_t>(std::find_if(row.begin(), row.end(), [](Elem e) { return e != 0; }) -
                                               row.begin()));
    return piv;
}

// Points vanishing on `pivots`, in index order.
std::vector<Point> complement_offsets(unsigned q, std::size_t n, const std::vector<std::size_t>& pivots) {
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < n; ++c)
        if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) free.push_back(c);
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < free.size(); ++i) count *= q;
    std::vector<Point> out;
    out.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        Point x(n, 0);
        std::uint64_t r = k;
        for (std::size_t c : free) {
            x[c] = static_cast<Elem>(r % q);
            r /= q;
        }
        out.push_back(std::move(x));
    }
    return out;
}

std::vector<Point> rows_of(const Matrix& m) {
    std::vector<Point> rows;
    for (std::size_t r = 0; r < m.rows(); ++r) rows.emplace_back(m.row(r).begin(), m.row(r).end());
    return rows;
}

Point random_nonzero(CounterRng& rng, unsigned q, std::size_t n) {
    for (;;) {
        Point y(n);
        for (auto& e : y) e = static_cast<Elem>(rng.below(q));
        if (std::any_of(y.begin(), y.end(), [](Elem e) { return e != 0; })) return y;
    }
}

Point unit(std::size_t n, std::size_t i) {
    Point e(n, 0);
    e[i] = 1;
    return e;
}

// Support of the convolution of two indicator bitmaps.
PointSet add_sets(const PointSet& s, const PointSet& a) {
    const unsigned q = s.q();
    const std::size_t n = s.n();
    const std::uint64_t total = s.universe();
    const auto sm = s.members();
    const auto am = a.members();
    if (sm.empty() || am.empty()) return PointSet(q, n);
    // |S| + |A| > |G| forces S + A = G.
    if (sm.size() + am.size() > total) return PointSet::full(q, n);
    PointSet out(q, n);
    const IndexArith ar(q, n);
    if (static_cast<double>(sm.size()) * static_cast<double>(am.size()) <= 64.0 * static_cast<double>(total) * n) {
        for (auto x : sm)
            for (auto y : am) out.insert_index(ar.add(x, y));
        return out;
    }
    if (q == 2) {
        // Walsh-Hadamard convolution in exact integers.
        auto wht = [total](std::vector<std::int64_t>& v) {
            for (std::uint64_t h = 1; h < total; h <<= 1)
                for (std::uint64_t i = 0; i < total; i += h << 1)
                    for (std::uint64_t j = i; j < i + h; ++j) {
                        const auto u = v[j], w = v[j + h];
                        v[j] = u + w;
                        v[j + h] = u - w;
                    }
        };
        std::vector<std::int64_t> fs(total, 0), fa(total, 0);
        for (auto x : sm) fs[x] = 1;
        for (auto y : am) fa[y] = 1;
        wht(fs);
        wht(fa);
        for (std::uint64_t i = 0; i < total; ++i) fs[i] *= fa[i];
        wht(fs);
        for (std::uint64_t i = 0; i < total; ++i)
            if (fs[i] != 0) out.insert_index(i);
        return out;
    }
    // Odd q: q-point DFT along every axis in floating point; counts are
    // integers, so 0.5 separates empty from occupied.
    using C = std::complex<double>;
    std::vector<C> root(q);
    for (unsigned t = 0; t < q; ++t) root[t] = std::polar(1.0, 2.0 * std::numbers::pi * t / q);
    auto dft = [&](std::vector<C>& v, bool inverse) {
        std::vector<C> line(q), res(q);
        std::uint64_t stride = 1;
        for (std::size_t axis = 0; axis < n; ++axis, stride *= q) {
            for (std::uint64_t base = 0; base < total; ++base) {
                if ((base / stride) % q != 0) continue;
                for (unsigned t = 0; t < q; ++t) line[t] = v[base + t * stride];
                for (unsigned u = 0; u < q; ++u) {
                    C acc = 0;
                    for (unsigned t = 0; t < q; ++t) {
                        const unsigned e = (u * t) % q;
                        acc += line[t] * (inverse ? std::conj(root[e]) : root[e]);
                    }
                    res[u] = acc;
                }
                for (unsigned t = 0; t < q; ++t) v[base + t * stride] = res[t];
            }
        }
    };
    std::vector<C> fs(total, 0.0), fa(total, 0.0);
    for (auto x : sm) fs[x] = 1.0;
    for (auto y : am) fa[y] = 1.0;
    dft(fs, false);
    dft(fa, false);
    for (std::uint64_t i = 0; i < total; ++i) fs[i] *= fa[i];
    dft(fs, true);
    const double scale = static_cast<double>(total);
    for (std::uint64_t i = 0; i < total; ++i)
        if (fs[i].real() / scale > 0.5) out.insert_index(i);
    return out;
}

} // namespace

// ---- PointSet --------------------------------------------------------------

PointSet::PointSet(unsigned q, std::size_t n)
    : q_(q), n_(n), universe_(checked_domain_size(q, n, kTableCap, "point set")), bits_((universe_ + 63) / 64, 0) {
    (void)PrimeField(q);
}

PointSet PointSet::from_points(unsigned q, std::size_t n, const std::vector<Point>& points) {
    PointSet s(q, n);
    for (const auto& p : points) s.insert(p);
    return s;
}

PointSet PointSet::full(unsigned q, std::size_t n) {
    PointSet s(q, n);
    for (std::uint64_t i = 0; i < s.universe_; ++i) s.insert_index(i);
    return s;
}

PointSet PointSet::of_subspace(const AffineSubspace& v) {
    PointSet s(v.q(), v.n());
    for_each_index(v, [&](std::uint64_t i) { s.insert_index(i); });
    return s;
}

bool PointSet::contains(std::span<const Elem> x) const {
    if (x.size() != n_) throw DomainError("point has the wrong number of coordinates");
    return contains_index(point_to_index(x, q_));
}

void PointSet::insert(std::span<const Elem> x) {
    if (x.size() != n_) throw DomainError("point has the wrong number of coordinates");
    for (Elem e : x)
        if (e >= q_) throw DomainError("coordinate outside the field");
    insert_index(point_to_index(x, q_));
}

std::uint64_t PointSet::count() const {
    std::uint64_t c = 0;
    for (auto w : bits_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
}

double PointSet::density() const { return static_cast<double>(count()) / static_cast<double>(universe_); }

std::vector<std::uint64_t> PointSet::members() const {
    std::vector<std::uint64_t> out;
    for (std::size_t w = 0; w < bits_.size(); ++w)
        for (std::uint64_t b = bits_[w]; b; b &= b - 1) out.push_back(w * 64 + static_cast<std::uint64_t>(std::countr_zero(b)));
    return out;
}

std::string PointSet::to_text() const {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s = "pointset q=" + std::to_string(q_) + " n=" + std::to_string(n_) + "\n";
    const std::uint64_t bytes = (universe_ + 7) / 8;
    for (std::uint64_t j = 0; j < bytes; ++j) {
        const auto byte = static_cast<unsigned>((bits_[j / 8] >> (8 * (j % 8))) & 0xFF);
        s += kHex[byte >> 4];
        s += kHex[byte & 15];
        if (j % 32 == 31 || j + 1 == bytes) s += '\n';
    }
    return s;
}

PointSet PointSet::parse(std::string_view text) {
    std::size_t line_no = 0;
    std::optional<PointSet> set;
    std::uint64_t bytes = 0, byte_index = 0;
    int half = -1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] == '#') {
            if (end == text.size()) break;
            continue;
        }
        if (!set) {
            unsigned q = 0;
            std::size_t n = 0;
            std::size_t col = first;
            auto expect = [&](std::string_view word) {
                if (line.substr(col, word.size()) != word) throw ParseError("expected '" + std::string(word) + "'", line_no, col + 1);
                col += word.size();
            };
            auto number = [&](auto& out) {
                const auto r = std::from_chars(line.data() + col, line.data() + line.size(), out);
                if (r.ec != std::errc()) throw ParseError("expected a number", line_no, col + 1);
                col = static_cast<std::size_t>(r.ptr - line.data());
            };
            expect("pointset q=");
            number(q);
            expect(" n=");
            number(n);
            if (line.find_first_not_of(" \t\r", col) != std::string_view::npos)
                throw ParseError("trailing text after header", line_no, col + 1);
            try {
                set.emplace(q, n);
            } catch (const Error& e) {
                throw ParseError(e.what(), line_no, first + 1);
            }
            bytes = (set->universe_ + 7) / 8;
        } else {
            for (std::size_t c = first; c < line.size(); ++c) {
                const char ch = line[c];
                if (ch == ' ' || ch == '\t' || ch == '\r') continue;
                unsigned v;
                if (ch >= '0' && ch <= '9') v = static_cast<unsigned>(ch - '0');
                else if (ch >= 'a' && ch <= 'f') v = static_cast<unsigned>(ch - 'a' + 10);
                else if (ch >= 'A' && ch <= 'F') v = static_cast<unsigned>(ch - 'A' + 10);
                else throw ParseError("expected a hex digit", line_no, c + 1);
                if (byte_index >= bytes) throw ParseError("bitmap longer than q^n bits", line_no, c + 1);
                if (half < 0) {
                    half = static_cast<int>(v);
                    continue;
                }
                const std::uint64_t byte = (static_cast<std::uint64_t>(half) << 4) | v;
                half = -1;
                for (unsigned b = 0; b < 8; ++b) {
                    if (!((byte >> b) & 1)) continue;
                    const std::uint64_t idx = byte_index * 8 + b;
                    if (idx >= set->universe_) throw ParseError("bit set beyond q^n", line_no, c + 1);
                    set->insert_index(idx);
                }
                ++byte_index;
            }
        }
        if (end == text.size()) break;
    }
    if (!set) throw ParseError("missing pointset header", line_no, 1);
    if (half >= 0 || byte_index != bytes)
        throw ParseError("bitmap has " + std::to_string(byte_index) + " bytes, expected " + std::to_string(bytes), line_no, 1);
    return *set;
}

std::string to_string(SubspaceClaim c) {
    return c == SubspaceClaim::constant_value ? "constant_value" : "sumset_membership";
}

// ---- verification ----------------------------------------------------------

void for_each_index(const AffineSubspace& v, const std::function<void(std::uint64_t)>& visit) {
    const IndexArith ar(v.q(), v.n());
    const std::uint64_t base = point_to_index(v.offset(), v.q());
    for (auto s : span_indices(v.q(), v.n(), v.basis())) visit(ar.add(base, s));
}

SubspaceCertificate verify_constant(const Poly& f, const AffineSubspace& v) {
    if (f.q() != v.q()) throw FieldMismatch("subspace over a different field");
    if (f.n() != v.n()) throw DomainError("subspace lives in a different dimension");
    SubspaceCertificate cert{v, SubspaceClaim::constant_value, std::nullopt, false, 0, {}};
    const Elem first = f.evaluate(v.offset());
    // Point by point so that huge ambient spaces with small v stay cheap.
    const std::size_t dim = v.dim();
    std::vector<Elem> c(dim, 0);
    for (;;) {
        const Point x = v.at(c);
        ++cert.checked_points;
        if (f.evaluate(x) != first) {
            cert.witness = {v.offset(), x};
            return cert;
        }
        std::size_t i = 0;
        while (i < dim && c[i] == v.q() - 1) c[i++] = 0;
        if (i == dim) break;
        ++c[i];
    }
    cert.value = first;
    cert.verified = true;
    return cert;
}

SubspaceCertificate verify_membership(const PointSet& a, const AffineSubspace& v) {
    if (a.q() != v.q()) throw FieldMismatch("subspace over a different field");
    if (a.n() != v.n()) throw DomainError("subspace lives in a different dimension");
    SubspaceCertificate cert{v, SubspaceClaim::sumset_membership, std::nullopt, false, 0, {}};
    const std::size_t dim = v.dim();
    std::vector<Elem> c(dim, 0);
    for (;;) {
        const Point x = v.at(c);
        ++cert.checked_points;
        if (!a.contains(x)) {
            cert.witness = {x};
            return cert;
        }
        std::size_t i = 0;
        while (i < dim && c[i] == v.q() - 1) c[i++] = 0;
        if (i == dim) break;
        ++c[i];
    }
    cert.verified = true;
    return cert;
}

// ---- constant subspaces ----------------------------------------------------

std::optional<SubspaceCertificate> constant_subspace_exhaustive(const Poly& f, std::size_t target_dim,
                                                                const SubspaceCaps& caps) {
    const unsigned q = f.q();
    const std::size_t n = f.n();
    if (target_dim > n) throw DomainError("target dimension exceeds n");
    const std::uint64_t points = checked_domain_size(q, n, kTableCap, "constant_subspace_exhaustive");
    const std::uint64_t spaces = gaussian_binomial(q, n, target_dim);
    if (spaces > caps.max_work / points) throw InfeasibleError("subspace enumeration exceeds the work cap");

    const auto& table = f.table();
    const IndexArith ar(q, n);
    std::optional<SubspaceCertificate> found;
    for_each_subspace(q, n, target_dim, [&](const Matrix& m) {
        const auto basis = rows_of(m);
        const auto span = span_indices(q, n, basis);
        for (auto& off : complement_offsets(q, n, pivots_of(basis))) {
            const std::uint64_t base = point_to_index(off, q);
            const Elem v = table[base];
            bool constant = true;
            for (auto s : span)
                if (table[ar.add(base, s)] != v) {
                    constant = false;
                    break;
                }
            if (constant) {
                found = verify_constant(f, AffineSubspace(q, n, std::move(off), basis));
                return false;
            }
        }
        return true;
    });
    return found;
}

SubspaceCertificate constant_subspace_max(const Poly& f, const SubspaceCaps& caps) {
    for (std::size_t k = f.n();; --k)
        if (auto c = constant_subspace_exhaustive(f, k, caps)) return *c;
}

SubspaceCertificate constant_subspace_greedy(const Poly& f, int rounds, std::uint64_t seed) {
    const unsigned q = f.q();
    const std::size_t n = f.n();
    const std::uint64_t total = checked_domain_size(q, n, kTableCap, "constant_subspace_greedy");
    const auto& table = f.table();
    const IndexArith ar(q, n);

    std::optional<AffineSubspace> best;
    for (int round = 0; round < std::max(rounds, 1); ++round) {
        CounterRng rng(seed, static_cast<std::uint64_t>(round));
        const std::uint64_t start = round == 0 ? 0 : rng.below(total);
        const Elem value = table[start];
        std::vector<Point> order;
        for (std::size_t i = 0; i < n; ++i) order.push_back(unit(n, i));
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        for (std::size_t i = 0; i < 4 * n; ++i) order.push_back(random_nonzero(rng, q, n));

        std::vector<Point> basis;
        std::vector<std::uint64_t> span{0};
        PointSet in_span(q, n);
        in_span.insert_index(0);
        for (const auto& y : order) {
            const std::uint64_t yi = point_to_index(y, q);
            if (in_span.contains_index(yi)) continue;
            std::vector<std::uint64_t> added;
            bool ok = true;
            std::uint64_t step = yi;
            for (unsigned t = 1; t < q && ok; ++t, step = ar.add(step, yi))
                for (auto s : span) {
                    const std::uint64_t lin = ar.add(s, step);
                    if (table[ar.add(start, lin)] != value) {
                        ok = false;
                        break;
                    }
                    added.push_back(lin);
                }
            if (!ok) continue;
            basis.push_back(y);
            for (auto s : added) in_span.insert_index(s);
            span.insert(span.end(), added.begin(), added.end());
        }
        if (!best || basis.size() > best->dim())
            best = AffineSubspace(q, n, index_to_point(start, q, n), std::move(basis));
    }
    return verify_constant(f, *best);
}

ShiftResult best_shift(const Poly& f, const AffineSubspace& v) {
    if (f.q() != v.q()) throw FieldMismatch("subspace over a different field");
    if (f.n() != v.n()) throw DomainError("subspace lives in a different dimension");
    const unsigned q = f.q();
    const std::size_t n = f.n();
    const auto& table = f.table();
    const IndexArith ar(q, n);
    const auto canon = v.canonical();
    const auto span = span_indices(q, n, canon.basis());
    const std::uint64_t base = point_to_index(v.offset(), q);

    ShiftResult best{Point(n, 0), v, -1.0, 0};
    std::vector<Elem> values(span.size());
    for (auto& h : complement_offsets(q, n, pivots_of(canon.basis()))) {
        const std::uint64_t shifted = ar.add(base, point_to_index(h, q));
        for (std::size_t i = 0; i < span.size(); ++i) values[i] = table[ar.add(shifted, span[i])];
        const double b = bias_of_values(values, q);
        ++best.cosets;
        if (b > best.bias + 1e-15) {
            best.bias = b;
            best.shift = h;
        }
    }
    best.coset = v.translated(best.shift);
    return best;
}

// ---- sumsets ---------------------------------------------------------------

PointSet sumset(const PointSet& a, int k) {
    if (k < 1 || k > 4) throw DomainError("sumset needs 1 <= k <= 4");
    checked_domain_size(a.q(), a.n(), std::uint64_t{1} << 20, "sumset");
    PointSet s = a;
    for (int i = 1; i < k; ++i) s = add_sets(s, a);
    PointSet neg(a.q(), a.n());
    const IndexArith ar(a.q(), a.n());
    for (auto x : s.members()) neg.insert_index(ar.neg(x));
    return add_sets(s, neg);
}

std::optional<SubspaceCertificate> subspace_in_sumset(const PointSet& a, int k, std::size_t min_dim,
                                                      const SumsetSearchOptions& options) {
    const PointSet s = sumset(a, k);
    const unsigned q = a.q();
    const std::size_t n = a.n();
    if (min_dim > n || !s.contains_index(0)) return std::nullopt;
    const IndexArith ar(q, n);
    auto inside = [&](const std::vector<Point>& basis) {
        for (auto i : span_indices(q, n, basis))
            if (!s.contains_index(i)) return false;
        return true;
    };

    std::vector<Point> best;
    bool have = false;
    // Coordinate subspaces, largest first, subsets in lexicographic order.
    for (std::size_t dim = n; dim >= 1 && !have; --dim) {
        std::vector<std::size_t> pick(dim);
        std::iota(pick.begin(), pick.end(), 0);
        for (;;) {
            std::vector<Point> basis;
            for (auto i : pick) basis.push_back(unit(n, i));
            if (inside(basis)) {
                best = std::move(basis);
                have = true;
                break;
            }
            std::size_t i = dim;
            while (i > 0 && pick[i - 1] == n - dim + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < dim; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    // Seeded greedy growth from the origin.
    for (int trial = 0; trial < options.random_trials && best.size() < n; ++trial) {
        CounterRng rng(options.seed, static_cast<std::uint64_t>(trial));
        std::vector<Point> basis;
        std::vector<std::uint64_t> span{0};
        for (std::size_t attempt = 0; attempt < 4 * n; ++attempt) {
            const Point y = random_nonzero(rng, q, n);
            const std::uint64_t yi = point_to_index(y, q);
            if (std::find(span.begin(), span.end(), yi) != span.end()) continue;
            std::vector<std::uint64_t> added;
            bool ok = true;
            std::uint64_t step = yi;
            for (unsigned t = 1; t < q && ok; ++t, step = ar.add(step, yi))
                for (auto x : span) {
                    const std::uint64_t p = ar.add(x, step);
                    if (!s.contains_index(p)) {
                        ok = false;
                        break;
                    }
                    added.push_back(p);
                }
            if (!ok) continue;
            basis.push_back(y);
            span.insert(span.end(), added.begin(), added.end());
        }
        if (basis.size() > best.size()) best = std::move(basis);
    }
    // Every linear subspace above the current best.
    if (n <= options.exhaustive_n)
        for (std::size_t dim = n; dim > best.size(); --dim) {
            bool hit = false;
            for_each_subspace(q, n, dim, [&](const Matrix& m) {
                auto basis = rows_of(m);
                if (!inside(basis)) return true;
                best = std::move(basis);
                hit = true;
                return false;
            });
            if (hit) break;
        }
    if (best.size() < min_dim) return std::nullopt;
    const AffineSubspace v = AffineSubspace(q, n, Point(n, 0), std::move(best)).canonical();
    return verify_membership(s, v);
}

} // namespace polystruct
