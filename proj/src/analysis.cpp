// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include "polystruct/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polystruct/affine.hpp"
#include "polystruct/error.hpp"
#include "polystruct/kernels.hpp"
#include "polystruct/parallel.hpp"
#include "polystruct/rng.hpp"

namespace polystruct {

std::string to_string(Method m) { return m == Method::exact ? "exact" : "monte_carlo"; }

namespace {

using Wide = unsigned __int128;

// Accumulates |sum_u c_u w^u|^2 as sum_delta cos(2 pi delta / q) A_delta with
// A_delta = sum_u c_u c_{u+delta} kept in exact integers. Counts are shifted
// down by their minimum first (sum_u w^u = 0), so balanced histograms
// contribute exactly zero.
struct SquaredSum {
    std::vector<Wide> autocorrelation;

    explicit SquaredSum(unsigned q = 2) : autocorrelation(q, 0) {}

    void add(const std::uint64_t* counts) {
        const unsigned q = static_cast<unsigned>(autocorrelation.size());
        const std::uint64_t lo = *std::min_element(counts, counts + q);
        for (unsigned delta = 0; delta < q; ++delta)
            for (unsigned u = 0; u < q; ++u)
                autocorrelation[delta] += Wide{counts[u] - lo} * (counts[(u + delta) % q] - lo);
    }

    SquaredSum& operator+=(const SquaredSum& other) {
        for (std::size_t i = 0; i < autocorrelation.size(); ++i) autocorrelation[i] += other.autocorrelation[i];
        return *this;
    }

    long double value() const {
        const unsigned q = static_cast<unsigned>(autocorrelation.size());
        if (q == 2) {
            // A_0 - A_1 exactly.
            const Wide a0 = autocorrelation[0], a1 = autocorrelation[1];
            return a0 >= a1 ? static_cast<long double>(a0 - a1) : -static_cast<long double>(a1 - a0);
        }
        long double acc = static_cast<long double>(autocorrelation[0]);
        for (unsigned delta = 1; delta < q; ++delta)
            acc += std::cos(2.0L * std::numbers::pi_v<long double> * delta / q) *
                   static_cast<long double>(autocorrelation[delta]);
        return std::max(acc, 0.0L);
    }
};

double bias_from_histogram(const std::uint64_t* counts, unsigned q, std::uint64_t total) {
    if (q == 2) {
        const std::uint64_t diff = counts[0] > counts[1] ? counts[0] - counts[1] : counts[1] - counts[0];
        return static_cast<double>(diff) / static_cast<double>(total);
    }
    SquaredSum s(q);
    s.add(counts);
    return static_cast<double>(std::sqrt(s.value()) / static_cast<long double>(total));
}

void histogram(std::span<const Elem> values, unsigned q, std::vector<std::uint64_t>& counts) {
    std::fill(counts.begin(), counts.end(), 0);
    kernels::zq_histogram(values, q, counts.data());
}

unsigned bit_count(std::uint64_t size) { return static_cast<unsigned>(std::countr_zero(size)); }

// Shared randomness: sample s reads only CounterRng(seed, s), so chunked
// parallel evaluation reproduces the serial stream.
void draw_point(CounterRng& rng, unsigned q, std::size_t n, Point& out) {
    out.resize(n);
    for (auto& c : out) c = static_cast<Elem>(rng.below(q));
}

} // namespace

double bias_of_values(std::span<const Elem> values, unsigned q) {
    if (values.empty()) throw DomainError("empty value table");
    std::vector<std::uint64_t> counts(q, 0);
    histogram(values, q, counts);
    return bias_from_histogram(counts.data(), q, values.size());
}

double bias_of_bits(std::span<const std::uint64_t> bits, unsigned n) {
    const std::uint64_t size = std::uint64_t{1} << n;
    const std::uint64_t ones = kernels::popcount(bits);
    const std::uint64_t counts[2] = {size - ones, ones};
    return bias_from_histogram(counts, 2, size);
}

BiasReport bias(const Poly& f, const AnalysisCaps& caps) {
    checked_domain_size(f.q(), f.n(), std::min(caps.bias_cap, kTableCap), "exact bias");
    BiasReport r;
    if (f.is_constant()) {
        r.value = 1.0;
    } else if (f.q() == 2) {
        r.value = bias_of_bits(f.bit_table(), static_cast<unsigned>(f.n()));
    } else {
        r.value = bias_of_values(f.table(), f.q());
    }
    return r;
}

BiasReport bias_mc(const Poly& f, std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) throw DomainError("Monte Carlo bias needs at least one sample");
    BiasReport r;
    r.method = Method::monte_carlo;
    r.samples = samples;
    r.seed = seed;
    r.halfwidth = 3.0 / std::sqrt(static_cast<double>(samples));
    if (f.is_constant()) {
        r.value = 1.0;
        return r;
    }
    const unsigned q = f.q();
    const auto size = domain_size(q, f.n());
    const bool tabled = size && *size <= kTableCap;
    const std::vector<Elem>* table = tabled ? &f.table() : nullptr;
    using Counts = std::vector<std::uint64_t>;
    const Counts counts = parallel_reduce(
        samples, Counts(q, 0),
        [&](std::size_t b, std::size_t e) {
            Counts c(q, 0);
            Point x;
            for (std::size_t s = b; s < e; ++s) {
                CounterRng rng(seed, s);
                draw_point(rng, q, f.n(), x);
                ++c[table ? (*table)[point_to_index(x, q)] : f.evaluate(x)];
            }
            return c;
        },
        [](Counts a, const Counts& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
            return a;
        });
    r.value = bias_from_histogram(counts.data(), q, samples);
    return r;
}

BiasReport bias_auto(const Poly& f, std::uint64_t samples, std::uint64_t seed, const AnalysisCaps& caps) {
    const auto size = domain_size(f.q(), f.n());
    if (size && *size <= std::min(caps.bias_cap, kTableCap)) return bias(f, caps);
    return bias_mc(f, samples, seed);
}

Poly derivative(const Poly& f, std::span<const Elem> y) {
    if (y.size() != f.n()) throw DomainError("direction has wrong dimension");
    return affine_substitute(f, AffineMap::translation(f.q(), y)) - f;
}

std::vector<Elem> derivative_values(std::span<const Elem> values, unsigned q, std::size_t n, std::span<const Elem> y) {
    const auto shift = translation_indices(q, n, y);
    if (shift.size() != values.size()) throw DomainError("value table has wrong length");
    std::vector<Elem> out(values.size());
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = values[shift[x]];
    kernels::zq_sub_mod(out, out, values, q);
    return out;
}

// --- Gowers norms -----------------------------------------------------------

namespace {

struct GowersWalker {
    unsigned q;
    std::size_t n;
    std::uint64_t size;
    int levels; // number of derivatives taken before the squared character sum

    // F_2: bit-packed tables.
    void walk_bits(const std::vector<std::uint64_t>& t, int level, Wide& acc) const {
        if (level == levels) {
            const std::uint64_t ones = kernels::popcount(t);
            const std::uint64_t diff = size > 2 * ones ? size - 2 * ones : 2 * ones - size;
            acc += Wide{diff} * diff;
            return;
        }
        std::vector<std::uint64_t> next(t.size());
        for (std::uint64_t y = 0; y < size; ++y) {
            kernels::f2_derivative(next, t, y, bit_count(size));
            walk_bits(next, level + 1, acc);
        }
    }

    void walk_values(const std::vector<Elem>& t, int level, SquaredSum& acc, std::vector<std::uint64_t>& counts,
                     const std::vector<std::vector<std::uint64_t>>& shifts) const {
        if (level == levels) {
            histogram(t, q, counts);
            acc.add(counts.data());
            return;
        }
        std::vector<Elem> next(t.size());
        for (std::uint64_t y = 0; y < size; ++y) {
            const auto& shift = shifts[y];
            for (std::size_t x = 0; x < next.size(); ++x) next[x] = t[shift[x]];
            kernels::zq_sub_mod(next, next, t, q);
            walk_values(next, level + 1, acc, counts, shifts);
        }
    }
};

GowersEstimate finish(int d, long double mean) {
    GowersEstimate g;
    g.order = d;
    g.raw_mean = static_cast<double>(mean);
    if (mean < 0) {
        g.clamped = true;
        mean = 0;
    }
    g.value = static_cast<double>(std::pow(mean, 1.0L / static_cast<long double>(std::uint64_t{1} << d)));
    g.value = std::min(g.value, 1.0);
    return g;
}

} // namespace

GowersEstimate gowers_norm(const Poly& f, int d, const AnalysisCaps& caps) {
    if (d < 1) throw DomainError("Gowers norm order must be at least 1");
    const unsigned q = f.q();
    const std::size_t n = f.n();
    const auto size = domain_size(q, n);
    const auto tuples = domain_size(q, n * static_cast<std::size_t>(d + 1));
    if (!size || *size > kTableCap || !tuples || *tuples > caps.gowers_cap)
        throw InfeasibleError("exact U^" + std::to_string(d) + " norm needs q^{n(d+1)} <= " +
                              std::to_string(caps.gowers_cap));
    if (d == 1) {
        const double b = bias(f, caps).value;
        GowersEstimate g = finish(1, static_cast<long double>(b) * b);
        g.value = b;
        return g;
    }

    const GowersWalker walker{q, n, *size, d - 1};
    // Parallelize over the first direction y_1; integer partial sums make the
    // reduction order irrelevant.
    long double total_sq = 0;
    const long double tuple_count = std::pow(static_cast<long double>(*size), d - 1);
    const long double norm = static_cast<long double>(*size) * static_cast<long double>(*size) * tuple_count;
    if (q == 2) {
        const auto& bits = f.bit_table();
        const Wide sum = parallel_reduce(
            *size, Wide{0},
            [&](std::size_t b, std::size_t e) {
                Wide acc = 0;
                std::vector<std::uint64_t> next(bits.size());
                for (std::size_t y = b; y < e; ++y) {
                    kernels::f2_derivative(next, bits, y, static_cast<unsigned>(n));
                    walker.walk_bits(next, 1, acc);
                }
                return acc;
            },
            [](Wide a, Wide b) { return a + b; });
        total_sq = static_cast<long double>(sum);
    } else {
        const auto& values = f.table();
        std::vector<std::vector<std::uint64_t>> shifts(*size);
        for (std::uint64_t y = 0; y < *size; ++y) shifts[y] = translation_indices(q, n, index_to_point(y, q, n));
        const SquaredSum sum = parallel_reduce(
            *size, SquaredSum(q),
            [&](std::size_t b, std::size_t e) {
                SquaredSum acc(q);
                std::vector<std::uint64_t> counts(q);
                std::vector<Elem> next(values.size());
                for (std::size_t y = b; y < e; ++y) {
                    for (std::size_t x = 0; x < next.size(); ++x) next[x] = values[shifts[y][x]];
                    kernels::zq_sub_mod(next, next, values, q);
                    walker.walk_values(next, 1, acc, counts, shifts);
                }
                return acc;
            },
            [](SquaredSum a, const SquaredSum& b) { return a += b; });
        total_sq = sum.value();
    }
    return finish(d, total_sq / norm);
}

GowersEstimate gowers_mc(const Poly& f, int d, std::uint64_t samples, std::uint64_t seed) {
    if (d < 1) throw DomainError("Gowers norm order must be at least 1");
    if (d > 16) throw DomainError("Monte Carlo Gowers norm order above 16 is not supported");
    if (samples == 0) throw DomainError("Monte Carlo Gowers norm needs at least one sample");
    const unsigned q = f.q();
    const std::size_t n = f.n();
    const auto size = domain_size(q, n);
    const std::vector<Elem>* table = size && *size <= kTableCap ? &f.table() : nullptr;
    const PrimeField& field = f.field();
    using Counts = std::vector<std::uint64_t>;
    const Counts counts = parallel_reduce(
        samples, Counts(q, 0),
        [&](std::size_t b, std::size_t e) {
            Counts c(q, 0);
            std::vector<Point> pts(d + 1);
            Point z(n);
            for (std::size_t s = b; s < e; ++s) {
                CounterRng rng(seed, s);
                for (auto& p : pts) draw_point(rng, q, n, p);
                unsigned acc = 0;
                for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
                    z = pts[0];
                    for (int j = 0; j < d; ++j)
                        if ((mask >> j) & 1u)
                            for (std::size_t i = 0; i < n; ++i) z[i] = field.add(z[i], pts[j + 1][i]);
                    const Elem v = table ? (*table)[point_to_index(z, q)] : f.evaluate(z);
                    const bool negative = ((d - std::popcount(mask)) & 1) != 0;
                    acc += negative ? field.neg(v) : v;
                }
                ++c[acc % q];
            }
            return c;
        },
        [](Counts a, const Counts& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
            return a;
        });
    long double mean = 0;
    for (unsigned v = 0; v < q; ++v)
        mean += static_cast<long double>(counts[v]) * std::cos(2.0L * std::numbers::pi_v<long double> * v / q);
    mean /= static_cast<long double>(samples);
    GowersEstimate g = finish(d, mean);
    g.method = Method::monte_carlo;
    g.samples = samples;
    g.seed = seed;
    g.halfwidth = 3.0 / std::sqrt(static_cast<double>(samples));
    return g;
}

double correlation(const Poly& f, const Poly& p, const AnalysisCaps& caps) {
    require_compatible(f, p);
    return bias(f - p, caps).value;
}

// --- derivative survey ------------------------------------------------------

namespace {

// bias(D_y f) for the point index y, from f's table.
class DerivativeBias {
public:
    explicit DerivativeBias(const Poly& f) : f_(f) {
        if (f.q() == 2) bits_ = &f.bit_table();
        else values_ = &f.table();
    }

    double operator()(std::uint64_t y, std::vector<std::uint64_t>& scratch_bits, std::vector<Elem>& scratch) const {
        const unsigned q = f_.q();
        const std::size_t n = f_.n();
        if (bits_) {
            scratch_bits.resize(bits_->size());
            kernels::f2_derivative(scratch_bits, *bits_, y, static_cast<unsigned>(n));
            return bias_of_bits(scratch_bits, static_cast<unsigned>(n));
        }
        const auto shift = translation_indices(q, n, index_to_point(y, q, n));
        scratch.resize(values_->size());
        for (std::size_t x = 0; x < scratch.size(); ++x) scratch[x] = (*values_)[shift[x]];
        kernels::zq_sub_mod(scratch, scratch, *values_, q);
        return bias_of_values(scratch, q);
    }

private:
    const Poly& f_;
    const std::vector<std::uint64_t>* bits_ = nullptr;
    const std::vector<Elem>* values_ = nullptr;
};

} // namespace

DerivativeSurvey derivative_survey(const Poly& f, double threshold, const SurveyOptions& options,
                                   const AnalysisCaps& caps) {
    const std::uint64_t size = checked_domain_size(f.q(), f.n(), std::min(caps.bias_cap, kTableCap), "derivative survey");
    DerivativeSurvey s;
    s.threshold = threshold;
    s.bias_f = bias(f, caps).value;
    const DerivativeBias db(f);
    const auto pairs = domain_size(f.q(), 2 * f.n());
    const bool exact = pairs && *pairs <= caps.survey_cap;
    if (!exact && !options.allow_sampling)
        throw InfeasibleError("exact derivative survey needs q^{2n} <= " + std::to_string(caps.survey_cap));

    const std::uint64_t count = exact ? size : options.samples;
    if (count == 0) throw DomainError("derivative survey needs at least one direction");
    std::vector<double> biases(count);
    std::vector<std::uint64_t> directions(count);
    parallel_chunks(count, std::min<std::size_t>(count, 64), [&](std::size_t, std::size_t b, std::size_t e) {
        std::vector<std::uint64_t> sb;
        std::vector<Elem> sv;
        for (std::size_t i = b; i < e; ++i) {
            std::uint64_t y = i;
            if (!exact) {
                CounterRng rng(options.seed, i);
                y = rng.below(size);
            }
            directions[i] = y;
            biases[i] = db(y, sb, sv);
        }
    });
    long double sum = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        sum += biases[i];
        if (biases[i] >= threshold) {
            ++s.set_size;
            if (options.keep_set) s.set.push_back(directions[i]);
        }
    }
    if (!exact) {
        std::sort(s.set.begin(), s.set.end());
        s.method = Method::monte_carlo;
        s.samples = count;
        s.seed = options.seed;
    }
    s.mean = static_cast<double>(sum / static_cast<long double>(count));
    s.density = static_cast<double>(s.set_size) / static_cast<double>(count);
    s.mean_bound_holds = s.mean >= s.bias_f * s.bias_f - 1e-12;
    return s;
}

} // namespace polystruct
