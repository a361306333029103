// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polystruct/poly.hpp"

namespace polystruct {

enum class Method { exact, monte_carlo };

std::string to_string(Method m);

struct AnalysisCaps {
    /// Exact bias and surveys need q^n below this.
    std::uint64_t bias_cap = kTableCap;
    /// Exact Gowers norms of order d need q^{n(d+1)} below this.
    std::uint64_t gowers_cap = std::uint64_t{1} << 34;
    /// Exact derivative surveys need q^{2n} below this.
    std::uint64_t survey_cap = std::uint64_t{1} << 34;
};

struct BiasReport {
    double value = 0.0;
    Method method = Method::exact;
    std::uint64_t samples = 0;
    double halfwidth = 0.0;
    std::uint64_t seed = 0;
};

struct GowersEstimate {
    int order = 1;
    double value = 0.0;
    Method method = Method::exact;
    std::uint64_t samples = 0;
    double halfwidth = 0.0;
    std::uint64_t seed = 0;
    /// Mean of the 2^d-fold products before taking the root.
    double raw_mean = 0.0;
    /// Set when a negative sampled mean was clamped to 0.
    bool clamped = false;
};

/// |E_x e(v_x)| for a table of F_q values, computed from the value histogram.
double bias_of_values(std::span<const Elem> values, unsigned q);
/// |E_x (-1)^{f(x)}| for a bit-packed F_2 table of 2^n entries.
double bias_of_bits(std::span<const std::uint64_t> bits, unsigned n);

/// Exact bias by full enumeration; throws InfeasibleError above caps.bias_cap.
BiasReport bias(const Poly& f, const AnalysisCaps& caps = {});
/// Monte Carlo bias over `samples` uniform points, halfwidth 3/sqrt(samples).
BiasReport bias_mc(const Poly& f, std::uint64_t samples, std::uint64_t seed);
/// Exact when feasible, Monte Carlo otherwise.
BiasReport bias_auto(const Poly& f, std::uint64_t samples, std::uint64_t seed, const AnalysisCaps& caps = {});

/// D_y f(x) = f(x + y) - f(x) as an exact polynomial.
Poly derivative(const Poly& f, std::span<const Elem> y);
/// Value table of D_y f computed from f's table.
std::vector<Elem> derivative_values(std::span<const Elem> values, unsigned q, std::size_t n, std::span<const Elem> y);

/// Exact ||e(f)||_{U^d}, d >= 1. Uses ||F||^{2^d} = E_{y_1..y_{d-1}} |E_x Delta F|^2
/// with integer accumulation, so order 1 equals bias(f) and phases of degree < d
/// give exactly 1.
GowersEstimate gowers_norm(const Poly& f, int d, const AnalysisCaps& caps = {});
/// Monte Carlo over tuples (x, y_1..y_d); the real part of the sampled mean
/// is clamped at 0 before the root.
GowersEstimate gowers_mc(const Poly& f, int d, std::uint64_t samples, std::uint64_t seed);

/// |<e(f), e(P)>| = bias(f - P), exact.
double correlation(const Poly& f, const Poly& p, const AnalysisCaps& caps = {});

struct DerivativeSurvey {
    double threshold = 0.0;
    Method method = Method::exact;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double bias_f = 0.0;
    /// Point indices y with bias(D_y f) >= threshold (exact mode, when requested).
    std::vector<std::uint64_t> set;
    std::uint64_t set_size = 0;
    /// |A| / q^n, or the sampled fraction.
    double density = 0.0;
    /// Mean of bias(D_y f) over y.
    double mean = 0.0;
    /// mean >= bias(f)^2 (with 1e-12 slack).
    bool mean_bound_holds = false;
};

struct SurveyOptions {
    /// Sample directions instead of refusing when q^{2n} exceeds the cap.
    bool allow_sampling = true;
    std::uint64_t samples = 4096;
    std::uint64_t seed = 0;
    bool keep_set = true;
};

DerivativeSurvey derivative_survey(const Poly& f, double threshold, const SurveyOptions& options = {},
                                   const AnalysisCaps& caps = {});

} // namespace polystruct
