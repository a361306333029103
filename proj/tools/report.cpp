// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "polystruct/error.hpp"

namespace polystruct::report {

std::string digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json point(const Point& p) {
    Json a = Json::array();
    for (Elem e : p) a.push_back(static_cast<unsigned>(e));
    return a;
}

Json points(const std::vector<Point>& ps) {
    Json a = Json::array();
    for (const auto& p : ps) a.push_back(point(p));
    return a;
}

Json elems(const std::vector<Elem>& v) { return point(v); }

Json to_json(const BiasReport& r) {
    return {{"value", r.value},
            {"method", to_string(r.method)},
            {"samples", r.samples},
            {"halfwidth", r.halfwidth},
            {"seed", r.seed}};
}

Json to_json(const GowersEstimate& g) {
    return {{"order", g.order},       {"value", g.value}, {"method", to_string(g.method)},
            {"samples", g.samples},   {"halfwidth", g.halfwidth}, {"seed", g.seed},
            {"raw_mean", g.raw_mean}, {"clamped", g.clamped}};
}

Json to_json(const DerivativeSurvey& s) {
    Json j{{"value", s.bias_f},   {"method", to_string(s.method)}, {"samples", s.samples},
           {"halfwidth", s.method == Method::exact ? 0.0 : 3.0 / std::sqrt(static_cast<double>(std::max<std::uint64_t>(s.samples, 1)))},
           {"seed", s.seed},      {"threshold", s.threshold},      {"density", s.density},
           {"mean", s.mean},      {"set_size", s.set_size},        {"mean_bound_holds", s.mean_bound_holds}};
    if (!s.set.empty()) j["set"] = s.set;
    return j;
}

Json to_json(const AffineMap& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.n_out(); ++r) {
        const auto row = m.matrix().row(r);
        rows.push_back(point(Point(row.begin(), row.end())));
    }
    return {{"matrix", rows}, {"offset", point(m.offset())}};
}

Json to_json(const QuadNormalForm& nf) {
    return {{"rank", nf.rank()},
            {"alpha", elems(nf.alpha)},
            {"normal_form", nf.normal_form.to_string()},
            {"linear", nf.linear.to_string()},
            {"map", to_json(nf.map)},
            {"closed_form_bias", quad_bias_closed_form(nf)}};
}

Json to_json(const Decomposition& d) {
    Json pairs = Json::array();
    for (const auto& p : d.pairs) pairs.push_back({{"g", p.g.to_string()}, {"h", p.h.to_string()}});
    return {{"budget", d.budget},
            {"pairs", pairs},
            {"q", d.remainder.q()},
            {"n", d.remainder.n()},
            {"remainder", d.remainder.to_string()}};
}

Json to_json(const SearchResult& r) {
    return {{"status", r.status},
            {"timed_out", r.timed_out},
            {"candidates", r.candidates},
            {"pairs", r.decomposition ? Json(r.decomposition->size()) : Json(nullptr)},
            {"decomposition", r.decomposition ? to_json(*r.decomposition) : Json(nullptr)},
            {"log", r.log}};
}

Json to_json(const SubspaceCertificate& c) {
    Json j{{"offset", point(c.subspace.offset())},
           {"basis", points(c.subspace.basis())},
           {"dim", c.subspace.dim()},
           {"claim", to_string(c.claim)},
           {"value", c.value ? Json(static_cast<unsigned>(*c.value)) : Json(nullptr)},
           {"verified", c.verified},
           {"checked_points", c.checked_points}};
    if (!c.witness.empty()) j["witness"] = points(c.witness);
    return j;
}

Json to_json(const RegularizeResult& r) {
    Json trace = Json::array();
    for (const auto& round : r.trace) {
        Json added = Json::array();
        for (const auto& p : round.added) added.push_back(p.to_string());
        trace.push_back({{"lambda", elems(round.lambda)},
                         {"bias", round.bias},
                         {"replaced", round.replaced},
                         {"directions", points(round.directions)},
                         {"added", added},
                         {"attempts", round.attempts},
                         {"refined", round.refined}});
    }
    Json factor = Json::array();
    for (const auto& p : r.factor.polys()) factor.push_back(p.to_string());
    const auto& c = r.certificate;
    return {{"factor", factor},
            {"complexity", r.factor.complexity()},
            {"trace", trace},
            {"not_regular", r.not_regular},
            {"refinement_failed", r.refinement_failed},
            {"certificate",
             {{"epsilon", c.epsilon},
              {"unbiased", c.unbiased},
              {"max_bias", c.max_bias},
              {"combinations", c.combinations},
              {"semantic_refinement", c.semantic_refinement},
              {"syntactic_refinement", c.syntactic_refinement}}}};
}

Json to_json(const TorusValue& t) {
    const auto [num, logden] = t.reduced();
    return {{"numerator", num}, {"denominator", ipow(t.q(), logden)}, {"log_denominator", logden}};
}

Json to_json(const DegreeCheckResult& r) {
    Json j{{"holds", r.holds}, {"sampled", r.sampled}, {"tuples_checked", r.tuples_checked}};
    if (!r.witness.empty()) {
        j["witness"] = points(r.witness);
        j["witness_value"] = to_json(*r.witness_value);
    }
    return j;
}

Decomposition decomposition_from_json(const Json& j, std::optional<std::size_t> n) {
    auto fail = [](const std::string& what) -> ParseError { return ParseError("decomposition JSON: " + what, 1, 1); };
    if (!j.is_object()) throw fail("expected an object");
    for (const char* key : {"budget", "pairs", "q", "remainder"})
        if (!j.contains(key)) throw fail(std::string("missing key '") + key + "'");
    if (!j["budget"].is_number_integer() || !j["q"].is_number_unsigned()) throw fail("budget and q must be integers");
    if (!j["pairs"].is_array()) throw fail("pairs must be an array");
    if (j.contains("n")) {
        if (!j["n"].is_number_unsigned()) throw fail("n must be an integer");
        n = j["n"].get<std::size_t>();
    }
    if (!n) throw fail("n is neither in the file nor on the command line");
    const unsigned q = j["q"].get<unsigned>();
    auto poly = [&](const Json& v, const char* what) {
        if (!v.is_string()) throw fail(std::string(what) + " must be a polynomial string");
        return parse_poly(v.get<std::string>(), q, *n);
    };
    Decomposition d{j["budget"].get<int>(), {}, poly(j["remainder"], "remainder")};
    for (const auto& p : j["pairs"]) {
        if (!p.is_object() || !p.contains("g") || !p.contains("h")) throw fail("each pair needs g and h");
        d.pairs.push_back({poly(p["g"], "g"), poly(p["h"], "h")});
    }
    return d;
}

} // namespace polystruct::report
