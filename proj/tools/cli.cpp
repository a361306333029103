// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "polystruct/error.hpp"
#include "polystruct/parallel.hpp"
#include "polystruct/rng.hpp"
#include "report.hpp"

namespace polystruct::cli {

namespace {

using report::Json;
using Clock = std::chrono::steady_clock;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Outcome {
    Json result = Json::object();
    int code = kExitOk;
};

struct Common {
    std::optional<unsigned> q_opt;
    /// q_opt, a file header, or 2.
    unsigned q = 2;
    std::optional<std::size_t> n;
    std::string poly;
    std::string poly_file;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string out;
    bool record_time = false;
    // Filled while loading inputs.
    Json inputs = Json::object();
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void note_input(Common& c, const std::string& name, const std::string& source, const std::string& bytes) {
    c.inputs[name] = {{"source", source}, {"bytes", bytes.size()}, {"digest", report::digest(bytes)}};
}

std::size_t require_n(const Common& c) {
    if (!c.n) throw UsageError("--n is required");
    return *c.n;
}

// Polynomial text from --poly or --poly-file; a file header fills in q and n.
std::string poly_text(Common& c, const std::string& name = "poly") {
    if (!c.poly.empty() && !c.poly_file.empty()) throw UsageError("give either --poly or --poly-file, not both");
    if (!c.poly.empty()) {
        note_input(c, name, "inline", c.poly);
        return c.poly;
    }
    if (c.poly_file.empty()) throw UsageError("--poly or --poly-file is required");
    const std::string content = read_file(c.poly_file);
    note_input(c, name, "file", content);
    auto [header, body] = split_header(content);
    if (header.q) {
        if (c.q_opt && *c.q_opt != *header.q) throw UsageError("--q disagrees with the file header");
        c.q = *header.q;
    }
    if (header.n) {
        if (c.n && *c.n != *header.n) throw UsageError("--n disagrees with the file header");
        c.n = *header.n;
    }
    return body;
}

Poly load_poly(Common& c) {
    const std::string text = poly_text(c);
    return parse_poly(text, c.q, require_n(c));
}

// "1,0,1" (commas or spaces) as a point of F_q^n.
Point parse_point(const std::string& text, unsigned q, std::size_t n) {
    Point p;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == ',' || text[i] == ' ') {
            ++i;
            continue;
        }
        unsigned v = 0;
        const auto r = std::from_chars(text.data() + i, text.data() + text.size(), v);
        if (r.ec != std::errc()) throw ParseError("expected a coordinate", 1, i + 1);
        if (v >= q) throw ParseError("coordinate outside F_" + std::to_string(q), 1, i + 1);
        p.push_back(static_cast<Elem>(v));
        i = static_cast<std::size_t>(r.ptr - text.data());
    }
    if (p.size() != n) throw ParseError("expected " + std::to_string(n) + " coordinates", 1, text.size() + 1);
    return p;
}

Json degree_json(int d) { return d == kZeroDegree ? Json(nullptr) : Json(d); }

// ---- commands ----------------------------------------------------------------

enum class Mode { automatic, exact, monte_carlo };

const std::map<std::string, Mode> kModes{{"auto", Mode::automatic}, {"exact", Mode::exact}, {"mc", Mode::monte_carlo}};

Outcome cmd_bias(Common& c, Mode mode, std::uint64_t samples) {
    const Poly f = load_poly(c);
    BiasReport r;
    switch (mode) {
    case Mode::exact: r = bias(f); break;
    case Mode::monte_carlo: r = bias_mc(f, samples, c.seed); break;
    case Mode::automatic: r = bias_auto(f, samples, c.seed); break;
    }
    return {report::to_json(r)};
}

GowersEstimate gowers_any(const Poly& f, int d, Mode mode, std::uint64_t samples, std::uint64_t seed) {
    if (mode == Mode::monte_carlo) return gowers_mc(f, d, samples, seed);
    if (mode == Mode::exact) return gowers_norm(f, d);
    try {
        return gowers_norm(f, d);
    } catch (const InfeasibleError&) {
        return gowers_mc(f, d, samples, seed);
    }
}

Outcome cmd_gowers(Common& c, int d, Mode mode, std::uint64_t samples) {
    const Poly f = load_poly(c);
    return {report::to_json(gowers_any(f, d, mode, samples, c.seed))};
}

Outcome cmd_derive(Common& c, const std::vector<std::string>& dirs) {
    Poly f = load_poly(c);
    Json used = Json::array();
    for (const auto& d : dirs) {
        const Point y = parse_point(d, c.q, f.n());
        f = derivative(f, y);
        used.push_back(report::point(y));
    }
    return {{{"directions", used}, {"derivative", f.to_string()}, {"degree", degree_json(f.degree())}}};
}

Outcome cmd_survey(Common& c, std::optional<double> threshold, std::uint64_t samples, bool no_sampling, bool keep_set) {
    const Poly f = load_poly(c);
    double t;
    if (threshold) {
        t = *threshold;
    } else {
        const double b = bias_auto(f, samples, c.seed).value;
        t = b * b / 2;
    }
    const SurveyOptions opt{.allow_sampling = !no_sampling, .samples = samples, .seed = c.seed, .keep_set = keep_set};
    return {report::to_json(derivative_survey(f, t, opt))};
}

Outcome cmd_quadform(Common& c) {
    const Poly f = load_poly(c);
    const auto nf = quad_normal_form(f);
    Json j = report::to_json(nf);
    j["recomposes"] = recompose(nf) == f;
    return {j};
}

Outcome cmd_decompose(Common& c, const SearchOptions& opt) {
    const Poly f = load_poly(c);
    return {report::to_json(decompose_search(f, opt))};
}

Decomposition load_decomposition(Common& c, const std::string& path, std::optional<std::size_t> n) {
    const std::string content = read_file(path);
    note_input(c, "decomposition", "file", content);
    Json j;
    try {
        j = Json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 1, e.byte);
    }
    return report::decomposition_from_json(j, n);
}

Outcome cmd_verify(Common& c, const std::string& decomp) {
    const Poly f = load_poly(c);
    const auto dec = load_decomposition(c, decomp, f.n());
    const auto v = verify_decomposition(f, dec);
    return {{{"ok", v.ok}, {"reason", v.reason}, {"pairs", dec.size()}}, v.ok ? kExitOk : kExitFalse};
}

Outcome cmd_lift(Common& c, const std::string& decomp, const std::string& hyperplane) {
    const Poly f = load_poly(c);
    const auto colon = hyperplane.find(':');
    if (colon == std::string::npos) throw ParseError("hyperplane must look like 'w_1,...,w_n:a'", 1, 1);
    const Point w = parse_point(hyperplane.substr(0, colon), c.q, f.n());
    const Point a = parse_point(hyperplane.substr(colon + 1), c.q, 1);
    const auto plane = AffineSubspace::hyperplane(c.q, w, a[0]);
    const auto dec = load_decomposition(c, decomp, f.n() - 1);
    const auto lifted = lift_decomposition(f, plane, dec);
    const auto v = verify_decomposition(f, lifted);
    return {{{"hyperplane", {{"normal", report::point(w)}, {"value", static_cast<unsigned>(a[0])}}},
             {"restriction", restrict_to(f, plane).to_string()},
             {"decomposition", report::to_json(lifted)},
             {"extra_pairs", static_cast<long long>(lifted.size()) - static_cast<long long>(dec.size())},
             {"verified", v.ok},
             {"reason", v.reason}},
            v.ok ? kExitOk : kExitFalse};
}

Outcome cmd_constant_subspace(Common& c, const std::string& mode, std::optional<std::size_t> dim, int rounds) {
    const Poly f = load_poly(c);
    Json j{{"mode", mode}};
    std::optional<SubspaceCertificate> cert;
    if (mode == "greedy") {
        cert = constant_subspace_greedy(f, rounds, c.seed);
    } else if (dim) {
        cert = constant_subspace_exhaustive(f, *dim);
    } else {
        cert = constant_subspace_max(f);
    }
    j["certificate"] = cert ? report::to_json(*cert) : Json(nullptr);
    return {j, cert && cert->verified ? kExitOk : kExitFalse};
}

Outcome cmd_regularize(Common& c, const std::vector<std::string>& polys, const RegularityPolicy& policy) {
    std::vector<std::string> texts;
    if (!polys.empty()) {
        if (!c.poly_file.empty()) throw UsageError("give either --poly or --poly-file, not both");
        std::string joined;
        for (const auto& p : polys) joined += p + "\n";
        note_input(c, "factor", "inline", joined);
        texts = polys;
    } else {
        const std::string body = poly_text(c, "factor");
        std::istringstream in(body);
        for (std::string line; std::getline(in, line);) {
            const auto first = line.find_first_not_of(" \t\r");
            if (first != std::string::npos && line[first] != '#') texts.push_back(line);
        }
    }
    const std::size_t n = require_n(c);
    std::vector<Poly> members;
    for (const auto& t : texts) members.push_back(parse_poly(t, c.q, n));
    const auto r = regularize(PolynomialFactor(c.q, n, std::move(members)), policy);
    const bool ok = r.certificate.unbiased && r.certificate.semantic_refinement;
    return {report::to_json(r), ok ? kExitOk : kExitFalse};
}

Outcome cmd_sumset_subspace(Common& c, const std::string& set_file, const std::string& pts, int k, std::size_t min_dim,
                            int trials) {
    std::optional<PointSet> a;
    if (!set_file.empty() && !pts.empty()) throw UsageError("give either --set-file or --points, not both");
    if (!set_file.empty()) {
        const std::string content = read_file(set_file);
        note_input(c, "set", "file", content);
        a = PointSet::parse(content);
    } else if (!pts.empty()) {
        note_input(c, "set", "inline", pts);
        const std::size_t n = require_n(c);
        a.emplace(c.q, n);
        std::size_t start = 0;
        for (;;) {
            const auto semi = pts.find(';', start);
            a->insert(parse_point(pts.substr(start, semi - start), c.q, n));
            if (semi == std::string::npos) break;
            start = semi + 1;
        }
    } else {
        throw UsageError("--set-file or --points is required");
    }
    const PointSet s = sumset(*a, k);
    const auto cert = subspace_in_sumset(*a, k, min_dim, {.random_trials = trials, .seed = c.seed});
    return {{{"k", k},
             {"set_size", a->count()},
             {"density", a->density()},
             {"sumset_size", s.count()},
             {"sumset_density", s.density()},
             {"min_dim", min_dim},
             {"certificate", cert ? report::to_json(*cert) : Json(nullptr)}},
            cert && cert->verified ? kExitOk : kExitFalse};
}

NonclassicalPoly load_nc(Common& c, const std::string& path) {
    if (path.empty()) throw UsageError("--nc-file is required");
    const std::string content = read_file(path);
    note_input(c, "nonclassical", "file", content);
    return parse_nonclassical(content);
}

Outcome cmd_nc_eval(Common& c, const std::string& path, const std::vector<std::string>& pts) {
    const auto p = load_nc(c, path);
    Json values = Json::array();
    for (const auto& s : pts) {
        const Point x = parse_point(s, p.q(), p.n());
        values.push_back({{"point", report::point(x)}, {"value", report::to_json(nc_eval(p, x))}});
    }
    return {{{"q", p.q()}, {"n", p.n()}, {"depth", p.depth()}, {"degree", degree_json(p.degree())}, {"values", values}}};
}

Outcome cmd_nc_degree(Common& c, const std::string& path, int d, std::uint64_t samples) {
    const auto p = load_nc(c, path);
    DegreeCheckOptions opt;
    if (samples > 0) {
        opt.allow_sampling = true;
        opt.samples = samples;
    }
    opt.seed = c.seed;
    const auto r = nc_degree_check(p, d, opt);
    Json j = report::to_json(r);
    j["d"] = d;
    j["degree"] = degree_json(p.degree());
    return {j, r.holds ? kExitOk : kExitFalse};
}

struct Generated {
    Poly f;
    std::optional<Decomposition> truth;
};

Generated generate(const std::string& kind, unsigned q, std::size_t n, int d, int pairs, int g_degree, std::uint64_t seed) {
    if (kind == "random") return {random_poly(q, n, d, seed), {}};
    if (kind == "homogeneous") return {random_homogeneous(q, n, d, seed), {}};
    if (kind == "s4") {
        if (q != 2) throw UsageError("the s4 generator lives over F_2");
        return {s4_generator(n), {}};
    }
    if (kind == "product") {
        CounterRng rng(seed, 0x70726f64ULL);
        const Poly a = random_poly(q, n, d, rng.next());
        const Poly b = random_poly(q, n, d, rng.next());
        return {a * b, {}};
    }
    if (kind == "planted") {
        auto p = planted_instance(q, n, d, pairs, g_degree, seed);
        return {std::move(p.f), std::move(p.truth)};
    }
    throw UsageError("unknown generator '" + kind + "'");
}

Outcome cmd_sample(Common& c, const std::string& kind, int d, int pairs, int g_degree) {
    const std::size_t n = require_n(c);
    const auto g = generate(kind, c.q, n, d, pairs, g_degree, c.seed);
    Json j{{"kind", kind}, {"q", c.q}, {"n", n}, {"degree", degree_json(g.f.degree())}, {"poly", g.f.to_string()}};
    if (g.truth) j["planted"] = report::to_json(*g.truth);
    return {j};
}

struct ExperimentSpec {
    std::string generator = "random";
    std::size_t n_min = 0, n_max = 0;
    int d = 3;
    int instances = 1;
    std::uint64_t samples = 100000;
    int gowers_order = 0;
    std::string gowers_method = "auto";
    int rounds = 4;
    int pairs = 1;
    int g_degree = 2;
    int c_max = 4;
    double time_budget = 0;
    std::string csv;
};

struct Stat {
    std::uint64_t count = 0;
    double sum = 0, lo = std::numeric_limits<double>::infinity(), hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        ++count;
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void merge(const Stat& o) {
        count += o.count;
        sum += o.sum;
        lo = std::min(lo, o.lo);
        hi = std::max(hi, o.hi);
    }
    Json json() const {
        if (!count) return nullptr;
        return {{"count", count}, {"mean", sum / static_cast<double>(count)}, {"min", lo}, {"max", hi}};
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

Outcome cmd_experiment(Common& c, const ExperimentSpec& spec) {
    if (spec.csv.empty()) throw UsageError("--csv is required");
    if (spec.n_min == 0 || spec.n_max < spec.n_min) throw UsageError("need 1 <= --n-min <= --n-max");
    const Mode gmode = kModes.at(spec.gowers_method);
    std::ofstream csv(spec.csv, std::ios::binary | std::ios::trunc);
    if (!csv) throw UsageError("cannot write '" + spec.csv + "'");
    std::string csv_bytes;
    auto emit = [&](const std::string& line) {
        csv << line << '\n';
        csv.flush();
        csv_bytes += line + '\n';
    };
    emit("generator,n,instance,seed,degree,bias,bias_method,gowers_order,gowers,gowers_power,gowers_method,subspace_dim,recovered,"
         "pairs,time_ms");

    const auto start = Clock::now();
    bool truncated = false;
    Json by_n = Json::array();
    Stat all_bias, all_gowers, all_power, all_dim;
    std::uint64_t done = 0, recovered_total = 0, planted_total = 0;
    for (std::size_t n = spec.n_min; n <= spec.n_max && !truncated; ++n) {
        Stat bias_s, gowers_s, power_s, dim_s;
        std::uint64_t recovered = 0, planted = 0;
        for (int i = 0; i < spec.instances; ++i) {
            if (spec.time_budget > 0 &&
                std::chrono::duration<double>(Clock::now() - start).count() > spec.time_budget) {
                truncated = true;
                break;
            }
            const auto t0 = Clock::now();
            const std::uint64_t seed = CounterRng(c.seed, n).at(static_cast<std::uint64_t>(i));
            const auto g = generate(spec.generator, c.q, n, spec.d, spec.pairs, spec.g_degree, seed);
            const auto b = bias_auto(g.f, spec.samples, seed);
            bias_s.add(b.value);
            std::string gowers_cols = ",,,";
            if (spec.gowers_order > 0) {
                const auto ge = gowers_any(g.f, spec.gowers_order, gmode, spec.samples, seed);
                gowers_s.add(ge.value);
                power_s.add(ge.raw_mean);
                gowers_cols = fmt(ge.value) + "," + fmt(ge.raw_mean) + "," + to_string(ge.method) + ",";
            }
            std::string dim_col;
            if (spec.rounds > 0 && checked_domain_size(c.q, n, std::numeric_limits<std::uint64_t>::max(), "") <= (1U << 20)) {
                const auto cert = constant_subspace_greedy(g.f, spec.rounds, seed);
                dim_s.add(static_cast<double>(cert.subspace.dim()));
                dim_col = std::to_string(cert.subspace.dim());
            }
            std::string rec_cols = ",";
            if (g.truth) {
                ++planted;
                SearchOptions opt;
                opt.c_max = spec.c_max;
                opt.time_budget = 0;
                const auto r = decompose_search(g.f, opt);
                const bool ok = r.decomposition && verify_decomposition(g.f, *r.decomposition).ok;
                recovered += ok;
                rec_cols = std::string(ok ? "1" : "0") + "," + (ok ? std::to_string(r.decomposition->size()) : "");
            }
            const std::string ms =
                c.record_time ? fmt(std::chrono::duration<double, std::milli>(Clock::now() - t0).count()) : "";
            emit(spec.generator + "," + std::to_string(n) + "," + std::to_string(i) + "," + std::to_string(seed) + "," +
                 (g.f.degree() == kZeroDegree ? "" : std::to_string(g.f.degree())) + "," + fmt(b.value) + "," +
                 to_string(b.method) + "," + (spec.gowers_order > 0 ? std::to_string(spec.gowers_order) : "") + "," +
                 gowers_cols + dim_col + "," + rec_cols + "," + ms);
            ++done;
        }
        Json row{{"n", n},
                 {"bias", bias_s.json()},
                 {"gowers", gowers_s.json()},
                 {"gowers_power", power_s.json()},
                 {"subspace_dim", dim_s.json()}};
        if (planted) row["recovery_rate"] = static_cast<double>(recovered) / static_cast<double>(planted);
        if (bias_s.count) by_n.push_back(row);
        all_bias.merge(bias_s);
        all_gowers.merge(gowers_s);
        all_power.merge(power_s);
        all_dim.merge(dim_s);
        recovered_total += recovered;
        planted_total += planted;
    }
    Json overall{{"bias", all_bias.json()},
                 {"gowers", all_gowers.json()},
                 {"gowers_power", all_power.json()},
                 {"subspace_dim", all_dim.json()}};
    if (planted_total)
        overall["recovery_rate"] = static_cast<double>(recovered_total) / static_cast<double>(planted_total);
    return {{{"instances", done},
             {"truncated", truncated},
             {"csv", {{"path", spec.csv}, {"rows", done}, {"digest", report::digest(csv_bytes)}}},
             {"overall", overall},
             {"by_n", by_n}}};
}

// ---- wiring ------------------------------------------------------------------

Json manifest_params(const CLI::App* sub) {
    static const std::vector<std::string> skip{"--help", "--out", "--record-time", "--threads"};
    Json params = Json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        const std::string name = opt->get_name();
        if (std::find(skip.begin(), skip.end(), name) != skip.end()) continue;
        const std::string key = name.substr(name.find_first_not_of('-'));
        if (opt->count() > 0) {
            const auto& r = opt->results();
            if (!opt->get_expected_max() || opt->get_expected_max() > 1 || opt->get_items_expected_max() > 1)
                params[key] = r;
            else
                params[key] = r.empty() ? Json(true) : Json(r.back());
        } else if (!opt->get_default_str().empty()) {
            params[key] = opt->get_default_str();
        }
    }
    return params;
}

void write_report(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Structure of bounded-degree polynomials over small prime fields", "polystruct"};
    app.require_subcommand(1);
    app.set_version_flag("--version", report::kVersion);

    Common c;
    std::map<CLI::App*, std::function<Outcome()>> handlers;

    auto common = [&](CLI::App* sub, bool poly_input) {
        sub->add_option("--q", c.q_opt, "field size (prime, default 2)");
        sub->add_option("--n", c.n, "number of variables");
        if (poly_input) {
            sub->add_option("--poly", c.poly, "polynomial text, e.g. \"x1*x2 + x3\"");
            sub->add_option("--poly-file", c.poly_file, "file holding the polynomial, optional 'q=.. n=..' header");
        }
        sub->add_option("--seed", c.seed, "seed for every random choice")->capture_default_str();
        sub->add_option("--threads", c.threads, "worker thread cap (0 = hardware)");
        sub->add_option("--out", c.out, "write the report here instead of stdout");
        sub->add_flag("--record-time", c.record_time, "include wall time in the manifest (breaks byte identity)");
    };
    auto method = [](CLI::App* sub, std::string& m) {
        sub->add_option("--method", m, "auto, exact or mc")->check(CLI::IsMember({"auto", "exact", "mc"}))->capture_default_str();
    };

    // bias
    std::string bias_method = "auto";
    std::uint64_t samples = 100000;
    {
        auto* s = app.add_subcommand("bias", "bias |E e(f)|, exact or Monte Carlo");
        common(s, true);
        method(s, bias_method);
        s->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
        handlers[s] = [&] { return cmd_bias(c, kModes.at(bias_method), samples); };
    }
    int order = 2;
    {
        auto* s = app.add_subcommand("gowers", "Gowers U^d norm of e(f)");
        common(s, true);
        method(s, bias_method);
        s->add_option("--d", order, "norm order")->capture_default_str();
        s->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
        handlers[s] = [&] {
            if (order < 1) throw UsageError("--d must be at least 1");
            return cmd_gowers(c, order, kModes.at(bias_method), samples);
        };
    }
    std::vector<std::string> directions;
    {
        auto* s = app.add_subcommand("derive", "iterated additive derivative D_y f");
        common(s, true);
        s->add_option("--direction", directions, "direction 'y_1,...,y_n'; repeat to iterate")->required();
        handlers[s] = [&] { return cmd_derive(c, directions); };
    }
    std::optional<double> threshold;
    bool no_sampling = false, keep_set = false;
    {
        auto* s = app.add_subcommand("deriv-survey", "bias of D_y f over all (or sampled) directions y");
        common(s, true);
        s->add_option("--threshold", threshold, "bias threshold (default bias(f)^2 / 2)");
        s->add_option("--samples", samples, "sampled directions when the exact survey is too large")->capture_default_str();
        s->add_flag("--no-sampling", no_sampling, "fail instead of sampling");
        s->add_flag("--keep-set", keep_set, "list the directions above the threshold");
        handlers[s] = [&] { return cmd_survey(c, threshold, samples, no_sampling, keep_set); };
    }
    {
        auto* s = app.add_subcommand("quadform", "normal form of a quadratic");
        common(s, true);
        handlers[s] = [&] { return cmd_quadform(c); };
    }
    SearchOptions search;
    std::optional<int> budget;
    {
        auto* s = app.add_subcommand("decompose", "search f = sum g_i h_i + lower-degree remainder");
        common(s, true);
        s->add_option("--c-max", search.c_max, "largest number of pairs")->capture_default_str();
        s->add_option("--time-budget", search.time_budget, "seconds, <= 0 for none")->capture_default_str();
        s->add_option("--d", budget, "degree budget (default deg f)");
        s->add_option("--derivative-pool", search.derivative_pool, "derivative candidates per degree")->capture_default_str();
        handlers[s] = [&] {
            search.budget = budget;
            return cmd_decompose(c, search);
        };
    }
    std::string decomp_file;
    {
        auto* s = app.add_subcommand("verify-decomp", "check a decomposition JSON file against f");
        common(s, true);
        s->add_option("--decomp", decomp_file, "decomposition JSON")->required();
        handlers[s] = [&] { return cmd_verify(c, decomp_file); };
    }
    std::string hyperplane;
    {
        auto* s = app.add_subcommand("lift", "lift a decomposition of f restricted to a hyperplane");
        common(s, true);
        s->add_option("--decomp", decomp_file, "decomposition of the restriction (hyperplane coordinates)")->required();
        s->add_option("--hyperplane", hyperplane, "'w_1,...,w_n:a' for {x : <w, x> = a}")->required();
        handlers[s] = [&] { return cmd_lift(c, decomp_file, hyperplane); };
    }
    std::string mode = "greedy";
    std::optional<std::size_t> dim;
    int rounds = 8;
    {
        auto* s = app.add_subcommand("constant-subspace", "affine subspace on which f is constant");
        common(s, true);
        s->add_option("--mode", mode, "greedy or exhaustive")->check(CLI::IsMember({"greedy", "exhaustive"}))->capture_default_str();
        s->add_option("--dim", dim, "exhaustive: target dimension (default: largest)");
        s->add_option("--rounds", rounds, "greedy restarts")->capture_default_str();
        handlers[s] = [&] { return cmd_constant_subspace(c, mode, dim, rounds); };
    }
    std::vector<std::string> factor_polys;
    RegularityPolicy policy;
    {
        auto* s = app.add_subcommand("regularize", "refine a polynomial factor until it is epsilon-unbiased");
        s->add_option("--q", c.q_opt, "field size (prime, default 2)");
        s->add_option("--n", c.n, "number of variables");
        s->add_option("--poly", factor_polys, "factor member; repeat for each");
        s->add_option("--poly-file", c.poly_file, "one member per line, optional 'q=.. n=..' header");
        s->add_option("--seed", c.seed, "seed for the direction sequence")->capture_default_str();
        s->add_option("--threads", c.threads, "worker thread cap (0 = hardware)");
        s->add_option("--out", c.out, "write the report here instead of stdout");
        s->add_flag("--record-time", c.record_time, "include wall time in the manifest");
        s->add_option("--epsilon", policy.epsilon, "unbiasedness target")->capture_default_str();
        s->add_option("--max-rounds", policy.max_rounds)->capture_default_str();
        s->add_option("--directions", policy.directions, "derivatives per replacement")->capture_default_str();
        s->add_option("--retry-cap", policy.retry_cap)->capture_default_str();
        handlers[s] = [&] {
            policy.seed = c.seed;
            return cmd_regularize(c, factor_polys, policy);
        };
    }
    std::string set_file, set_points;
    int k = 2, trials = 64;
    std::size_t min_dim = 0;
    {
        auto* s = app.add_subcommand("sumset-subspace", "linear subspace inside kA - kA");
        common(s, false);
        s->add_option("--set-file", set_file, "point set file");
        s->add_option("--points", set_points, "inline set 'x;y;...' with points '1,0,1'");
        s->add_option("--k", k, "number of summands")->capture_default_str();
        s->add_option("--min-dim", min_dim, "smallest acceptable dimension")->capture_default_str();
        s->add_option("--trials", trials, "seeded growth attempts")->capture_default_str();
        handlers[s] = [&] { return cmd_sumset_subspace(c, set_file, set_points, k, min_dim, trials); };
    }
    std::string nc_file;
    std::vector<std::string> nc_points;
    {
        auto* s = app.add_subcommand("nc-eval", "evaluate a nonclassical polynomial");
        common(s, false);
        s->add_option("--nc-file", nc_file, "nonclassical polynomial text")->required();
        s->add_option("--point", nc_points, "point 'x_1,...,x_n'; repeatable")->required();
        handlers[s] = [&] { return cmd_nc_eval(c, nc_file, nc_points); };
    }
    int nc_d = 1;
    std::uint64_t nc_samples = 0;
    {
        auto* s = app.add_subcommand("nc-degree", "check that all (d+1)-fold derivatives vanish");
        common(s, false);
        s->add_option("--nc-file", nc_file, "nonclassical polynomial text")->required();
        s->add_option("--d", nc_d, "claimed degree")->required();
        s->add_option("--samples", nc_samples, "sample this many tuples instead of enumerating (0 = exhaustive)")
            ->capture_default_str();
        handlers[s] = [&] { return cmd_nc_degree(c, nc_file, nc_d, nc_samples); };
    }
    std::string kind = "random";
    int sample_d = 3, pairs = 1, g_degree = 2;
    {
        auto* s = app.add_subcommand("sample", "draw a seeded polynomial");
        common(s, false);
        s->add_option("--kind", kind, "random, homogeneous, s4, product or planted")
            ->check(CLI::IsMember({"random", "homogeneous", "s4", "product", "planted"}))
            ->capture_default_str();
        s->add_option("--d", sample_d, "degree (per factor for product)")->capture_default_str();
        s->add_option("--pairs", pairs, "planted: number of products")->capture_default_str();
        s->add_option("--g-degree", g_degree, "planted: degree of each g")->capture_default_str();
        handlers[s] = [&] { return cmd_sample(c, kind, sample_d, pairs, g_degree); };
    }
    ExperimentSpec exp;
    {
        auto* s = app.add_subcommand("experiment", "seeded sweep writing one CSV row per instance");
        common(s, false);
        s->add_option("--generator", exp.generator, "random, homogeneous, s4, product or planted")
            ->check(CLI::IsMember({"random", "homogeneous", "s4", "product", "planted"}))
            ->capture_default_str();
        s->add_option("--n-min", exp.n_min)->required();
        s->add_option("--n-max", exp.n_max)->required();
        s->add_option("--d", exp.d, "degree (per factor for product)")->capture_default_str();
        s->add_option("--instances", exp.instances, "instances per n")->capture_default_str();
        s->add_option("--samples", exp.samples, "Monte Carlo samples")->capture_default_str();
        s->add_option("--gowers-order", exp.gowers_order, "U^k order, 0 to skip")->capture_default_str();
        s->add_option("--gowers-method", exp.gowers_method, "auto or mc")
            ->check(CLI::IsMember({"auto", "mc"}))
            ->capture_default_str();
        s->add_option("--rounds", exp.rounds, "greedy constant-subspace restarts, 0 to skip")->capture_default_str();
        s->add_option("--pairs", exp.pairs, "planted: number of products")->capture_default_str();
        s->add_option("--g-degree", exp.g_degree, "planted: degree of each g")->capture_default_str();
        s->add_option("--c-max", exp.c_max, "planted: search budget")->capture_default_str();
        s->add_option("--time-budget", exp.time_budget, "seconds before the sweep stops, <= 0 for none")
            ->capture_default_str();
        s->add_option("--csv", exp.csv, "CSV output path")->required();
        handlers[s] = [&] { return cmd_experiment(c, exp); };
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        set_thread_count(c.threads);
        c.q = c.q_opt.value_or(2);
        const auto t0 = Clock::now();
        Outcome o = handlers.at(sub)();
        Json manifest{{"command", sub->get_name()},
                      {"params", manifest_params(sub)},
                      {"inputs", c.inputs},
                      {"seed", c.seed},
                      {"caps",
                       {{"table", kTableCap},
                        {"gowers", AnalysisCaps{}.gowers_cap},
                        {"survey", AnalysisCaps{}.survey_cap},
                        {"oracle_candidates", OracleCaps{}.max_candidates}}},
                      {"versions", {{"polystruct", report::kVersion}, {"schema", report::kSchemaVersion}}}};
        if (c.record_time) manifest["wall_time_s"] = std::chrono::duration<double>(Clock::now() - t0).count();
        const Json doc{{"schema_version", report::kSchemaVersion},
                       {"command", sub->get_name()},
                       {"manifest", manifest},
                       {"result", o.result}};
        write_report(c.out, doc.dump(2) + "\n", out);
        return o.code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitError;
}

} // namespace polystruct::cli
