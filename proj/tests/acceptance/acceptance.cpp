// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner. Prints one line per criterion:
//   criterion N: PASS|FAIL|REPORT  <summary>  (<seconds> s)
// REPORT marks the report-only experiments, which have no threshold.
// Usage: acceptance [--only N[,M...]]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "oracles/oracles.hpp"
#include "polystruct/affine.hpp"
#include "polystruct/analysis.hpp"
#include "polystruct/error.hpp"
#include "polystruct/factors.hpp"
#include "polystruct/rng.hpp"
#include "polystruct/structure.hpp"
#include "polystruct/subspace.hpp"

using namespace polystruct;
namespace fs = std::filesystem;

namespace {

enum class Status { pass, fail, report };

struct Outcome {
    Status status = Status::pass;
    std::string summary;
    /// Extra lines printed under the verdict.
    std::vector<std::string> notes;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Point random_point(CounterRng& rng, unsigned q, std::size_t n) {
    Point p(n);
    for (auto& e : p) e = static_cast<Elem>(rng.below(q));
    return p;
}

// ---- 1 ------------------------------------------------------------------------

Outcome cocycle() {
    std::uint64_t cases = 0, failures = 0;
    for (const auto& [q, n, count] : {std::tuple{2U, std::size_t{6}, 1000}, std::tuple{3U, std::size_t{4}, 300}}) {
        CounterRng rng(101, q);
        for (int t = 0; t < count; ++t) {
            const Poly f = random_poly(q, n, 1 + static_cast<int>(rng.below(q == 2 ? 5 : 6)), rng.next());
            const Point a = random_point(rng, q, n);
            const Point b = random_point(rng, q, n);
            const Poly fab = derivative(f, oracle::add(a, b, q));
            const Poly db = derivative(f, b);
            const Poly fa = derivative(f, a);
            const auto& dab = fab.table();
            const auto& da = fa.table();
            const PrimeField field(q);
            for (std::uint64_t i = 0; i < dab.size(); ++i) {
                const Point x = index_to_point(i, q, n);
                if (dab[i] != field.add(db.evaluate(oracle::add(x, a, q)), da[i])) {
                    ++failures;
                    break;
                }
            }
            ++cases;
        }
    }
    return {failures ? Status::fail : Status::pass,
            fmt("%llu triples (1000 over F_2^6, 300 over F_3^4), %llu with a mismatch", (unsigned long long)cases,
                (unsigned long long)failures)};
}

// ---- 2, 3 -----------------------------------------------------------------------

std::vector<Poly> derivative_corpus() {
    std::vector<Poly> out;
    CounterRng rng(202);
    for (int t = 0; t < 200; ++t) {
        const int d = 2 + t % 4;
        // Mix dense random polynomials with sparse products so some have large bias.
        Poly f = t % 2 ? random_poly(2, 8, d, rng.next()) : Poly(2, 8);
        if (t % 2 == 0) {
            Poly m = Poly::constant(2, 8, 1);
            for (int k = 0; k < d; ++k) m = m * Poly::variable(2, 8, rng.below(8));
            f = m + random_poly(2, 8, 1, rng.next());
        }
        out.push_back(std::move(f));
    }
    return out;
}

Outcome derivative_mean() {
    int violations = 0;
    double worst = 1e9;
    SurveyOptions opt;
    opt.allow_sampling = false;
    opt.keep_set = false;
    for (const auto& f : derivative_corpus()) {
        const double b = bias(f).value;
        const auto s = derivative_survey(f, 0.0, opt);
        worst = std::min(worst, s.mean - b * b);
        if (s.mean < b * b - 1e-12) ++violations;
    }
    const auto eq = derivative_survey(parse_poly("x1*x2", 2, 2), 0.0, opt);
    const bool equality = eq.mean == 0.25 && eq.bias_f == 0.5;
    return {violations == 0 && equality ? Status::pass : Status::fail,
            fmt("200 polynomials over F_2^8: %d violations of mean >= bias^2 - 1e-12 (smallest slack %.3g); "
                "x1*x2 over F_2^2: mean = %.17g, bias^2 = %.17g",
                violations, worst, eq.mean, eq.bias_f * eq.bias_f)};
}

Outcome markov_density() {
    int violations = 0;
    double worst = 1e9;
    SurveyOptions opt;
    opt.allow_sampling = false;
    opt.keep_set = false;
    for (const auto& f : derivative_corpus()) {
        const double b = bias(f).value;
        const double t = b * b / 2;
        const auto s = derivative_survey(f, t, opt);
        worst = std::min(worst, s.density - t);
        if (s.density < t - 1e-12) ++violations;
    }
    return {violations ? Status::fail : Status::pass,
            fmt("200 polynomials over F_2^8: %d violations of density >= bias^2/2 - 1e-12 (smallest slack %.3g)",
                violations, worst)};
}

// ---- 4 ------------------------------------------------------------------------

Outcome gowers_sanity() {
    CounterRng rng(404);
    int bad_phase = 0, bad_mono = 0, bad_direct = 0;
    double worst_phase = 0;
    for (int t = 0; t < 100; ++t) {
        const Poly p = random_poly(2, 5, 1 + t % 3, rng.next());
        const int d = std::max(p.degree(), 1);
        const double u = gowers_norm(p, d + 1).value;
        worst_phase = std::max(worst_phase, std::abs(u - 1.0));
        if (std::abs(u - 1.0) > 1e-9) ++bad_phase;
        double prev = gowers_norm(p, 1).value;
        for (int k = 2; k <= 4; ++k) {
            const double next = gowers_norm(p, k).value;
            if (prev > next + 1e-9) ++bad_mono;
            prev = next;
        }
    }
    double worst_gap = -1;
    for (int t = 0; t < 100; ++t) {
        const Poly f = random_poly(2, 5, 2 + t % 4, rng.next());
        const Poly p = random_poly(2, 5, t % 4, rng.next());
        const int k = std::max(p.degree(), 0) + 1;
        const double corr = correlation(f, p);
        const double u = gowers_norm(f, k).value;
        worst_gap = std::max(worst_gap, corr - u);
        if (corr > u + 1e-9) ++bad_direct;
    }
    return {bad_phase + bad_mono + bad_direct ? Status::fail : Status::pass,
            fmt("100 phases: max |U^{deg+1} - 1| = %.2g (%d over 1e-9), %d monotonicity breaks over U^1..U^4; "
                "100 pairs: %d with |corr| > U^{deg P+1} + 1e-9 (max corr - U = %.3g)",
                worst_phase, bad_phase, bad_mono, bad_direct, worst_gap)};
}

// ---- 5 ------------------------------------------------------------------------

Outcome quadratics() {
    int bad_recompose = 0, bad_bias = 0, bad_h = 0, total = 0;
    double worst = 0;
    for (unsigned q : {2U, 3U, 5U}) {
        CounterRng rng(505, q);
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = q == 2 ? 2 + t % 7 : 1 + t % 5;
            const Poly f = random_poly(q, n, 2, rng.next());
            const auto nf = quad_normal_form(f);
            if (recompose(nf).table() != f.table()) ++bad_recompose;
            const double exact = bias(f).value;
            const double closed = quad_bias_closed_form(nf);
            worst = std::max(worst, std::abs(exact - closed));
            if (std::abs(exact - closed) > 1e-9) ++bad_bias;
            if (q == 2 && exact > 0 && static_cast<double>(nf.rank()) > 2 * std::log2(1 / exact) + 1e-9) ++bad_h;
            ++total;
        }
    }
    return {bad_recompose + bad_bias + bad_h ? Status::fail : Status::pass,
            fmt("%d quadratics over F_2, F_3, F_5: %d recomposition mismatches, %d closed-form errors over 1e-9 "
                "(max %.2g), %d with h > 2 log2(1/bias)",
                total, bad_recompose, bad_bias, worst, bad_h)};
}

// ---- 6 ------------------------------------------------------------------------

Outcome strong_rank_pipeline() {
    int found = 0, verified = 0;
    std::map<std::size_t, int> sizes;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto p = planted_instance(2, 8, 5, 1, 2, 6000 + seed);
        SearchOptions opt;
        opt.c_max = 4;
        const auto r = decompose_search(p.f, opt);
        if (!r.decomposition) continue;
        ++found;
        ++sizes[r.decomposition->size()];
        verified += verify_decomposition(p.f, *r.decomposition).ok;
    }
    std::string hist;
    for (auto [s, c] : sizes) hist += fmt(" %zu pairs: %d;", s, c);
    return {found == 50 && verified == 50 ? Status::pass : Status::fail,
            fmt("50 planted G*H + Q over F_2^8: %d decompositions returned, %d verify;%s", found, verified,
                hist.c_str())};
}

// ---- 7 ------------------------------------------------------------------------

Outcome lifting() {
    CounterRng rng(707);
    int ok = 0, oracle_used = 0, search_used = 0, too_many = 0;
    std::string first_failure;
    for (int t = 0; t < 100; ++t) {
        const int d = 3 + t % 2;
        const Poly f = random_poly(2, 6, d, rng.next());
        const auto w = AffineSubspace::coordinate_hyperplane(2, 6, rng.below(6), static_cast<Elem>(rng.below(2)));
        const Poly fw = restrict_to(f, w);
        std::optional<Decomposition> dec;
        const auto o = strong_rank_oracle(fw, 2, d);
        if (o.witness) {
            dec = o.witness;
            ++oracle_used;
        } else {
            SearchOptions opt;
            opt.budget = d;
            opt.time_budget = 0;
            dec = decompose_search(fw, opt).decomposition;
            ++search_used;
        }
        if (!dec) {
            if (first_failure.empty()) first_failure = fmt("instance %d: no decomposition of f|_W", t);
            continue;
        }
        const auto lifted = lift_decomposition(f, w, *dec);
        const bool v = verify_decomposition(f, lifted).ok;
        const bool small = lifted.size() <= dec->size() + 1;
        if (!small) ++too_many;
        if (v && small) ++ok;
        else if (first_failure.empty()) first_failure = fmt("instance %d fails", t);
    }
    return {ok == 100 ? Status::pass : Status::fail,
            fmt("100 (f, coordinate hyperplane) over F_2^6: %d lifts verify with <= 1 extra pair "
                "(restriction decomposed by oracle %d times, by search %d times)%s%s",
                ok, oracle_used, search_used, first_failure.empty() ? "" : "; ", first_failure.c_str())};
}

// ---- 8 ------------------------------------------------------------------------

Outcome rank_chain() {
    // Every polynomial of exact degree 3 over F_2^3: x1*x2*x3 plus any of the
    // 2^7 polynomials of degree <= 2.
    const auto lower = monomials_up_to(2, 3, 2);
    int compared = 0, violations = 0, crank_exceeded = 0;
    std::map<std::pair<int, int>, int> pairs;
    std::string example;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << lower.size()); ++mask) {
        Poly::Terms terms;
        terms.emplace(Monomial(std::vector<std::uint8_t>{1, 1, 1}), 1);
        for (std::size_t i = 0; i < lower.size(); ++i)
            if ((mask >> i) & 1) terms.emplace(lower[i], 1);
        const Poly f(2, 3, std::move(terms));
        const auto cr = crank_oracle(f, 3, 3);
        const auto sr = strong_rank_oracle(f, 3, 3);
        if (!cr.rank) ++crank_exceeded;
        if (!cr.rank || !sr.rank) continue;
        ++compared;
        ++pairs[{*cr.rank, *sr.rank}];
        if (*cr.rank > *sr.rank) {
            ++violations;
            if (example.empty())
                example = fmt("e.g. f = %s has crank %d, strong rank %d", f.to_string().c_str(), *cr.rank, *sr.rank);
        }
    }
    std::string hist;
    for (auto [k, c] : pairs) hist += fmt(" (crank %d, strong rank %d): %d;", k.first, k.second, c);
    Outcome o{violations ? Status::fail : Status::pass,
              fmt("128 cubics over F_2^3 (r_max 3): %d compared, %d with crank > strong rank;%s", compared,
                  violations, hist.c_str())};
    if (crank_exceeded) o.notes.push_back(fmt("crank exceeded r_max = 3 for %d polynomials", crank_exceeded));
    if (violations) {
        o.notes.push_back(example);
        o.notes.push_back(
            "crank <= strong rank does not hold: a function of one polynomial of degree <= 2 has degree <= 2, "
            "so every exact cubic has crank >= 2, while x1*(x2*x3 + ...) + Q has strong rank 1. Taking the g_i, "
            "the h_i and the remainder as the Q_i gives crank <= 2 * strong rank + 1 instead.");
        int twice = 0, twice_plus_one = 0;
        for (auto [k, c] : pairs) {
            if (k.first > 2 * k.second) twice += c;
            if (k.first > 2 * k.second + 1) twice_plus_one += c;
        }
        o.notes.push_back(fmt("information: crank > 2 * strong rank for %d of %d, crank > 2 * strong rank + 1 for "
                              "%d of %d",
                              twice, compared, twice_plus_one, compared));
    }
    return o;
}

// ---- 9 ------------------------------------------------------------------------

Outcome regularization() {
    const std::size_t n = 8;
    const PolynomialFactor b(2, n, {parse_poly("x1*x2", 2, n), parse_poly("x1*x2*x3", 2, n)});
    RegularityPolicy policy;
    policy.epsilon = 0.3;
    policy.max_rounds = 20;
    const auto r = regularize(b, policy);

    // Independent lambda-scan with direct evaluation.
    const auto& ps = r.factor.polys();
    const auto lambdas = oracle::all_points(2, ps.size());
    const auto pts = oracle::all_points(2, n);
    double worst = 0;
    for (const auto& l : lambdas) {
        if (std::all_of(l.begin(), l.end(), [](Elem e) { return e == 0; })) continue;
        long long sum = 0;
        for (const auto& x : pts) {
            unsigned v = 0;
            for (std::size_t i = 0; i < ps.size(); ++i)
                if (l[i]) v ^= oracle::eval(ps[i], x);
            sum += v ? -1 : 1;
        }
        worst = std::max(worst, std::abs(static_cast<double>(sum)) / static_cast<double>(pts.size()));
    }
    const bool unbiased = worst < policy.epsilon;

    // Semantic refinement: the final label determines the original label.
    std::map<std::vector<Elem>, std::vector<Elem>> seen;
    bool refines_ok = true;
    for (const auto& x : pts) {
        std::vector<Elem> fine, coarse;
        for (const auto& p : ps) fine.push_back(oracle::eval(p, x));
        for (const auto& p : b.polys()) coarse.push_back(oracle::eval(p, x));
        auto [it, inserted] = seen.emplace(fine, coarse);
        if (!inserted && it->second != coarse) refines_ok = false;
    }
    const bool ok = r.trace.size() <= 20 && !r.not_regular && r.certificate.unbiased && unbiased &&
                    r.certificate.semantic_refinement && refines_ok;
    std::string factor;
    for (const auto& p : ps) factor += (factor.empty() ? "" : ", ") + p.to_string();
    return {ok ? Status::pass : Status::fail,
            fmt("{x1*x2, x1*x2*x3} over F_2^8, eps 0.3: %zu rounds, final {%s}; certificate unbiased=%d, "
                "independent scan max bias %.4g over %zu combinations; semantic refinement certified=%d, "
                "independent=%d",
                r.trace.size(), factor.c_str(), r.certificate.unbiased, worst, lambdas.size() - 1,
                r.certificate.semantic_refinement, refines_ok)};
}

// ---- 10 -----------------------------------------------------------------------

Outcome bogolyubov() {
    std::vector<Point> units;
    for (std::size_t i = 0; i < 4; ++i) {
        Point e(4, 0);
        e[i] = 1;
        units.push_back(e);
    }
    const auto c = subspace_in_sumset(PointSet::from_points(2, 4, units), 2, 3);
    if (!c) return {Status::fail, "no subspace of dimension >= 3 found in 2A - 2A"};
    const auto ref = oracle::sumset(units, 2, 2, 4);
    int outside = 0;
    const auto span = oracle::span_of(c->subspace.basis(), 2, 4);
    for (const auto& x : span)
        if (!std::binary_search(ref.begin(), ref.end(), x)) ++outside;
    const bool ok = c->verified && c->subspace.dim() == 3 && outside == 0 && span.size() == 8;
    return {ok ? Status::pass : Status::fail,
            fmt("A = unit vectors of F_2^4: |2A-2A| = %zu, certified subspace %s of dim %zu (codim %zu), "
                "%zu points checked by tuple enumeration, %d outside",
                ref.size(), c->subspace.to_string().c_str(), c->subspace.dim(), 4 - c->subspace.dim(), span.size(),
                outside)};
}

// ---- 11 -----------------------------------------------------------------------

bool reverify(const Poly& f, const SubspaceCertificate& c) {
    if (!c.verified || !c.value) return false;
    const auto span = oracle::span_of(c.subspace.basis(), f.q(), f.n());
    if (span.size() != static_cast<std::size_t>(std::pow(f.q(), c.subspace.dim()))) return false;
    for (const auto& s : span)
        if (oracle::eval(f, oracle::add(c.subspace.offset(), s, f.q())) != *c.value) return false;
    return true;
}

Outcome constant_subspaces() {
    // (a) all 2^16 polynomials of degree <= 4 over F_2^4 (every function; degree <= 5 adds nothing).
    const auto monos = monomials_up_to(2, 4, 4);
    int bad_a = 0, greedy_below = 0;
    std::map<std::size_t, int> hist;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << monos.size()); ++mask) {
        Poly::Terms terms;
        for (std::size_t i = 0; i < monos.size(); ++i)
            if ((mask >> i) & 1) terms.emplace(monos[i], 1);
        const Poly f(2, 4, std::move(terms));
        const auto ex = constant_subspace_max(f);
        const auto gr = constant_subspace_greedy(f, 2, mask);
        ++hist[ex.subspace.dim()];
        if (gr.subspace.dim() < ex.subspace.dim()) ++greedy_below;
        if (!reverify(f, ex) || !reverify(f, gr) || gr.subspace.dim() > ex.subspace.dim()) ++bad_a;
    }
    std::string h;
    for (auto [d, c] : hist) h += fmt(" dim %zu: %d;", d, c);

    // (b) planted quintics over F_2^10.
    int bad_b = 0;
    std::size_t min_dim = 99;
    double min_bias = 1, mean_dim = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        // A random degree-4 remainder usually destroys the bias, so only its
        // constant term is kept.
        const auto p = planted_instance(2, 10, 5, 1 + static_cast<int>(seed % 2), 2, 1100 + seed);
        const Poly f = p.f - p.truth.remainder + p.truth.remainder.truncated(0);
        const auto c = constant_subspace_greedy(f, 8, seed);
        min_bias = std::min(min_bias, bias(f).value);
        min_dim = std::min(min_dim, c.subspace.dim());
        mean_dim += static_cast<double>(c.subspace.dim()) / 50;
        if (!reverify(f, c) || c.subspace.dim() < 2) ++bad_b;
    }
    return {bad_a + bad_b ? Status::fail : Status::pass,
            fmt("(a) 65536 functions on F_2^4: %d invalid or greedy > exhaustive, greedy below optimum %d times; "
                "optimum histogram%s (b) 50 planted quintics over F_2^10 (min bias %.4g): %d below the harness "
                "threshold 2, min dim %zu, mean %.2f",
                bad_a, greedy_below, h.c_str(), min_bias, bad_b, min_dim, mean_dim)};
}

// ---- 12 -----------------------------------------------------------------------

Outcome report_only() {
    Outcome o{Status::report, "S_4 U^4 Monte Carlo (10^6 samples) and products of random cubics over F_2^12", {}};
    for (std::size_t n = 8; n <= 14; ++n) {
        const auto g = gowers_mc(s4_generator(n), 4, 1000000, 1200 + n);
        o.notes.push_back(fmt("S_4, n = %2zu: ||e(S_4)||_U4 = %.4f, ||.||^16 = %.4f +- %.4f (reference value 0.125)", n,
                              g.value, g.raw_mean, g.halfwidth));
    }
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CounterRng rng(1212, seed);
        const Poly f = random_poly(2, 12, 3, rng.next()) * random_poly(2, 12, 3, rng.next());
        const auto mc = bias_mc(f, 1000000, seed);
        const auto c = constant_subspace_greedy(f, 8, seed);
        o.notes.push_back(fmt("cubic x cubic #%llu: degree %d, MC bias %.4f +- %.4f (< 0.1: %s), exact %.4f, greedy "
                              "constant subspace dim %zu (verified %d)",
                              (unsigned long long)seed, f.degree(), mc.value, mc.halfwidth,
                              mc.value < 0.1 ? "yes" : "no", bias(f).value, c.subspace.dim(), c.verified));
    }
    o.notes.push_back("over F_2 a product G*H is 1 only where G = H = 1, so its bias is near 1/2 rather than near 0");
    return o;
}

// ---- 13 -----------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli_determinism() {
    const fs::path dir = POLYSTRUCT_CLI_CASES_DIR;
    const fs::path work = fs::temp_directory_path() / fmt("polystruct-acceptance-%d", static_cast<int>(::getpid()));
    fs::remove_all(work);
    fs::create_directories(work);
    for (const auto& e : fs::directory_iterator(dir / "fixtures")) fs::copy_file(e.path(), work / e.path().filename());

    int cases = 0, nondeterministic = 0, golden_diffs = 0, bad_exit = 0;
    std::vector<std::string> notes;
    std::ifstream list(dir / "cases.txt");
    for (std::string line; std::getline(list, line);) {
        if (line.empty() || line[0] == '#') continue;
        const auto bar1 = line.find('|'), bar2 = line.find('|', bar1 + 1);
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(' '));
            s.erase(s.find_last_not_of(' ') + 1);
            return s;
        };
        const std::string name = trim(line.substr(0, bar1));
        const int code = std::stoi(trim(line.substr(bar1 + 1, bar2 - bar1 - 1)));
        const std::string args = trim(line.substr(bar2 + 1));
        std::string outputs[2], csvs[2];
        for (int run = 0; run < 2; ++run) {
            const std::string cmd = "cd '" + work.string() + "' && '" + POLYSTRUCT_CLI_PATH + "' " + args +
                                    " > out.json 2> err.txt";
            const int status = std::system(cmd.c_str());
            if (!WIFEXITED(status) || WEXITSTATUS(status) != code) ++bad_exit;
            outputs[run] = slurp(work / "out.json");
            if (fs::exists(work / "sweep.csv")) {
                csvs[run] = slurp(work / "sweep.csv");
                fs::remove(work / "sweep.csv");
            }
        }
        ++cases;
        if (outputs[0] != outputs[1] || csvs[0] != csvs[1]) {
            ++nondeterministic;
            notes.push_back(name + ": runs differ");
        }
        if (outputs[0] != slurp(dir / "golden" / (name + ".json")) ||
            (!csvs[0].empty() && csvs[0] != slurp(dir / "golden" / (name + ".csv")))) {
            ++golden_diffs;
            notes.push_back(name + ": golden diff");
        }
    }
    fs::remove_all(work);
    return {cases > 0 && nondeterministic + golden_diffs + bad_exit == 0 ? Status::pass : Status::fail,
            fmt("%d CLI cases covering every subcommand: %d nondeterministic, %d golden diffs, %d unexpected exit "
                "codes",
                cases, nondeterministic, golden_diffs, bad_exit),
            notes};
}

struct Criterion {
    int id;
    double limit_s;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, 30, cocycle},           {2, 120, derivative_mean},     {3, 120, markov_density},
        {4, 120, gowers_sanity},    {5, 180, quadratics},          {6, 600, strong_rank_pipeline},
        {7, 120, lifting},          {8, 300, rank_chain},          {9, 300, regularization},
        {10, 10, bogolyubov},       {11, 600, constant_subspaces}, {12, 600, report_only},
        {13, 600, cli_determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            for (std::string t; std::getline(ss, t, ',');) only.insert(std::stoi(t));
        } else {
            std::cerr << "usage: acceptance [--only N[,M...]]\n";
            return 2;
        }
    }
    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {Status::fail, std::string("threw: ") + e.what(), {}};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_s && o.status == Status::pass) {
            o.status = Status::fail;
            o.summary += fmt("; runtime limit %.0f s exceeded", c.limit_s);
        }
        const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "REPORT";
        std::cout << "criterion " << c.id << ": " << tag << "  " << o.summary << "  (" << fmt("%.1f", secs) << " s)\n";
        for (const auto& note : o.notes) std::cout << "    " << note << "\n";
        std::cout.flush();
        failed += o.status == Status::fail;
    }
    return failed ? 1 : 0;
}
