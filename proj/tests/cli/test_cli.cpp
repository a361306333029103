// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "cli.hpp"
#include "polystruct/error.hpp"
#include "report.hpp"

using namespace polystruct;
using report::Json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<const char*> args) {
    args.insert(args.begin(), "polystruct");
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(args.size()), args.data(), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("digest is 64-bit FNV-1a") {
    CHECK(report::digest("") == "cbf29ce484222325");
    CHECK(report::digest("a") == "af63dc4c8601ec8c");
}

TEST_CASE("decomposition JSON round trip") {
    const Decomposition d{3, {{parse_poly("x1 + 1", 3, 2), parse_poly("2*x2^2", 3, 2)}}, parse_poly("x1*x2 + 2", 3, 2)};
    const Json j = report::to_json(d);
    CHECK(j["budget"] == 3);
    CHECK(j["q"] == 3);
    const auto back = report::decomposition_from_json(j, std::nullopt);
    CHECK(back.expand() == d.expand());
    CHECK(back.pairs[0].g == d.pairs[0].g);

    Json no_n = j;
    no_n.erase("n");
    CHECK_THROWS_AS(report::decomposition_from_json(no_n, std::nullopt), ParseError);
    CHECK(report::decomposition_from_json(no_n, 2).remainder == d.remainder);
    Json bad = j;
    bad["pairs"][0].erase("h");
    CHECK_THROWS_AS(report::decomposition_from_json(bad, std::nullopt), ParseError);
    bad = j;
    bad["remainder"] = "x1 +";
    CHECK_THROWS_AS(report::decomposition_from_json(bad, std::nullopt), ParseError);
}

TEST_CASE("certificate JSON keys") {
    const auto c = verify_constant(parse_poly("x1*x2", 2, 2), AffineSubspace(2, 2, Point{0, 0}, {Point{1, 0}}));
    const Json j = report::to_json(c);
    for (const char* key : {"offset", "basis", "dim", "claim", "value", "verified"}) CHECK(j.contains(key));
    CHECK(j["value"] == 0);
    CHECK(j["claim"] == "constant_value");
}

TEST_CASE("exit codes") {
    const auto ok = run({"bias", "--n", "2", "--poly", "x1*x2"});
    CHECK(ok.code == cli::kExitOk);
    CHECK(Json::parse(ok.out)["result"]["value"] == 0.5);

    const auto parse = run({"bias", "--n", "2", "--poly", "x1*+"});
    CHECK(parse.code == cli::kExitError);
    CHECK(parse.out.empty());
    CHECK(parse.err.find("line 1, column 4") != std::string::npos);

    CHECK(run({}).code == cli::kExitError);
    CHECK(run({"bias", "--bogus"}).code == cli::kExitError);
    CHECK(run({"bias", "--poly", "x1"}).code == cli::kExitError);
    CHECK(run({"bias", "--n", "2", "--poly", "x1", "--poly-file", "f"}).code == cli::kExitError);
    CHECK(run({"--help"}).code == cli::kExitOk);

    const auto none = run({"constant-subspace", "--mode", "exhaustive", "--n", "2", "--poly", "x1", "--dim", "2"});
    CHECK(none.code == cli::kExitFalse);
    CHECK(Json::parse(none.out)["result"]["certificate"].is_null());
}

TEST_CASE("manifest embeds parameters and omits wall time by default") {
    const auto a = run({"sample", "--n", "6", "--d", "3", "--seed", "9"});
    const auto b = run({"sample", "--n", "6", "--d", "3", "--seed", "9"});
    CHECK(a.out == b.out);
    const Json m = Json::parse(a.out)["manifest"];
    CHECK(m["seed"] == 9);
    CHECK(m["params"]["d"] == "3");
    CHECK(!m.contains("wall_time_s"));
    const auto timed = run({"sample", "--n", "6", "--record-time"});
    CHECK(Json::parse(timed.out)["manifest"].contains("wall_time_s"));
}
