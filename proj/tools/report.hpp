// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

// JSON encodings of library results, shared by the CLI and its tests.

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "polystruct/analysis.hpp"
#include "polystruct/factors.hpp"
#include "polystruct/nonclassical.hpp"
#include "polystruct/structure.hpp"
#include "polystruct/subspace.hpp"

namespace polystruct::report {

using nlohmann::ordered_json;
using Json = ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

/// 64-bit FNV-1a digest as 16 hex digits.
std::string digest(std::string_view bytes);

Json point(const Point& p);
Json points(const std::vector<Point>& ps);
Json elems(const std::vector<Elem>& v);

Json to_json(const BiasReport& r);
Json to_json(const GowersEstimate& g);
Json to_json(const DerivativeSurvey& s);
Json to_json(const AffineMap& m);
Json to_json(const QuadNormalForm& nf);
Json to_json(const Decomposition& d);
Json to_json(const SearchResult& r);
Json to_json(const SubspaceCertificate& c);
Json to_json(const RegularizeResult& r);
Json to_json(const TorusValue& t);
Json to_json(const DegreeCheckResult& r);

/// Reads {budget, pairs: [{g, h}], q, remainder} (and n when present; else
/// `n` must be given). Throws ParseError on malformed input.
Decomposition decomposition_from_json(const Json& j, std::optional<std::size_t> n);

} // namespace polystruct::report
