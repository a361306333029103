// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace polystruct::cli {

inline constexpr int kExitOk = 0;
/// Usage, parse or infeasibility errors: nothing was computed.
inline constexpr int kExitError = 1;
/// The command ran and its verdict is negative.
inline constexpr int kExitFalse = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace polystruct::cli
