// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polystruct {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live over different fields or different variable counts.
class FieldMismatch : public Error {
public:
    using Error::Error;
};

/// Input violates an operation precondition (dimension, degree, range).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Exhaustive computation requested beyond its configured cap.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Text input could not be parsed. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace polystruct
