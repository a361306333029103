// Copyright 2026 The polystruct Authors
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <charconv>

#include "polystruct/error.hpp"
#include "polystruct/poly.hpp"

namespace polystruct {

namespace {

class Parser {
public:
    Parser(std::string_view text, unsigned q, std::size_t n, ParseOptions options)
        : text_(text), field_(q), n_(n), options_(options) {}

    Poly run() {
        Poly::Terms terms;
        skip_space();
        if (at_end()) fail("empty expression");
        for (;;) {
            auto [mono, coeff] = term();
            auto [it, inserted] = terms.emplace(std::move(mono), coeff);
            if (!inserted) it->second = field_.add(it->second, coeff);
            skip_space();
            if (at_end()) break;
            if (peek() != '+') fail(std::string("expected '+' but found '") + peek() + "'");
            ++pos_;
            skip_space();
            if (at_end()) fail("expected a term after '+'");
        }
        return Poly(field_.q(), n_, std::move(terms));
    }

private:
    std::pair<Monomial, Elem> term() {
        std::vector<unsigned> exps(n_, 0);
        Elem coeff = 1;
        bool any = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            const std::size_t start = pos_;
            const std::uint64_t c = number("coefficient");
            if (c >= field_.q() && !options_.auto_reduce)
                fail_at(start, "coefficient " + std::to_string(c) + " is not below q = " + std::to_string(field_.q()));
            coeff = static_cast<Elem>(c % field_.q());
            any = true;
        }
        for (;;) {
            skip_space();
            std::size_t save = pos_;
            if (!at_end() && peek() == '*') {
                if (!any) fail("term cannot start with '*'");
                ++pos_;
                skip_space();
                if (at_end() || peek() != 'x') fail("expected a variable after '*'");
            }
            if (at_end() || peek() != 'x') {
                pos_ = save;
                break;
            }
            ++pos_;
            skip_space();
            const std::size_t idx_pos = pos_;
            if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a variable index after 'x'");
            const std::uint64_t index = number("variable index");
            if (index == 0 || index > n_)
                fail_at(idx_pos, "variable x" + std::to_string(index) + " outside x1..x" + std::to_string(n_));
            std::uint64_t power = 1;
            skip_space();
            if (!at_end() && peek() == '^') {
                ++pos_;
                skip_space();
                if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an exponent after '^'");
                power = number("exponent");
            }
            exps[index - 1] = reduce(exps[index - 1] + power);
            any = true;
        }
        if (!any) fail(at_end() ? "unexpected end of input" : std::string("unexpected character '") + peek() + "'");
        return {Monomial(std::vector<std::uint8_t>(exps.begin(), exps.end())), coeff};
    }

    unsigned reduce(std::uint64_t e) const {
        if (e == 0) return 0;
        return static_cast<unsigned>((e - 1) % (field_.q() - 1) + 1);
    }

    std::uint64_t number(const char* what) {
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        std::uint64_t value = 0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc()) fail_at(start, std::string(what) + " out of range");
        return value;
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }
    [[noreturn]] void fail_at(std::size_t offset, const std::string& what) const {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(what, line, column);
    }

    std::string_view text_;
    PrimeField field_;
    std::size_t n_;
    ParseOptions options_;
    std::size_t pos_ = 0;
};

} // namespace

Poly parse_poly(std::string_view text, unsigned q, std::size_t n, ParseOptions options) {
    return Parser(text, q, n, options).run();
}

std::pair<PolyHeader, std::string> split_header(std::string_view content) {
    PolyHeader header;
    std::size_t first = content.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos || content.substr(first, 2) != "q=") return {header, std::string(content)};
    const std::size_t eol = content.find('\n', first);
    const std::string_view line = content.substr(first, eol == std::string_view::npos ? std::string_view::npos : eol - first);
    std::size_t pos = 0;
    auto field = [&](std::string_view key) -> std::uint64_t {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (line.substr(pos, key.size()) != key) throw ParseError("malformed header, expected '" + std::string(key) + "'", 1, pos + 1);
        pos += key.size();
        std::uint64_t v = 0;
        auto res = std::from_chars(line.data() + pos, line.data() + line.size(), v);
        if (res.ec != std::errc()) throw ParseError("malformed header value", 1, pos + 1);
        pos = static_cast<std::size_t>(res.ptr - line.data());
        return v;
    };
    header.q = static_cast<unsigned>(field("q="));
    header.n = static_cast<std::size_t>(field("n="));
    // Keep the line break so parse errors report file line numbers.
    std::string rest(content.substr(0, first));
    if (eol != std::string_view::npos) rest += content.substr(eol);
    return {header, rest};
}

} // namespace polystruct
