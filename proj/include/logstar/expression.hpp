#pragma once

// LL(1) parser shared by the Coefficient, Poly and UeaElement text formats.
//
//   expr  := ['+' | '-'] term { ('+' | '-') term }
//   term  := power { '*' power }
//   power := atom [ '^' integer ]
//   atom  := integer [ '/' integer ] | identifier | '(' expr ')'
//
// Products are evaluated left to right in the order written, so the same
// grammar serves the non-commutative enveloping algebra.

#include "logstar/errors.hpp"
#include "logstar/rational.hpp"

#include <cctype>
#include <string>
#include <string_view>

namespace logstar::detail {

template <class Value, class Resolver>
class ExpressionParser {
public:
    ExpressionParser(std::string_view text, Resolver& resolver) : text_(text), resolver_(resolver) {}

    Value parse() {
        Value v = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    Value expr() {
        skip_space();
        bool negate = false;
        if (peek() == '+' || peek() == '-') {
            negate = peek() == '-';
            ++pos_;
        }
        Value acc = term();
        if (negate) acc = -acc;
        for (;;) {
            skip_space();
            const char c = peek();
            if (c != '+' && c != '-') break;
            ++pos_;
            Value rhs = term();
            if (c == '+')
                acc = acc + rhs;
            else
                acc = acc - rhs;
        }
        return acc;
    }

    Value term() {
        Value acc = power();
        for (;;) {
            skip_space();
            if (peek() != '*') break;
            ++pos_;
            acc = acc * power();
        }
        return acc;
    }

    Value power() {
        Value base = atom();
        skip_space();
        if (peek() != '^') return base;
        ++pos_;
        skip_space();
        const std::string digits = integer_literal();
        if (digits.size() > 3) fail("exponent too large");
        const int e = std::stoi(digits);
        Value acc = resolver_.constant(Rational(1));
        for (int k = 0; k < e; ++k) acc = acc * base;
        return acc;
    }

    Value atom() {
        skip_space();
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Value v = expr();
            skip_space();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = integer_literal();
            skip_space();
            if (peek() == '/') {
                ++pos_;
                skip_space();
                num += '/';
                num += integer_literal();
            }
            return resolver_.constant(parse_rational(num));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            return resolver_.identifier(std::string(text_.substr(start, pos_ - start)));
        }
        fail(pos_ < text_.size() ? "unexpected character" : "unexpected end of input");
    }

    std::string integer_literal() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return std::string(text_.substr(start, pos_ - start));
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Resolver& resolver_;
};

template <class Value, class Resolver>
Value parse_expression(std::string_view text, Resolver& resolver) {
    return ExpressionParser<Value, Resolver>(text, resolver).parse();
}

/// Index n of an identifier of the form "l<n>", or 0 when it is not one.
inline int lambda_identifier_index(std::string_view name) {
    if (name.size() < 2 || name[0] != 'l') return 0;
    int n = 0;
    for (std::size_t i = 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return 0;
        if (n > 1000) return 0;
        n = n * 10 + (name[i] - '0');
    }
    return n;
}

} // namespace logstar::detail
