#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace logstar {

/// Arbitrary precision rational; always kept canonical (gcd 1, positive denominator).
using Rational = mpq_class;

/// Parses "p", "-p", "p/q" (optionally signed). Throws ParseError on malformed
/// input and DomainError on a zero denominator.
Rational parse_rational(std::string_view text);

/// "p" when the denominator is 1, "p/q" otherwise.
std::string to_string(const Rational& q);

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational factorial(unsigned n);

} // namespace logstar
