#include "logstar/rational.hpp"

#include "logstar/errors.hpp"

#include <cctype>

namespace logstar {

namespace {

bool is_signed_integer(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

std::string strip_plus(std::string_view s) {
    return std::string(!s.empty() && s[0] == '+' ? s.substr(1) : s);
}

} // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    if (!is_signed_integer(num)) throw ParseError("malformed rational \"" + std::string(text) + "\"");
    if (slash == std::string_view::npos) return Rational(mpz_class(strip_plus(num)));
    const std::string_view den = text.substr(slash + 1);
    if (!is_signed_integer(den) || den[0] == '-' || den[0] == '+')
        throw ParseError("malformed rational \"" + std::string(text) + "\"");
    mpz_class d(std::string{den});
    if (d == 0) throw DomainError("zero denominator in \"" + std::string(text) + "\"");
    Rational q(mpz_class(strip_plus(num)), d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

} // namespace logstar
