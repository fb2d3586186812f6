#include "logstar/coefficient.hpp"

#include "logstar/errors.hpp"
#include "logstar/expression.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace logstar {

namespace {

std::atomic<int> g_weight_cap{8};

int generator_slot(int n) {
    if (n < 3 || n % 2 == 0) throw DomainError("lambda generators are indexed by odd n >= 3, got " + std::to_string(n));
    const int slot = (n - 3) / 2;
    if (slot >= LambdaMonomial::kMaxGenerators)
        throw DomainError("lambda generator l" + std::to_string(n) + " is beyond l17");
    return slot;
}

int slot_exponent(std::uint64_t bits, int slot) { return static_cast<int>((bits >> (8 * slot)) & 0xffU); }

} // namespace

// ---------------------------------------------------------------------------
// LambdaMonomial

LambdaMonomial LambdaMonomial::generator(int n) {
    return LambdaMonomial(std::uint64_t{1} << (8 * generator_slot(n)));
}

int LambdaMonomial::exponent(int n) const { return slot_exponent(bits_, generator_slot(n)); }

int LambdaMonomial::weight() const {
    int w = 0;
    for (int s = 0; s < kMaxGenerators; ++s) w += slot_exponent(bits_, s) * (2 * s + 3);
    return w;
}

LambdaMonomial LambdaMonomial::operator*(const LambdaMonomial& other) const {
    std::uint64_t out = 0;
    for (int s = 0; s < kMaxGenerators; ++s) {
        const int e = slot_exponent(bits_, s) + slot_exponent(other.bits_, s);
        if (e > 0xff) throw TruncationOverflow("lambda exponent overflow");
        out |= static_cast<std::uint64_t>(e) << (8 * s);
    }
    return LambdaMonomial(out);
}

int lambda_weight_cap() { return g_weight_cap.load(std::memory_order_relaxed); }

void set_lambda_weight_cap(int cap) {
    if (cap < 0 || cap > 64) throw DomainError("lambda weight cap must lie in [0, 64]");
    g_weight_cap.store(cap, std::memory_order_relaxed);
}

// ---------------------------------------------------------------------------
// Coefficient

Coefficient::Coefficient(const Rational& q) {
    if (q != 0) terms_.emplace_back(LambdaMonomial{}, q);
}

Coefficient::Coefficient(long n) {
    if (n != 0) terms_.emplace_back(LambdaMonomial{}, Rational(n));
}

Coefficient Coefficient::monomial(LambdaMonomial m, const Rational& q) {
    if (m.weight() > lambda_weight_cap())
        throw TruncationOverflow("lambda monomial of weight " + std::to_string(m.weight()) + " exceeds cap " +
                                 std::to_string(lambda_weight_cap()));
    Coefficient c;
    if (q != 0) c.terms_.emplace_back(m, q);
    return c;
}

bool Coefficient::is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }

Rational Coefficient::rational_part() const {
    if (!terms_.empty() && terms_[0].first.is_one()) return terms_[0].second;
    return Rational(0);
}

int Coefficient::weight() const {
    int w = 0;
    for (const auto& [m, q] : terms_) w = std::max(w, m.weight());
    return w;
}

void Coefficient::add_scaled(const Coefficient& other, int sign) {
    if (other.terms_.empty()) return;
    std::vector<Term> out;
    out.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
        if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
            out.push_back(std::move(*a++));
        } else if (a == terms_.end() || b->first < a->first) {
            out.emplace_back(b->first, sign > 0 ? b->second : Rational(-b->second));
            ++b;
        } else {
            Rational s = sign > 0 ? Rational(a->second + b->second) : Rational(a->second - b->second);
            if (s != 0) out.emplace_back(a->first, std::move(s));
            ++a;
            ++b;
        }
    }
    terms_ = std::move(out);
}

Coefficient& Coefficient::operator+=(const Coefficient& other) {
    add_scaled(other, +1);
    return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& other) {
    add_scaled(other, -1);
    return *this;
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    Coefficient out;
    if (a.terms_.empty() || b.terms_.empty()) return out;
    if (a.terms_.size() == 1 && b.terms_.size() == 1) {
        return Coefficient::monomial(a.terms_[0].first * b.terms_[0].first, a.terms_[0].second * b.terms_[0].second);
    }
    const int cap = lambda_weight_cap();
    std::vector<Coefficient::Term> raw;
    raw.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ma, qa] : a.terms_) {
        for (const auto& [mb, qb] : b.terms_) {
            const LambdaMonomial m = ma * mb;
            if (m.weight() > cap)
                throw TruncationOverflow("lambda monomial of weight " + std::to_string(m.weight()) + " exceeds cap " +
                                         std::to_string(cap));
            raw.emplace_back(m, qa * qb);
        }
    }
    std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& t : raw) {
        if (!out.terms_.empty() && out.terms_.back().first == t.first)
            out.terms_.back().second += t.second;
        else
            out.terms_.push_back(std::move(t));
    }
    std::erase_if(out.terms_, [](const auto& t) { return t.second == 0; });
    return out;
}

Coefficient& Coefficient::operator*=(const Coefficient& other) {
    *this = *this * other;
    return *this;
}

Coefficient& Coefficient::operator*=(const Rational& q) {
    if (q == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.second *= q;
    return *this;
}

Coefficient Coefficient::operator-() const {
    Coefficient c = *this;
    for (auto& t : c.terms_) t.second = -t.second;
    return c;
}

bool operator==(const Coefficient& a, const Coefficient& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (!(a.terms_[i].first == b.terms_[i].first) || a.terms_[i].second != b.terms_[i].second) return false;
    return true;
}

std::string Coefficient::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, q] : terms_) {
        if (!out.empty()) out += " + ";
        if (m.is_one()) {
            out += logstar::to_string(q);
            continue;
        }
        if (q < 0)
            out += "(" + logstar::to_string(q) + ")*";
        else if (q != 1)
            out += logstar::to_string(q) + "*";
        bool first = true;
        for (int s = 0; s < LambdaMonomial::kMaxGenerators; ++s) {
            const int n = 2 * s + 3;
            const int e = m.exponent(n);
            if (e == 0) continue;
            if (!first) out += "*";
            first = false;
            out += "l" + std::to_string(n);
            if (e > 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

namespace {

struct CoefficientResolver {
    Coefficient constant(const Rational& q) const { return Coefficient(q); }
    Coefficient identifier(const std::string& name) const {
        const int n = detail::lambda_identifier_index(name);
        if (n == 0) throw ParseError("unknown symbol \"" + name + "\" in coefficient");
        return lambda_generator(n);
    }
};

} // namespace

Coefficient Coefficient::parse(std::string_view text) {
    CoefficientResolver r;
    return detail::parse_expression<Coefficient>(text, r);
}

Coefficient coeff_arith(const Coefficient& a, const Coefficient& b, CoeffOp op) {
    switch (op) {
    case CoeffOp::Add: return a + b;
    case CoeffOp::Sub: return a - b;
    case CoeffOp::Mul: return a * b;
    }
    throw DomainError("unknown coefficient operation");
}

Coefficient lambda_generator(int n) { return Coefficient::monomial(LambdaMonomial::generator(n), Rational(1)); }

// ---------------------------------------------------------------------------
// Numerics

double zeta(int n) {
    if (n < 2) throw DomainError("zeta is evaluated at integers n >= 2");
    // Direct sum to N-1 plus the Euler-Maclaurin tail with five Bernoulli corrections.
    constexpr int N = 16;
    constexpr double kBernoulli[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66};
    const double s = n;
    double sum = 0.0;
    for (int k = N - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
    sum += std::pow(static_cast<double>(N), 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(static_cast<double>(N), -s);
    double rising = s;        // s (s+1) ... (s+2j-2)
    double fact = 2.0;        // (2j)!
    for (int j = 1; j <= 5; ++j) {
        sum += kBernoulli[j - 1] / fact * rising * std::pow(static_cast<double>(N), -s - 2.0 * j + 1.0);
        rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    return sum;
}

std::complex<double> lambda_value(int n) {
    generator_slot(n);
    const std::complex<double> two_pi_i(0.0, 2.0 * std::numbers::pi);
    return zeta(n) / (static_cast<double>(n) * std::pow(two_pi_i, n));
}

NumericValue evaluate_numeric(const Coefficient& c) {
    std::complex<double> total = 0.0;
    for (const auto& [m, q] : c.terms()) {
        std::complex<double> v = q.get_d();
        for (int s = 0; s < LambdaMonomial::kMaxGenerators; ++s) {
            const int e = m.exponent(2 * s + 3);
            if (e > 0) v *= std::pow(lambda_value(2 * s + 3), e);
        }
        total += v;
    }
    if (!std::isfinite(total.real()) || !std::isfinite(total.imag()))
        throw NumericOverflow("non-finite value evaluating " + c.to_string());
    return {total.real(), total.imag()};
}

std::string format_complex(std::complex<double> z, int digits) {
    auto part = [&](double v) {
        if (v == 0.0) v = 0.0; // drop the sign of -0
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        return std::string(buf);
    };
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    return part(z.real()) + (im < 0 ? "-" : "+") + part(std::abs(im)) + "i";
}

} // namespace logstar
