#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "periodlab/error.hpp"

namespace periodlab {

/// Exact rational in lowest terms with a positive denominator. gmpxx keeps
/// mpq_class canonical after every arithmetic operation; values built from
/// raw numerator/denominator pairs go through make_rational().
using BigRational = mpq_class;
using BigInt = mpz_class;

inline BigRational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw domain_error("rational with zero denominator");
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

inline BigInt ipow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigInt factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline std::string to_string(const BigRational& q) {
    return q.get_str(10);
}

/// Parses "num" or "num/den" with optional sign.
inline std::optional<BigRational> parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) return std::nullopt;
    auto slash = s.find('/');
    auto is_int = [](std::string_view t) {
        std::size_t i = 0;
        if (i < t.size() && (t[i] == '+' || t[i] == '-')) ++i;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!is_int(num) || !is_int(den) || den.front() == '-' || den.front() == '+') return std::nullopt;
    if (num.front() == '+') num.erase(0, 1);
    BigInt d(den, 10);
    if (d == 0) return std::nullopt;
    return make_rational(BigInt(num, 10), d);
}

/// Exact value of a signed decimal literal such as "-12.5e-3".
/// Grammar: [+-]? (digits [. digits?] | . digits) ([eE] [+-]? digits)?
inline BigRational parse_decimal(std::string_view text) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto fail = [&](const char* what) { throw parse_error(std::string("malformed decimal literal: ") + what, i); };
    bool negative = false;
    if (i < n && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
    std::string digits;
    long frac_len = 0;
    bool any = false;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
        digits.push_back(text[i++]);
        any = true;
    }
    if (i < n && text[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            digits.push_back(text[i++]);
            ++frac_len;
            any = true;
        }
    }
    if (!any) fail("expected digits");
    long exponent = 0;
    if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < n && (text[i] == '+' || text[i] == '-')) eneg = text[i++] == '-';
        std::string edigits;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) edigits.push_back(text[i++]);
        if (edigits.empty() || edigits.size() > 9) fail("bad exponent");
        exponent = std::stol(edigits);
        if (eneg) exponent = -exponent;
    }
    if (i != n) fail("trailing characters");
    BigInt mant(digits, 10);
    if (negative) mant = -mant;
    long shift = exponent - frac_len;
    if (shift >= 0) return BigRational(mant * ipow(10, static_cast<unsigned long>(shift)));
    return make_rational(mant, ipow(10, static_cast<unsigned long>(-shift)));
}

/// Exact decimal expansion of a rational whose denominator divides a power of
/// ten (every dyadic rational qualifies). Throws for other denominators.
inline std::string exact_decimal(const BigRational& q) {
    BigInt den = q.get_den();
    unsigned long twos = mpz_scan1(den.get_mpz_t(), 0);
    BigInt rest = den >> twos;
    unsigned long fives = 0;
    while (rest % 5 == 0) {
        rest /= 5;
        ++fives;
    }
    if (rest != 1) throw domain_error("rational has no finite decimal expansion");
    unsigned long k = std::max(twos, fives);
    BigInt scaled = q.get_num() * (ipow(10, k) / den);
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string s = scaled.get_str();
    if (k > 0) {
        if (s.size() <= k) s.insert(0, k - s.size() + 1, '0');
        s.insert(s.size() - k, ".");
    }
    return negative ? "-" + s : s;
}

} // namespace periodlab
