#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "periodlab/error.hpp"
#include "periodlab/precision/ball.hpp"
#include "periodlab/precision/elementary.hpp"
#include "periodlab/series/bernoulli.hpp"

namespace periodlab {

namespace detail {

/// Binary splitting for S = sum_{k=a}^{b-1} (a_k / b_k) prod_{j<=k} p_j / q_j
/// with integer sequences. Returns P, Q, B, T with S = T / (B Q).
struct SplitSums {
    BigInt P, Q, B, T;
};

template <class Pf, class Qf, class Af, class Bf>
SplitSums binary_split(long a, long b, const Pf& p, const Qf& q, const Af& an, const Bf& bn) {
    if (b - a == 1) {
        SplitSums s{p(a), q(a), bn(a), 0};
        s.T = an(a) * s.P;
        return s;
    }
    long m = (a + b) / 2;
    SplitSums l = binary_split(a, m, p, q, an, bn);
    SplitSums r = binary_split(m, b, p, q, an, bn);
    SplitSums out;
    out.P = l.P * r.P;
    out.Q = l.Q * r.Q;
    out.B = l.B * r.B;
    out.T = r.B * r.Q * l.T + l.B * l.P * r.T;
    return out;
}

/// atan(1/q) = sum_k (-1)^k / ((2k+1) q^(2k+1)), first `terms` terms as an
/// exact quotient, plus the bound on the omitted alternating tail.
inline Ball arctan_inverse(long q, int digits) {
    double per_term = 2.0 * std::log10(static_cast<double>(q));
    long terms = static_cast<long>(std::ceil((digits + 8) / per_term)) + 1;
    BigInt qq = BigInt(q) * q;
    SplitSums s = binary_split(
        0, terms, [](long k) { return BigInt(k == 0 ? 1 : -1); },
        [&](long k) { return k == 0 ? BigInt(q) : qq; }, [](long) { return BigInt(1); },
        [](long k) { return BigInt(2 * k + 1); });
    Ball value = Ball::from_integer(s.T, digits) / Ball::from_integer(s.B * s.Q, digits);
    // first omitted term 1 / ((2K+1) q^(2K+1))
    BigInt tail_den = BigInt(2 * terms + 1) * ipow(BigInt(q), static_cast<unsigned long>(2 * terms + 1));
    value.add_error(BigRational(BigInt(1), tail_den));
    return value;
}

} // namespace detail

/// pi by Machin's formula 16 atan(1/5) - 4 atan(1/239), each arctangent
/// summed exactly by binary splitting.
inline Ball const_pi(int digits) {
    if (digits < 1) throw domain_error("precision must be positive");
    int wd = digits + 5;
    Ball pi = mul_int(detail::arctan_inverse(5, wd), 16) - mul_int(detail::arctan_inverse(239, wd), 4);
    return pi.with_digits(digits);
}

/// e = sum 1/n!, truncated where the tail bound 2/(N+1)! is negligible.
inline Ball const_e(int digits) {
    if (digits < 1) throw domain_error("precision must be positive");
    int wd = digits + 5;
    long n = 1;
    double log10_fact = 0;
    while (log10_fact < wd + 3) log10_fact += std::log10(static_cast<double>(++n));
    detail::SplitSums s = detail::binary_split(
        0, n + 1, [](long) { return BigInt(1); }, [](long k) { return BigInt(k == 0 ? 1 : k); },
        [](long) { return BigInt(1); }, [](long) { return BigInt(1); });
    Ball e = Ball::from_integer(s.T, wd) / Ball::from_integer(s.Q, wd);
    e.add_error(BigRational(BigInt(2), factorial(static_cast<unsigned long>(n + 1))));
    return e.with_digits(digits);
}

namespace detail {

/// gamma = H_n - log n - 1/(2n) + sum_{k=1}^{K} B_2k / (2k n^2k) + R with
/// |R| <= |B_{2K+2}| / ((2K+2) n^{2K+2}).
inline Ball gamma_euler_maclaurin(int digits, long n) {
    int wd = digits + 5;
    BigRational target(BigInt(1), ipow(10, static_cast<unsigned long>(digits + 5)));
    BigRational exact(0);
    for (long j = 1; j <= n; ++j) exact += BigRational(1, j);
    exact -= BigRational(1, 2 * n);
    BigRational npow(1);
    BigRational n2 = BigRational(n) * n;
    BigRational remainder;
    std::size_t k = 1;
    for (;; ++k) {
        if (2 * k + 2 > default_bernoulli_cache().max_index())
            throw resource_error("Euler-Maclaurin expansion for gamma needs more Bernoulli numbers");
        npow *= n2;
        exact += bernoulli(2 * k) / (BigRational(static_cast<long>(2 * k)) * npow);
        remainder = abs(bernoulli(2 * k + 2)) / (BigRational(static_cast<long>(2 * k + 2)) * npow * n2);
        if (remainder < target) break;
    }
    Ball g = Ball::from_rational(exact, wd) - log(Ball::from_int(n, wd));
    g.add_error(remainder);
    return g;
}

} // namespace detail

inline constexpr int default_gamma_max_digits = 100;

/// Euler-Mascheroni constant.
inline Ball const_gamma(int digits, int max_digits = default_gamma_max_digits) {
    if (digits < 1) throw domain_error("precision must be positive");
    if (digits > max_digits)
        throw resource_error("gamma constant requested at " + std::to_string(digits) + " digits; cap is " +
                             std::to_string(max_digits));
    return detail::gamma_euler_maclaurin(digits, digits + 10).with_digits(digits);
}

} // namespace periodlab
