#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/precision/ball.hpp"
#include "periodlab/series/bernoulli.hpp"

namespace periodlab {

namespace detail {

/// Smallest j such that the j-th Euler-Maclaurin correction for
/// sum_{n>=N} (n+a)^-s is below 10^-digits, estimated in floating point
/// from |B_2j|/(2j)! ~ 2/(2 pi)^2j. Returns 0 if none below the cap.
inline std::size_t em_terms_needed(long s, double x, int digits, std::size_t max_j) {
    const double two_pi = 6.283185307179586;
    for (std::size_t j = 1; j <= max_j; ++j) {
        double m = static_cast<double>(2 * j);
        double lg = std::log10(2.0) - m * std::log10(two_pi) +
                    (std::lgamma(static_cast<double>(s) + m - 1) - std::lgamma(static_cast<double>(s))) / std::log(10.0) -
                    (static_cast<double>(s) + m - 1) * std::log10(x);
        if (lg < -digits) return j;
    }
    return 0;
}

/// Rising factorial s (s+1) ... (s+m-1).
inline BigInt rising(long s, long m) {
    BigInt r(1);
    for (long i = 0; i < m; ++i) r *= s + i;
    return r;
}

} // namespace detail

/// sum_{n>=0} (n + a)^-s for integer s >= 2 and rational a > 0.
/// Terms n < N are summed directly; the rest by Euler-Maclaurin,
///   int_X^inf + f(X)/2 + sum_j B_2j/(2j)! (s)_{2j-1} X^{-s-2j+1},  X = N + a,
/// whose remainder is bounded by the first omitted correction because
/// x^-s is completely monotone. N = 0 picks the cutoff automatically.
inline Ball hurwitz_zeta(long s, const BigRational& a, int digits, long N = 0) {
    if (s < 2) throw divergent_series_error("sum of (n+a)^-s diverges for s = " + std::to_string(s));
    if (a <= 0) throw domain_error("shift a must be positive");
    if (digits < 1) throw domain_error("precision must be positive");
    const int wd = digits + 5;
    const std::size_t max_j = (default_bernoulli_cache().max_index() - 2) / 2;
    std::size_t K = 0;
    if (N <= 0) {
        N = std::max(8L, static_cast<long>(digits / 4));
        while ((K = detail::em_terms_needed(s, static_cast<double>(N) + a.get_d(), wd, max_j)) == 0) N *= 2;
    } else {
        K = detail::em_terms_needed(s, static_cast<double>(N) + a.get_d(), wd, max_j);
        if (K == 0) K = max_j;
    }
    // direct part: (n + p/q)^-s = q^s / (q n + p)^s
    const BigInt p = a.get_num(), q = a.get_den();
    const BigInt qs = ipow(q, static_cast<unsigned long>(s));
    Ball sum(wd);
    for (long n = 0; n < N; ++n) {
        BigInt base = q * n + p;
        sum += Ball::from_integer(qs, wd) / Ball::from_integer(ipow(base, static_cast<unsigned long>(s)), wd);
    }
    // tail, exact rational apart from the remainder
    const BigRational X = BigRational(N) + a;
    BigRational xpow(1); // X^{s-1}
    for (long i = 0; i < s - 1; ++i) xpow *= X;
    BigRational tail = 1 / (xpow * (s - 1)) + 1 / (2 * xpow * X);
    BigRational xp = xpow; // X^{s+2j-1} after the j-th update
    const BigRational X2 = X * X;
    BigRational remainder;
    for (std::size_t j = 1;; ++j) {
        xp *= X2;
        BigRational term = bernoulli(2 * j) * BigRational(detail::rising(s, static_cast<long>(2 * j - 1))) /
                           (BigRational(factorial(2 * j)) * xp);
        if (j > K) {
            remainder = abs(term);
            break;
        }
        tail += term;
        if (j == max_j) {
            // cap reached: bound the remainder by the next term instead
            BigRational next = bernoulli(2 * j + 2) *
                               BigRational(detail::rising(s, static_cast<long>(2 * j + 1))) /
                               (BigRational(factorial(2 * j + 2)) * xp * X2);
            remainder = abs(next);
            break;
        }
    }
    sum += Ball::from_rational(tail, wd);
    sum.add_error(remainder);
    return sum.with_digits(digits);
}

/// Riemann zeta at an integer k >= 2 by Borwein's alternating-series
/// algorithm with n terms,
///   zeta(k) = -1 / (d_n (1 - 2^{1-k})) sum_{j<n} (-1)^j (d_j - d_n) / (j+1)^k + g_n,
///   d_j = n sum_{i<=j} (n+i-1)! 4^i / ((n-i)! (2i)!),
/// where |g_n| <= 3 / ((3 + sqrt 8)^n Gamma(k) (1 - 2^{1-k})) <= 6 (29/5)^-n.
/// n = 0 picks the count from the bound.
inline Ball zeta_int(long k, int digits, long n = 0) {
    if (k <= 1) throw divergent_series_error("zeta(" + std::to_string(k) + ") diverges: harmonic-type series");
    if (digits < 1) throw domain_error("precision must be positive");
    const int wd = digits + 5;
    if (n <= 0) n = static_cast<long>(std::ceil((wd + 1) / std::log10(5.8))) + 1;
    std::vector<BigInt> d(static_cast<std::size_t>(n) + 1);
    // t = n (n+i-1)! 4^i / ((n-i)! (2i)!), an integer for every i
    BigInt acc(0);
    BigInt t = 1;
    for (long i = 0; i <= n; ++i) {
        if (i > 0) {
            // term_i / term_{i-1} = 4 (n+i-1)(n-i+1) / ((2i-1)(2i))
            t = t * 4 * (n + i - 1) * (n - i + 1);
            t /= (2 * i - 1) * (2 * i);
        }
        acc += t;
        d[static_cast<std::size_t>(i)] = acc;
    }
    Ball sum(wd);
    const BigInt& dn = d[static_cast<std::size_t>(n)];
    for (long j = 0; j < n; ++j) {
        Ball v = Ball::from_integer(d[static_cast<std::size_t>(j)] - dn, wd) /
                 Ball::from_integer(ipow(j + 1, static_cast<unsigned long>(k)), wd);
        sum = (j % 2 == 0) ? sum + v : sum - v;
    }
    // 1 - 2^{1-k} = (2^{k-1} - 1) / 2^{k-1}
    BigInt p2 = ipow(2, static_cast<unsigned long>(k - 1));
    Ball scale = Ball::from_integer(p2, wd) / (Ball::from_integer(dn, wd) * Ball::from_integer(p2 - 1, wd));
    Ball z = -(sum * scale);
    z.add_error(BigRational(BigInt(6) * ipow(5, static_cast<unsigned long>(n)), ipow(29, static_cast<unsigned long>(n))));
    return z.with_digits(digits);
}

/// r with zeta(k) = r pi^k for even k >= 2: (-1)^{k/2+1} B_k 2^{k-1} / k!.
inline BigRational zeta_even_rational(long k) {
    if (k < 2 || k % 2 != 0)
        throw unsupported_error("zeta(" + std::to_string(k) + ") has no rational multiple of a power of pi");
    BigRational r = bernoulli(static_cast<std::size_t>(k)) * BigRational(ipow(2, static_cast<unsigned long>(k - 1))) /
                    BigRational(factorial(static_cast<unsigned long>(k)));
    if ((k / 2) % 2 == 0) r = -r;
    return r;
}

} // namespace periodlab
