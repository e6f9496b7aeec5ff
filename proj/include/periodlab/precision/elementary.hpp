#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <utility>

#include "periodlab/error.hpp"
#include "periodlab/precision/ball.hpp"

namespace periodlab {

namespace detail {

inline constexpr int guard_digits = 10;

/// Upper bound of |x| over the ball, at radius precision.
inline mpfr_value magnitude_upper(const Ball& x) {
    mpfr_value out(radius_bits);
    abs_upper(out.get(), x.mid());
    mpfr_add(out.get(), out.get(), x.rad(), MPFR_RNDU);
    return out;
}

/// True when every point of the ball is below 2^e in magnitude.
inline bool below_2exp(const Ball& x, long e) {
    mpfr_value m = magnitude_upper(x);
    if (mpfr_zero_p(m.get())) return true;
    return mpfr_get_exp(m.get()) <= e;
}

/// 2 * atanh(z) = 2 * sum z^(2k+1)/(2k+1), for |z| <= 1/3. The truncation
/// error is below the last power computed, which is folded into the radius.
inline Ball two_atanh_series(const Ball& z, long target_exp2) {
    Ball z2 = sqr(z);
    Ball power = z;
    Ball sum = z;
    for (long k = 1;; ++k) {
        power = power * z2;
        sum += div_int(power, 2 * k + 1);
        if (below_2exp(power, target_exp2)) break;
    }
    sum.add_error(magnitude_upper(power).get());
    return mul_2exp(sum, 1);
}

inline Ball ln2_at(int wd) {
    Ball third = Ball::from_rational(BigRational(1, 3), wd);
    return two_atanh_series(third, -static_cast<long>(bits_for_digits(wd)) - 4);
}

inline Ball exp_point(mpfr_srcptr m, int digits) {
    if (mpfr_zero_p(m)) return Ball::from_int(1, digits);
    long e2 = mpfr_get_exp(m);
    long s = std::max(0L, e2 + 10);
    if (s > 80) throw resource_error("exp argument too large");
    int wd = digits + guard_digits + static_cast<int>(s * 0.30103) + 2;
    long target = -static_cast<long>(bits_for_digits(wd)) - 4;
    Ball t = mul_2exp(Ball::from_mpfr(m, wd), -s);
    Ball sum = Ball::from_int(1, wd);
    Ball term = Ball::from_int(1, wd);
    for (long k = 1;; ++k) {
        term = div_int(term * t, k);
        sum += term;
        if (below_2exp(term, target)) break;
    }
    // |t| < 2^-10, so the remaining terms sum to less than the last one.
    sum.add_error(magnitude_upper(term).get());
    for (long i = 0; i < s; ++i) sum = sqr(sum);
    return sum;
}

inline Ball log_point(mpfr_srcptr m, int digits) {
    int wd = digits + guard_digits;
    long target = -static_cast<long>(bits_for_digits(wd)) - 4;
    long e = mpfr_get_exp(m);
    Ball f = mul_2exp(Ball::from_mpfr(m, wd), -e); // f in [1/2, 1)
    if (f.to_double() < 0.70710678118654752) {
        f = mul_2exp(f, 1);
        --e;
    }
    if (mpfr_cmp_ui(f.mid(), 1) == 0 && f.is_exact()) return mul_int(ln2_at(wd), e);
    Ball one = Ball::from_int(1, wd);
    Ball z = (f - one) / (f + one);
    Ball result = two_atanh_series(z, target);
    if (e != 0) result += mul_int(ln2_at(wd), e);
    return result;
}

inline Ball atan_point(mpfr_srcptr m, int digits);

inline std::pair<Ball, Ball> cos_sin_point(mpfr_srcptr m, int digits);

} // namespace detail

inline Ball sqrt(const Ball& x) {
    if (x.certainly_negative()) throw domain_error("sqrt of negative ball " + to_string(x));
    detail::mpfr_value lo = x.lower();
    Ball r(x.digits());
    if (mpfr_sgn(lo.get()) > 0) {
        int t = mpfr_sqrt(r.mid_mut(), x.mid(), MPFR_RNDN);
        detail::add_rounding_ulp(r.rad_mut(), r.mid(), t);
        if (!x.is_exact()) {
            detail::mpfr_value s(detail::radius_bits), e(detail::radius_bits);
            mpfr_sqrt(s.get(), lo.get(), MPFR_RNDD);
            mpfr_mul_2ui(s.get(), s.get(), 1, MPFR_RNDD);
            mpfr_div(e.get(), x.rad(), s.get(), MPFR_RNDU);
            r.add_error(e.get());
        }
        return r;
    }
    // The ball touches zero: the root lies in [0, sqrt(hi)].
    detail::mpfr_value hi = x.upper();
    if (mpfr_zero_p(hi.get())) return r;
    detail::mpfr_value s(detail::radius_bits);
    mpfr_sqrt(s.get(), hi.get(), MPFR_RNDU);
    mpfr_div_2ui(s.get(), s.get(), 1, MPFR_RNDU);
    mpfr_set(r.mid_mut(), s.get(), MPFR_RNDN);
    r.add_error(s.get());
    return r;
}

inline Ball exp(const Ball& x) {
    Ball y = detail::exp_point(x.mid(), x.digits());
    if (!x.is_exact()) {
        // |exp(m + d) - exp(m)| <= exp(m) (exp(r) - 1)
        detail::mpfr_value k(detail::radius_bits);
        mpfr_expm1(k.get(), x.rad(), MPFR_RNDU);
        detail::mpfr_value mag = detail::magnitude_upper(y);
        mpfr_mul(k.get(), k.get(), mag.get(), MPFR_RNDU);
        y.add_error(k.get());
    }
    return y.with_digits(x.digits());
}

inline Ball log(const Ball& x) {
    if (!x.certainly_positive()) throw domain_error("log of a ball not certainly positive: " + to_string(x));
    if (mpfr_cmp_ui(x.mid(), 1) == 0 && x.is_exact()) return Ball(x.digits());
    Ball y = detail::log_point(x.mid(), x.digits());
    if (!x.is_exact()) {
        detail::mpfr_value lo = x.lower(), e(detail::radius_bits);
        mpfr_div(e.get(), x.rad(), lo.get(), MPFR_RNDU);
        y.add_error(e.get());
    }
    return y.with_digits(x.digits());
}

inline Ball atan(const Ball& x) {
    Ball y = detail::atan_point(x.mid(), x.digits());
    if (!x.is_exact()) y.add_error(x.rad()); // |atan'| <= 1
    return y.with_digits(x.digits());
}

/// cos and sin together; both are 1-Lipschitz.
inline std::pair<Ball, Ball> cos_sin(const Ball& x) {
    auto [c, s] = detail::cos_sin_point(x.mid(), x.digits());
    if (!x.is_exact()) {
        c.add_error(x.rad());
        s.add_error(x.rad());
    }
    return {c.with_digits(x.digits()), s.with_digits(x.digits())};
}

inline Ball cos(const Ball& x) { return cos_sin(x).first; }
inline Ball sin(const Ball& x) { return cos_sin(x).second; }

inline Ball pow_int(const Ball& x, long n) {
    if (n == 0) return Ball::from_int(1, x.digits());
    if (n < 0) return Ball::from_int(1, x.digits()) / pow_int(x, -n);
    Ball result = Ball::from_int(1, x.digits());
    Ball base = x;
    unsigned long e = static_cast<unsigned long>(n);
    while (true) {
        if (e & 1UL) result = result * base;
        e >>= 1;
        if (e == 0) break;
        base = sqr(base);
    }
    return result;
}

inline Ball ln2(int digits) {
    return detail::ln2_at(digits + detail::guard_digits).with_digits(digits);
}

namespace detail {

inline Ball atan_point(mpfr_srcptr m, int digits) {
    if (mpfr_zero_p(m)) return Ball(digits);
    int wd = digits + guard_digits;
    long target = -static_cast<long>(bits_for_digits(wd)) - 4;
    Ball y = Ball::from_mpfr(m, wd);
    Ball one = Ball::from_int(1, wd);
    long halvings = 0;
    // atan(y) = 2 atan(y / (1 + sqrt(1 + y^2)))
    while (!below_2exp(y, -8)) {
        y = y / (one + sqrt(one + sqr(y)));
        ++halvings;
    }
    Ball y2 = sqr(y);
    Ball power = y;
    Ball sum = y;
    for (long k = 1;; ++k) {
        power = power * y2;
        Ball term = div_int(power, 2 * k + 1);
        sum = (k % 2 == 1) ? sum - term : sum + term;
        if (below_2exp(power, target)) break;
    }
    // alternating series with decreasing terms: the tail is below the next term
    sum.add_error(magnitude_upper(power).get());
    return mul_2exp(sum, halvings);
}

inline std::pair<Ball, Ball> cos_sin_point(mpfr_srcptr m, int digits) {
    if (mpfr_zero_p(m)) return {Ball::from_int(1, digits), Ball(digits)};
    long e2 = mpfr_get_exp(m);
    if (e2 > 40) throw resource_error("cos/sin argument too large");
    long s = std::max(0L, e2 - 1); // |t| < 2 after halving
    int wd = digits + guard_digits + static_cast<int>(s * 0.61) + 2;
    long target = -static_cast<long>(bits_for_digits(wd)) - 4;
    Ball t = mul_2exp(Ball::from_mpfr(m, wd), -s);
    Ball c = Ball::from_int(1, wd);
    Ball sn = t;
    Ball term = t;
    for (long k = 2;; ++k) {
        term = div_int(term * t, k);
        switch (k % 4) {
        case 0: c += term; break;
        case 1: sn += term; break;
        case 2: c -= term; break;
        case 3: sn -= term; break;
        }
        if (k > 4 && below_2exp(term, target)) break;
    }
    // remaining terms shrink by at least half each step
    mpfr_value tail = magnitude_upper(term);
    mpfr_mul_2ui(tail.get(), tail.get(), 1, MPFR_RNDU);
    c.add_error(tail.get());
    sn.add_error(tail.get());
    Ball one = Ball::from_int(1, wd);
    for (long i = 0; i < s; ++i) {
        Ball c2 = mul_2exp(sqr(c), 1) - one;
        sn = mul_2exp(sn * c, 1);
        c = c2;
    }
    return {c, sn};
}

} // namespace detail

} // namespace periodlab
