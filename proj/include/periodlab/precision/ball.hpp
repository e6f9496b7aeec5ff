#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "periodlab/error.hpp"
#include "periodlab/precision/rational.hpp"

namespace periodlab {

namespace detail {

/// Radii carry a short mantissa; they are always rounded towards +infinity.
inline constexpr mpfr_prec_t radius_bits = 64;

inline mpfr_prec_t bits_for_digits(int digits) {
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

/// Owning RAII handle over an mpfr_t.
class mpfr_value {
  public:
    explicit mpfr_value(mpfr_prec_t bits) {
        mpfr_init2(v_, bits);
        mpfr_set_zero(v_, 1);
    }
    mpfr_value(const mpfr_value& other) {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    mpfr_value(mpfr_value&& other) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, other.v_);
    }
    mpfr_value& operator=(const mpfr_value& other) {
        if (this != &other) {
            mpfr_set_prec(v_, mpfr_get_prec(other.v_));
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    mpfr_value& operator=(mpfr_value&& other) noexcept {
        mpfr_swap(v_, other.v_);
        return *this;
    }
    ~mpfr_value() { mpfr_clear(v_); }

    mpfr_ptr get() noexcept { return v_; }
    mpfr_srcptr get() const noexcept { return v_; }

  private:
    mpfr_t v_;
};

inline BigRational to_rational(mpfr_srcptr x) {
    BigRational q;
    mpfr_get_q(q.get_mpq_t(), x);
    return q;
}

/// rad += 2^(exp(mid) - prec(mid)) when `ternary` reports an inexact result.
inline void add_rounding_ulp(mpfr_ptr rad, mpfr_srcptr mid, int ternary) {
    if (ternary == 0 || mpfr_zero_p(mid)) return;
    mpfr_value ulp(radius_bits);
    mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid) - mpfr_get_prec(mid), MPFR_RNDU);
    mpfr_add(rad, rad, ulp.get(), MPFR_RNDU);
}

/// out = upper bound of |x| (out has radius precision).
inline void abs_upper(mpfr_ptr out, mpfr_srcptr x) {
    mpfr_set(out, x, MPFR_RNDA);
    mpfr_abs(out, out, MPFR_RNDN);
}

inline void abs_lower(mpfr_ptr out, mpfr_srcptr x) {
    mpfr_set(out, x, MPFR_RNDZ);
    mpfr_abs(out, out, MPFR_RNDN);
}

} // namespace detail

/// A real number represented as midpoint +/- radius. Every operation returns
/// a ball containing the exact result whenever the exact inputs lie inside
/// the input balls. `digits` is the working precision in decimal digits.
class Ball {
  public:
    Ball() : Ball(16) {}

    /// Exact zero at the given working precision.
    explicit Ball(int digits)
        : mid_(detail::bits_for_digits(checked(digits))), rad_(detail::radius_bits), digits_(digits) {}

    static Ball from_int(long value, int digits) {
        Ball b(digits);
        int t = mpfr_set_si(b.mid_.get(), value, MPFR_RNDN);
        detail::add_rounding_ulp(b.rad_.get(), b.mid_.get(), t);
        return b;
    }

    static Ball from_integer(const BigInt& value, int digits) {
        Ball b(digits);
        int t = mpfr_set_z(b.mid_.get(), value.get_mpz_t(), MPFR_RNDN);
        detail::add_rounding_ulp(b.rad_.get(), b.mid_.get(), t);
        return b;
    }

    /// Ball containing q; the radius is the exact rounding error rounded up.
    static Ball from_rational(const BigRational& q, int digits) {
        Ball b(digits);
        int t = mpfr_set_q(b.mid_.get(), q.get_mpq_t(), MPFR_RNDN);
        if (t != 0) {
            BigRational err = abs(q - detail::to_rational(b.mid_.get()));
            mpfr_set_q(b.rad_.get(), err.get_mpq_t(), MPFR_RNDU);
        }
        return b;
    }

    /// Ball around an exact floating value; rounding to the working precision
    /// is accounted for in the radius.
    static Ball from_mpfr(mpfr_srcptr mid, int digits) {
        Ball b(digits);
        int t = mpfr_set(b.mid_.get(), mid, MPFR_RNDN);
        detail::add_rounding_ulp(b.rad_.get(), b.mid_.get(), t);
        return b;
    }

    static Ball from_mpfr(mpfr_srcptr mid, mpfr_srcptr rad, int digits) {
        Ball b = from_mpfr(mid, digits);
        mpfr_add(b.rad_.get(), b.rad_.get(), rad, MPFR_RNDU);
        return b;
    }

    /// Ball that is exact in long double; convenient for kernels that run in
    /// hardware floating point and carry their own error bound.
    static Ball from_long_double(long double mid, long double rad, int digits) {
        Ball b(digits);
        detail::mpfr_value m(64);
        mpfr_set_ld(m.get(), mid, MPFR_RNDN);
        int t = mpfr_set(b.mid_.get(), m.get(), MPFR_RNDN);
        detail::add_rounding_ulp(b.rad_.get(), b.mid_.get(), t);
        detail::mpfr_value r(64);
        mpfr_set_ld(r.get(), std::fabs(rad), MPFR_RNDU);
        mpfr_add(b.rad_.get(), b.rad_.get(), r.get(), MPFR_RNDU);
        return b;
    }

    int digits() const noexcept { return digits_; }
    mpfr_prec_t bits() const noexcept { return mpfr_get_prec(mid_.get()); }
    mpfr_srcptr mid() const noexcept { return mid_.get(); }
    mpfr_srcptr rad() const noexcept { return rad_.get(); }
    mpfr_ptr mid_mut() noexcept { return mid_.get(); }
    mpfr_ptr rad_mut() noexcept { return rad_.get(); }

    bool is_exact() const noexcept { return mpfr_zero_p(rad_.get()); }
    bool is_zero() const noexcept { return is_exact() && mpfr_zero_p(mid_.get()); }

    BigRational mid_rational() const { return detail::to_rational(mid_.get()); }
    BigRational rad_rational() const { return detail::to_rational(rad_.get()); }

    bool contains(const BigRational& q) const {
        return abs(q - mid_rational()) <= rad_rational();
    }
    bool contains_zero() const { return mpfr_cmpabs(mid_.get(), rad_.get()) <= 0; }
    bool certainly_positive() const { return mpfr_sgn(mid_.get()) > 0 && mpfr_cmpabs(mid_.get(), rad_.get()) > 0; }
    bool certainly_negative() const { return mpfr_sgn(mid_.get()) < 0 && mpfr_cmpabs(mid_.get(), rad_.get()) > 0; }

    /// True when the two balls share at least one point.
    bool overlaps(const Ball& other) const {
        return abs(mid_rational() - other.mid_rational()) <= rad_rational() + other.rad_rational();
    }

    /// True when every point of `inner` lies in this ball.
    bool encloses(const Ball& inner) const {
        return abs(mid_rational() - inner.mid_rational()) + inner.rad_rational() <= rad_rational();
    }

    double to_double() const { return mpfr_get_d(mid_.get(), MPFR_RNDN); }
    double radius_double() const { return mpfr_get_d(rad_.get(), MPFR_RNDU); }

    /// Lower/upper endpoint, rounded outward, at the midpoint precision.
    detail::mpfr_value lower() const {
        detail::mpfr_value out(bits());
        mpfr_sub(out.get(), mid_.get(), rad_.get(), MPFR_RNDD);
        return out;
    }
    detail::mpfr_value upper() const {
        detail::mpfr_value out(bits());
        mpfr_add(out.get(), mid_.get(), rad_.get(), MPFR_RNDU);
        return out;
    }

    /// Same value re-rounded to another working precision.
    Ball with_digits(int digits) const {
        Ball b(digits);
        int t = mpfr_set(b.mid_.get(), mid_.get(), MPFR_RNDN);
        mpfr_set(b.rad_.get(), rad_.get(), MPFR_RNDU);
        detail::add_rounding_ulp(b.rad_.get(), b.mid_.get(), t);
        return b;
    }

    /// Widens the radius by a nonnegative error term.
    Ball& add_error(mpfr_srcptr err) {
        detail::mpfr_value e(detail::radius_bits);
        detail::abs_upper(e.get(), err);
        mpfr_add(rad_.get(), rad_.get(), e.get(), MPFR_RNDU);
        return *this;
    }
    Ball& add_error(const BigRational& err) {
        detail::mpfr_value e(detail::radius_bits);
        BigRational a = abs(err);
        mpfr_set_q(e.get(), a.get_mpq_t(), MPFR_RNDU);
        mpfr_add(rad_.get(), rad_.get(), e.get(), MPFR_RNDU);
        return *this;
    }
    Ball& add_error(const Ball& err_bound) {
        detail::mpfr_value e = err_bound.upper();
        mpfr_abs(e.get(), e.get(), MPFR_RNDN);
        detail::mpfr_value lo = err_bound.lower();
        if (mpfr_cmpabs(lo.get(), e.get()) > 0) mpfr_abs(e.get(), lo.get(), MPFR_RNDN);
        return add_error(e.get());
    }
    /// Adds 2^exp2 to the radius.
    Ball& add_error_2exp(long exp2) {
        detail::mpfr_value e(detail::radius_bits);
        mpfr_set_ui_2exp(e.get(), 1, exp2, MPFR_RNDU);
        mpfr_add(rad_.get(), rad_.get(), e.get(), MPFR_RNDU);
        return *this;
    }

  private:
    static int checked(int digits) {
        if (digits < 1) throw domain_error("working precision must be at least one digit");
        return digits;
    }

    detail::mpfr_value mid_;
    detail::mpfr_value rad_;
    int digits_;
};

// ---------------------------------------------------------------------------
// Arithmetic

inline Ball operator-(const Ball& a) {
    Ball r(a.digits());
    int t = mpfr_neg(r.mid_mut(), a.mid(), MPFR_RNDN);
    mpfr_set(r.rad_mut(), a.rad(), MPFR_RNDU);
    detail::add_rounding_ulp(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball operator+(const Ball& a, const Ball& b) {
    Ball r(std::min(a.digits(), b.digits()));
    int t = mpfr_add(r.mid_mut(), a.mid(), b.mid(), MPFR_RNDN);
    mpfr_add(r.rad_mut(), a.rad(), b.rad(), MPFR_RNDU);
    detail::add_rounding_ulp(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball operator-(const Ball& a, const Ball& b) {
    Ball r(std::min(a.digits(), b.digits()));
    int t = mpfr_sub(r.mid_mut(), a.mid(), b.mid(), MPFR_RNDN);
    mpfr_add(r.rad_mut(), a.rad(), b.rad(), MPFR_RNDU);
    detail::add_rounding_ulp(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball operator*(const Ball& a, const Ball& b) {
    Ball r(std::min(a.digits(), b.digits()));
    int t = mpfr_mul(r.mid_mut(), a.mid(), b.mid(), MPFR_RNDN);
    if (!a.is_exact() || !b.is_exact()) {
        // |am| rb + |bm| ra + ra rb
        detail::mpfr_value am(detail::radius_bits), bm(detail::radius_bits), acc(detail::radius_bits),
            tmp(detail::radius_bits);
        detail::abs_upper(am.get(), a.mid());
        detail::abs_upper(bm.get(), b.mid());
        mpfr_mul(acc.get(), am.get(), b.rad(), MPFR_RNDU);
        mpfr_mul(tmp.get(), bm.get(), a.rad(), MPFR_RNDU);
        mpfr_add(acc.get(), acc.get(), tmp.get(), MPFR_RNDU);
        mpfr_mul(tmp.get(), a.rad(), b.rad(), MPFR_RNDU);
        mpfr_add(r.rad_mut(), acc.get(), tmp.get(), MPFR_RNDU);
    }
    detail::add_rounding_ulp(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball operator/(const Ball& a, const Ball& b) {
    if (b.contains_zero()) throw domain_error("division by a ball containing zero");
    Ball r(std::min(a.digits(), b.digits()));
    int t = mpfr_div(r.mid_mut(), a.mid(), b.mid(), MPFR_RNDN);
    if (!a.is_exact() || !b.is_exact()) {
        // (ra + |am/bm| rb) / (|bm| - rb)
        detail::mpfr_value q(detail::radius_bits), num(detail::radius_bits), den(detail::radius_bits);
        mpfr_div(q.get(), a.mid(), b.mid(), MPFR_RNDA);
        mpfr_abs(q.get(), q.get(), MPFR_RNDN);
        mpfr_mul(num.get(), q.get(), b.rad(), MPFR_RNDU);
        mpfr_add(num.get(), num.get(), a.rad(), MPFR_RNDU);
        detail::abs_lower(den.get(), b.mid());
        mpfr_sub(den.get(), den.get(), b.rad(), MPFR_RNDD);
        if (mpfr_sgn(den.get()) <= 0) throw domain_error("division by a ball containing zero");
        mpfr_div(r.rad_mut(), num.get(), den.get(), MPFR_RNDU);
    }
    detail::add_rounding_ulp(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball mul_int(const Ball& a, long n) {
    Ball r(a.digits());
    int t = mpfr_mul_si(r.mid_mut(), a.mid(), n, MPFR_RNDN);
    mpfr_mul_ui(r.rad_mut(), a.rad(), static_cast<unsigned long>(n < 0 ? -n : n), MPFR_RNDU);
    detail::add_rounding_ulp(r.rad_mut(), r.mid(), t);
    return r;
}

inline Ball div_int(const Ball& a, long n) {
    if (n == 0) throw domain_error("division by zero");
    Ball r(a.digits());
    int t = mpfr_div_si(r.mid_mut(), a.mid(), n, MPFR_RNDN);
    mpfr_div_ui(r.rad_mut(), a.rad(), static_cast<unsigned long>(n < 0 ? -n : n), MPFR_RNDU);
    detail::add_rounding_ulp(r.rad_mut(), r.mid(), t);
    return r;
}

/// a * 2^e, exact.
inline Ball mul_2exp(const Ball& a, long e) {
    Ball r(a.digits());
    mpfr_mul_2si(r.mid_mut(), a.mid(), e, MPFR_RNDN);
    mpfr_mul_2si(r.rad_mut(), a.rad(), e, MPFR_RNDU);
    return r;
}

inline Ball abs(const Ball& a) {
    return mpfr_sgn(a.mid()) < 0 ? -a : a;
}

inline Ball sqr(const Ball& a) {
    return a * a;
}

inline Ball& operator+=(Ball& a, const Ball& b) { return a = a + b; }
inline Ball& operator-=(Ball& a, const Ball& b) { return a = a - b; }
inline Ball& operator*=(Ball& a, const Ball& b) { return a = a * b; }
inline Ball& operator/=(Ball& a, const Ball& b) { return a = a / b; }

/// Smallest ball containing both inputs.
inline Ball hull(const Ball& a, const Ball& b) {
    BigRational lo = std::min(a.mid_rational() - a.rad_rational(), b.mid_rational() - b.rad_rational());
    BigRational hi = std::max(a.mid_rational() + a.rad_rational(), b.mid_rational() + b.rad_rational());
    Ball r = Ball::from_rational((lo + hi) / 2, std::min(a.digits(), b.digits()));
    r.add_error((hi - lo) / 2);
    return r;
}

// ---------------------------------------------------------------------------
// Construction from text, certified digits, serialization

/// Ball containing the exact value of a decimal literal.
inline Ball make(std::string_view text, int digits) {
    return Ball::from_rational(parse_decimal(text), digits);
}

/// max{d : radius < 10^-d * max(1, |mid|)}, capped at the working precision.
inline int digits_certified(const Ball& a) {
    if (a.is_exact()) return a.digits();
    BigRational scale = std::max(BigRational(1), BigRational(abs(a.mid_rational())));
    BigRational rad = a.rad_rational();
    if (rad >= scale) return 0;
    BigRational ratio = scale / rad;
    detail::mpfr_value lg(detail::radius_bits);
    mpfr_set_q(lg.get(), ratio.get_mpq_t(), MPFR_RNDD);
    mpfr_log10(lg.get(), lg.get(), MPFR_RNDD);
    double est = std::min(mpfr_get_d(lg.get(), MPFR_RNDD), static_cast<double>(a.digits()));
    int d = std::max(static_cast<int>(std::floor(est)), 0);
    auto holds = [&](int k) { return rad * BigRational(ipow(10, static_cast<unsigned long>(k))) < scale; };
    while (d > 0 && !holds(d)) --d;
    while (holds(d + 1) && d < a.digits()) ++d;
    return std::min(d, a.digits());
}

namespace detail {

/// Scientific notation "d.ddde+XX" for a digit string and mpfr exponent.
inline std::string format_scientific(std::string digits, long exp10) {
    bool negative = !digits.empty() && digits.front() == '-';
    if (negative) digits.erase(0, 1);
    std::string out = negative ? "-" : "";
    out += digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    long e = exp10 - 1;
    out += e < 0 ? "e-" : "e+";
    std::string es = std::to_string(e < 0 ? -e : e);
    if (es.size() < 2) es.insert(0, "0");
    return out + es;
}

inline std::string mpfr_to_scientific(mpfr_srcptr x, std::size_t sig_digits, mpfr_rnd_t rnd) {
    if (mpfr_zero_p(x)) return "0";
    mpfr_exp_t e = 0;
    char* raw = mpfr_get_str(nullptr, &e, 10, sig_digits, x, rnd);
    std::string s(raw);
    mpfr_free_str(raw);
    return format_scientific(s, e);
}

} // namespace detail

/// Midpoint and radius as scientific decimal strings. The printed radius
/// absorbs the decimal rounding of the midpoint, so the pair encloses the ball.
inline std::pair<std::string, std::string> decimal_parts(const Ball& a, int sig_digits = 0) {
    if (sig_digits <= 0) sig_digits = std::max(1, std::min(a.digits() + 1, digits_certified(a) + 3));
    std::string mid = detail::mpfr_to_scientific(a.mid(), static_cast<std::size_t>(sig_digits), MPFR_RNDN);
    BigRational printed = mid == "0" ? BigRational(0) : parse_decimal(mid);
    BigRational total = a.rad_rational() + abs(printed - a.mid_rational());
    std::string rad = "0";
    if (total != 0) {
        detail::mpfr_value r(detail::radius_bits);
        mpfr_set_q(r.get(), total.get_mpq_t(), MPFR_RNDU);
        rad = detail::mpfr_to_scientific(r.get(), 3, MPFR_RNDU);
    }
    return {mid, rad};
}

/// "m ± r"; parse_ball(to_string(x)) encloses x.
inline std::string to_string(const Ball& a, int sig_digits = 0) {
    auto [mid, rad] = decimal_parts(a, sig_digits);
    return mid + " ± " + rad;
}

inline std::string radius_string(const Ball& a) {
    if (a.is_exact()) return "0";
    return detail::mpfr_to_scientific(a.rad(), 3, MPFR_RNDU);
}

/// Parses "m ± r" (also "m +/- r", or a bare "m").
inline Ball parse_ball(std::string_view text, int digits) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        return s;
    };
    std::size_t sep = text.find("±");
    std::size_t sep_len = 2;
    if (sep == std::string_view::npos) {
        sep = text.find("+/-");
        sep_len = 3;
    }
    if (sep == std::string_view::npos) return make(trim(text), digits);
    Ball b = make(trim(text.substr(0, sep)), digits);
    BigRational r = parse_decimal(trim(text.substr(sep + sep_len)));
    if (r < 0) throw parse_error("negative radius", sep + sep_len);
    b.add_error(r);
    return b;
}

/// Lossless decimal form of midpoint and radius (dyadic values have finite
/// decimal expansions). Used by the on-disk cache.
inline std::pair<std::string, std::string> exact_strings(const Ball& a) {
    return {exact_decimal(a.mid_rational()), exact_decimal(a.rad_rational())};
}

inline Ball from_exact_strings(std::string_view mid, std::string_view rad, int digits) {
    Ball b(digits);
    BigRational m = parse_decimal(mid);
    int t = mpfr_set_q(b.mid_mut(), m.get_mpq_t(), MPFR_RNDN);
    if (t != 0) b.add_error(abs(m - b.mid_rational()));
    BigRational r = parse_decimal(rad);
    b.add_error(r);
    return b;
}

inline std::ostream& operator<<(std::ostream& os, const Ball& a) {
    return os << to_string(a);
}

} // namespace periodlab
