#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "periodlab/error.hpp"
#include "periodlab/precision/constants.hpp"
#include "periodlab/precision/elementary.hpp"
#include "periodlab/series/bernoulli.hpp"

namespace periodlab {

inline constexpr long gamma_exact_integer_limit = 5000;

namespace detail {

/// Shift point z0 and term count K for the Stirling series at wd digits:
/// the first omitted term |B_{2K+2}| / ((2K+2)(2K+1) z^{2K+1}) is estimated
/// with |B_2k| ~ 2 (2k)! / (2 pi)^2k.
inline std::pair<long, std::size_t> stirling_plan(int wd) {
    const std::size_t max_k = (default_bernoulli_cache().max_index() - 2) / 2;
    for (long z0 = 8;; z0 *= 2) {
        for (std::size_t K = 1; K <= max_k; ++K) {
            double m = static_cast<double>(2 * K + 2);
            double lg = std::log10(2.0) + std::lgamma(m + 1) / std::log(10.0) - m * std::log10(6.283185307179586) -
                        std::log10(m * (m - 1)) - (m - 1) * std::log10(static_cast<double>(z0));
            if (lg < -wd - 2) return {z0, K};
        }
    }
}

/// log Gamma(z) for z >= z0 by Stirling's series with K correction terms;
/// for real z > 0 the remainder is below the first omitted term.
inline Ball log_gamma_stirling(const Ball& z, std::size_t K, int wd) {
    Ball half = Ball::from_rational(BigRational(1, 2), wd);
    Ball result = (z - half) * log(z) - z + mul_2exp(log(mul_2exp(const_pi(wd), 1)), -1);
    Ball zinv = Ball::from_int(1, wd) / z;
    Ball zinv2 = sqr(zinv);
    Ball power = zinv; // z^{-(2k-1)}
    for (std::size_t k = 1; k <= K; ++k) {
        BigRational c = bernoulli(2 * k) / BigRational(static_cast<long>(2 * k * (2 * k - 1)));
        result += Ball::from_rational(c, wd) * power;
        power = power * zinv2;
    }
    // remainder at the smallest z in the ball
    BigRational zlo = z.mid_rational() - z.rad_rational();
    BigRational zpow(1);
    for (std::size_t i = 0; i < 2 * K + 1; ++i) zpow *= zlo;
    BigRational rem =
        ::abs(bernoulli(2 * K + 2)) / (BigRational(static_cast<long>((2 * K + 2) * (2 * K + 1))) * zpow);
    result.add_error(rem);
    return result;
}

inline std::optional<long> exact_small_integer(const Ball& x) {
    if (!x.is_exact()) return std::nullopt;
    BigRational q = x.mid_rational();
    if (q.get_den() != 1 || q <= 0 || q > gamma_exact_integer_limit) return std::nullopt;
    return q.get_num().get_si();
}

} // namespace detail

/// Gamma on the positive reals. Exact positive integers up to 5000 give
/// (n-1)! directly; otherwise x is raised by the recurrence to the Stirling
/// range and the shift is divided out.
inline Ball gamma_pos(const Ball& x, int digits) {
    if (!x.certainly_positive()) throw domain_error("Gamma needs a ball strictly inside (0, inf): " + to_string(x));
    if (auto n = detail::exact_small_integer(x))
        return Ball::from_integer(factorial(static_cast<unsigned long>(*n - 1)), digits);
    const int wd = digits + 10;
    auto [z0, K] = detail::stirling_plan(wd);
    Ball z = x.with_digits(wd);
    Ball shift = Ball::from_int(1, wd);
    while (mpfr_cmp_si(z.mid(), z0) < 0 || !(z - Ball::from_int(z0, wd)).certainly_positive()) {
        shift = shift * z;
        z = z + Ball::from_int(1, wd);
    }
    Ball g = exp(detail::log_gamma_stirling(z, K, wd)) / shift;
    return g.with_digits(digits);
}

inline Ball gamma_pos(const BigRational& x, int digits) {
    if (x <= 0) throw domain_error("Gamma argument must be positive, got " + x.get_str());
    if (x.get_den() == 1 && x <= gamma_exact_integer_limit)
        return Ball::from_integer(factorial(x.get_num().get_ui() - 1), digits);
    return gamma_pos(Ball::from_rational(x, digits + 10), digits);
}

/// Argument of an amplitude: exact rational or ball.
using AmplitudeArg = std::variant<BigRational, Ball>;

struct AmplitudeQuery {
    AmplitudeArg alpha, beta;
    int digits = 50;
};

struct AmplitudeValue {
    Ball value;
    std::optional<BigRational> exact;
};

namespace detail {

inline Ball arg_ball(const AmplitudeArg& a, int digits) {
    if (const auto* q = std::get_if<BigRational>(&a)) return Ball::from_rational(*q, digits);
    return std::get<Ball>(a);
}

inline std::optional<long> arg_integer(const AmplitudeArg& a) {
    if (const auto* q = std::get_if<BigRational>(&a))
        if (q->get_den() == 1 && *q > 0 && *q <= gamma_exact_integer_limit) return q->get_num().get_si();
    return std::nullopt;
}

/// Canonical order so that B(a, b) and B(b, a) are computed identically.
inline bool arg_less(const AmplitudeArg& a, const AmplitudeArg& b) {
    auto key = [](const AmplitudeArg& v) {
        if (const auto* q = std::get_if<BigRational>(&v)) return std::make_tuple(0, *q, BigRational(0));
        const Ball& x = std::get<Ball>(v);
        return std::make_tuple(1, x.mid_rational(), x.rad_rational());
    };
    return key(a) < key(b);
}

} // namespace detail

/// Veneziano amplitude B(alpha, beta) = Gamma(alpha) Gamma(beta) / Gamma(alpha + beta).
/// When one argument is a positive integer n and the other a rational b,
/// B = (n-1)! / (b (b+1) ... (b+n-1)) exactly.
inline AmplitudeValue veneziano(const AmplitudeQuery& query) {
    AmplitudeArg a = query.alpha, b = query.beta;
    if (detail::arg_less(b, a)) std::swap(a, b);
    const int d = query.digits;
    for (const auto* v : {&a, &b}) {
        if (const auto* q = std::get_if<BigRational>(v)) {
            if (*q <= 0) throw domain_error("Veneziano arguments must be positive, got " + q->get_str());
        } else if (!std::get<Ball>(*v).certainly_positive()) {
            throw domain_error("Veneziano arguments must be certainly positive");
        }
    }
    auto exact_with = [&](long n, const BigRational& other) {
        BigRational den(1);
        for (long i = 0; i < n; ++i) den *= other + i;
        return BigRational(BigRational(factorial(static_cast<unsigned long>(n - 1))) / den);
    };
    const auto* qa = std::get_if<BigRational>(&a);
    const auto* qb = std::get_if<BigRational>(&b);
    if (qa && qb) {
        std::optional<BigRational> exact;
        if (auto n = detail::arg_integer(a))
            exact = exact_with(*n, *qb);
        else if (auto m = detail::arg_integer(b))
            exact = exact_with(*m, *qa);
        if (exact) return {Ball::from_rational(*exact, d), exact};
    }
    const int wd = d + 10;
    Ball x = detail::arg_ball(a, wd), y = detail::arg_ball(b, wd);
    Ball value = gamma_pos(x, wd) * gamma_pos(y, wd) / gamma_pos(x + y, wd);
    return {value.with_digits(d), std::nullopt};
}

} // namespace periodlab
