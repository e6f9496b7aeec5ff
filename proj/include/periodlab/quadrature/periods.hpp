#pragma once

#include <string>
#include <utility>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/precision/constants.hpp"
#include "periodlab/quadrature/tanh_sinh.hpp"
#include "periodlab/series/zeta.hpp"

namespace periodlab {

namespace detail {

/// Li_j(t) / t = sum_{n>=1} t^{n-1} / n^j for 0 <= t <= 1/2, tail <= 2 t^N.
inline Ball polylog_over_t(int j, const Ball& t, int wd) {
    const long target = -static_cast<long>(bits_for_digits(wd)) - 4;
    Ball sum(wd);
    Ball power = Ball::from_int(1, wd);
    for (long n = 1;; ++n) {
        sum += power / pow_int(Ball::from_int(n, wd), j);
        power = power * t;
        if (below_2exp(power, target)) break;
    }
    detail::mpfr_value tail = magnitude_upper(power);
    mpfr_mul_2ui(tail.get(), tail.get(), 1, MPFR_RNDU);
    sum.add_error(tail.get());
    return sum;
}

inline bool above_half(const Ball& t) {
    return mpfr_cmp_ui_2exp(t.mid(), 1, -1) > 0;
}

} // namespace detail

/// zeta(k) as the iterated integral over 1 > t1 > ... > tk > 0 of
/// dt1/t1 ... dtk/(1 - tk). The inner k-1 layers are Li_{k-1}(t); the
/// outer layer int_0^1 Li_{k-1}(t) dt/t goes to tanh-sinh.
inline QuadratureResult zeta_iterated_integral(int k, int prec) {
    if (k != 2 && k != 3) throw unsupported_error("iterated-integral zeta supported for k = 2, 3 only");
    const int wd = 2 * prec + 10;
    Ball z2 = zeta_int(2, wd);
    auto f = [&, k](const Point& p) -> Ball {
        const Ball& t = p.x;
        if (!detail::above_half(t)) return detail::polylog_over_t(k - 1, t, wd);
        const Ball& s = p.right; // 1 - t, accurate near 1
        Ball log_s = log(s);
        if (k == 2) return -log_s / t;
        // Li2(t) = zeta(2) - log t log(1 - t) - Li2(1 - t)
        Ball li2_s = detail::polylog_over_t(2, s, wd) * s;
        return (z2 - log(t) * log_s - li2_s) / t;
    };
    return integrate_points(f, Interval{Endpoint::finite(0), Endpoint::finite(1)}, prec);
}

struct CalabiPair {
    Ball series;
    Ball integral;
};

/// The double integral I = int_(0,1)^2 dx dy / ((1 - xy) sqrt(xy)) by its
/// series sum_{n>=0} (n + 1/2)^-2 and by 2-D quadrature after x = u^2,
/// y = v^2, which leaves 4 / ((1 - uv)(1 + uv)) with 1 - uv formed as
/// (1 - u) + u (1 - v).
inline Ball calabi_integral(int prec) {
    auto f = [](const Point& u, const Point& v) {
        Ball one_minus = u.right + u.x * v.right;
        Ball one_plus = Ball::from_int(2, u.x.digits()) - one_minus;
        return Ball::from_int(4, u.x.digits()) / (one_minus * one_plus);
    };
    return integrate_unit_square(f, prec).value;
}

inline constexpr int calabi_integral_max_digits = 12;

/// Series at prec digits; the quadrature at min(prec, 12) digits.
inline CalabiPair calabi_I(int prec) {
    CalabiPair out{hurwitz_zeta(2, BigRational(1, 2), prec), Ball()};
    out.integral = calabi_integral(std::min(prec, calabi_integral_max_digits));
    return out;
}

/// Partial sum of the Calabi series, first `terms` terms (exact).
inline BigRational calabi_partial(long terms) {
    BigRational s(0);
    for (long n = 0; n < terms; ++n) s += BigRational(4, (2 * n + 1) * (2 * n + 1));
    return s;
}

namespace detail {

/// Forward-mode dual number over exact rationals, two directions.
struct Dual2 {
    BigRational v, d0, d1;
};

inline Dual2 operator+(const Dual2& a, const Dual2& b) { return {a.v + b.v, a.d0 + b.d0, a.d1 + b.d1}; }
inline Dual2 operator*(const Dual2& a, const Dual2& b) {
    return {a.v * b.v, a.d0 * b.v + a.v * b.d0, a.d1 * b.v + a.v * b.d1};
}
inline Dual2 operator/(const Dual2& a, const Dual2& b) {
    BigRational b2 = b.v * b.v;
    return {a.v / b.v, (a.d0 * b.v - a.v * b.d0) / b2, (a.d1 * b.v - a.v * b.d1) / b2};
}

} // namespace detail

/// The substitution x = eta^2 (1 + xi^2) / (1 + eta^2), y = xi^2 (1 + eta^2) / (1 + xi^2).
inline std::pair<BigRational, BigRational> calabi_substitution(const BigRational& eta, const BigRational& xi) {
    BigRational e2 = eta * eta, x2 = xi * xi;
    return {e2 * (1 + x2) / (1 + e2), x2 * (1 + e2) / (1 + x2)};
}

/// Closed form 4 eta xi (1 - eta^2 xi^2) / ((1 + eta^2)(1 + xi^2)).
inline BigRational calabi_jacobian_formula(const BigRational& eta, const BigRational& xi) {
    BigRational e2 = eta * eta, x2 = xi * xi;
    return 4 * eta * xi * (1 - e2 * x2) / ((1 + e2) * (1 + x2));
}

/// Jacobian determinant of the substitution by exact differentiation.
inline BigRational calabi_jacobian_exact(const BigRational& eta, const BigRational& xi) {
    using detail::Dual2;
    Dual2 e{eta, 1, 0}, x{xi, 0, 1}, one{1, 0, 0};
    Dual2 e2 = e * e, x2 = x * x;
    Dual2 X = e2 * (one + x2) / (one + e2);
    Dual2 Y = x2 * (one + e2) / (one + x2);
    return X.d0 * Y.d1 - X.d1 * Y.d0;
}

/// Largest |exact Jacobian - closed form| over the samples (0 when the
/// formula is right), as an exact ball.
inline Ball calabi_jacobian_check(const std::vector<std::pair<BigRational, BigRational>>& samples, int digits = 20) {
    BigRational worst(0);
    for (const auto& [eta, xi] : samples) {
        if (eta <= 0 || eta >= 1 || xi <= 0 || xi >= 1)
            throw domain_error("sample (" + eta.get_str() + ", " + xi.get_str() + ") is not inside (0,1)^2");
        BigRational d = ::abs(calabi_jacobian_exact(eta, xi) - calabi_jacobian_formula(eta, xi));
        if (d > worst) worst = d;
    }
    return Ball::from_rational(worst, digits);
}

/// Feynman period of the one-loop example: (4/pi) int_0^inf p^2 / (p^2 + 1)^2 dp.
inline Ball feynman_radial(int prec) {
    auto f = [](const Point& p) {
        Ball p2 = sqr(p.x);
        return p2 / sqr(p2 + Ball::from_int(1, p.x.digits()));
    };
    return integrate_points(f, Interval{Endpoint::finite(0), Endpoint::pos_inf()}, prec).value;
}

inline Ball feynman_p1(int prec) {
    const int wd = prec + 5;
    Ball radial = feynman_radial(prec + 5);
    return (mul_int(radial, 4) / const_pi(wd)).with_digits(prec);
}

} // namespace periodlab
