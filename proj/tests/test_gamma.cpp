#include <gtest/gtest.h>

#include <mpfr.h>

#include <random>

#include "periodlab/cli/parse.hpp"
#include "periodlab/gamma/gamma.hpp"
#include "periodlab/quadrature/tanh_sinh.hpp"

using namespace periodlab;

TEST(Gamma, ExactIntegers) {
    Ball one = gamma_pos(Ball::from_int(1, 30), 30);
    EXPECT_TRUE(one.is_exact());
    EXPECT_TRUE(one.contains(BigRational(1)));
    Ball g5 = gamma_pos(Ball::from_int(5, 30), 30);
    EXPECT_TRUE(g5.is_exact());
    EXPECT_TRUE(g5.contains(BigRational(24)));
}

TEST(Gamma, HalfIsSqrtPi) {
    Ball g = gamma_pos(BigRational(1, 2), 40);
    EXPECT_TRUE(g.overlaps(sqrt(const_pi(40))));
    EXPECT_GE(digits_certified(g), 37);
}

TEST(Gamma, DomainErrors) {
    EXPECT_THROW(gamma_pos(Ball(20), 20), domain_error);
    EXPECT_THROW(gamma_pos(Ball::from_int(-3, 20), 20), domain_error);
    EXPECT_THROW(gamma_pos(make("0.1", 20) - make("0.1", 20), 20), domain_error);
}

TEST(Gamma, MatchesMpfrOracle) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        BigRational q(static_cast<long>(rng() % 100000) + 1, static_cast<long>(rng() % 997) + 1);
        q.canonicalize();
        if (q > 150) continue;
        Ball g = gamma_pos(Ball::from_rational(q, 30), 30);
        detail::mpfr_value v(200);
        mpfr_set_q(v.get(), q.get_mpq_t(), MPFR_RNDN);
        mpfr_gamma(v.get(), v.get(), MPFR_RNDN);
        Ball oracle = Ball::from_mpfr(v.get(), 55);
        oracle.add_error(Ball::from_mpfr(v.get(), 55) * make("1e-50", 55));
        EXPECT_TRUE(g.overlaps(oracle)) << q.get_str();
    }
}

TEST(Gamma, RecurrenceProperty) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 1000; ++i) {
        BigRational q(static_cast<long>(rng() % 2000000) + 1, 100000);
        Ball x = Ball::from_rational(q, 20);
        Ball lhs = gamma_pos(x + Ball::from_int(1, 20), 20);
        Ball rhs = x * gamma_pos(x, 20);
        ASSERT_TRUE(lhs.overlaps(rhs)) << q.get_str();
    }
}

TEST(Gamma, HighPrecision) {
    Ball g = gamma_pos(BigRational(1, 3), 200);
    EXPECT_GE(digits_certified(g), 195);
    // Gamma(1/3) Gamma(2/3) = 2 pi / sqrt 3
    Ball prod = g * gamma_pos(BigRational(2, 3), 200);
    EXPECT_TRUE(prod.overlaps(mul_2exp(const_pi(200), 1) / sqrt(Ball::from_int(3, 200))));
}

TEST(Veneziano, ExactValues) {
    AmplitudeValue v11 = veneziano({BigRational(1), BigRational(1), 30});
    ASSERT_TRUE(v11.exact.has_value());
    EXPECT_EQ(*v11.exact, BigRational(1));
    AmplitudeValue v23 = veneziano({BigRational(2), BigRational(3), 30});
    ASSERT_TRUE(v23.exact.has_value());
    EXPECT_EQ(*v23.exact, BigRational(1, 12));
    AmplitudeValue v = veneziano({BigRational(3), BigRational(1, 2), 30});
    ASSERT_TRUE(v.exact.has_value());
    EXPECT_EQ(*v.exact, BigRational(16, 15));
}

TEST(Veneziano, HalfHalfIsPi) {
    AmplitudeValue v = veneziano({BigRational(1, 2), BigRational(1, 2), 40});
    EXPECT_FALSE(v.exact.has_value());
    EXPECT_TRUE(v.value.overlaps(const_pi(40)));
    EXPECT_GE(digits_certified(v.value), 30);
}

TEST(Veneziano, Symmetry) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) {
        BigRational a(static_cast<long>(rng() % 1000) + 1, 97), b(static_cast<long>(rng() % 1000) + 1, 89);
        Ball ab = veneziano({a, b, 25}).value;
        Ball ba = veneziano({b, a, 25}).value;
        EXPECT_EQ(ab.mid_rational(), ba.mid_rational());
        EXPECT_EQ(ab.rad_rational(), ba.rad_rational());
        Ball xa = Ball::from_rational(a, 25), xb = Ball::from_rational(b, 25);
        Ball cab = veneziano({xa, xb, 25}).value;
        Ball cba = veneziano({xb, xa, 25}).value;
        EXPECT_EQ(cab.mid_rational(), cba.mid_rational());
        EXPECT_EQ(cab.rad_rational(), cba.rad_rational());
    }
}

TEST(Veneziano, BetaIntegral) {
    for (auto [a, b] : std::vector<std::pair<long, long>>{{1, 2}, {2, 2}, {3, 5}, {2, 7}}) {
        std::string expr = "x^" + std::to_string(a - 1) + "*(1-x)^" + std::to_string(b - 1);
        Ball integral = integrate_1d(parse_expression(expr), Interval{Endpoint::finite(0), Endpoint::finite(1)}, 20);
        EXPECT_TRUE(integral.overlaps(veneziano({BigRational(a), BigRational(b), 20}).value)) << expr;
    }
    // non-integer exponents via sqrt: B(3/2, 3/2) = pi/8
    Ball half = integrate_1d(parse_expression("sqrt(x*(1-x))"), Interval{Endpoint::finite(0), Endpoint::finite(1)}, 20);
    EXPECT_TRUE(half.overlaps(veneziano({BigRational(3, 2), BigRational(3, 2), 20}).value));
}

TEST(Veneziano, Errors) {
    EXPECT_THROW(veneziano({BigRational(0), BigRational(1), 20}), domain_error);
    EXPECT_THROW(veneziano({BigRational(-1, 2), BigRational(1), 20}), domain_error);
}
