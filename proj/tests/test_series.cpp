#include <gtest/gtest.h>

#include <mpfr.h>

#include "periodlab/precision/constants.hpp"
#include "periodlab/series/bernoulli.hpp"
#include "periodlab/series/euler_product.hpp"
#include "periodlab/series/liouville.hpp"
#include "periodlab/series/mzv.hpp"
#include "periodlab/series/zeta.hpp"

using namespace periodlab;

namespace {

Ball mpfr_zeta_oracle(long k, int digits) {
    detail::mpfr_value v(detail::bits_for_digits(digits + 20));
    mpfr_zeta_ui(v.get(), static_cast<unsigned long>(k), MPFR_RNDN);
    Ball b = Ball::from_mpfr(v.get(), digits + 20);
    b.add_error_2exp(mpfr_get_exp(v.get()) - static_cast<long>(mpfr_get_prec(v.get())) + 1);
    return b;
}

Ball pi_power_times(const BigRational& r, long k, int digits) {
    return Ball::from_rational(r, digits) * pow_int(const_pi(digits), k);
}

} // namespace

TEST(Bernoulli, SmallValues) {
    EXPECT_EQ(bernoulli(0), BigRational(1));
    EXPECT_EQ(bernoulli(1), BigRational(-1, 2));
    EXPECT_EQ(bernoulli(2), BigRational(1, 6));
    EXPECT_EQ(bernoulli(4), BigRational(-1, 30));
    EXPECT_EQ(bernoulli(3), BigRational(0));
    EXPECT_EQ(bernoulli(12), BigRational(-691, 2730));
}

TEST(Bernoulli, RecurrenceHoldsExactly) {
    for (unsigned long n = 1; n <= 50; ++n) {
        BigRational acc(0);
        for (unsigned long j = 0; j <= n; ++j) acc += BigRational(binomial(n + 1, j)) * bernoulli(j);
        EXPECT_EQ(acc, 0) << n;
    }
}

TEST(Bernoulli, CapAndLoad) {
    EXPECT_THROW(bernoulli(201), resource_error);
    BernoulliCache fresh(10);
    std::vector<std::pair<std::size_t, BigRational>> good{{1, BigRational(-1, 2)}, {2, BigRational(1, 6)}};
    EXPECT_EQ(fresh.load(good), 2u);
    BernoulliCache other(10);
    std::vector<std::pair<std::size_t, BigRational>> bad{{1, BigRational(-1, 2)}, {2, BigRational(1, 7)}};
    EXPECT_EQ(other.load(bad), 1u);
    EXPECT_EQ(other.get(2), BigRational(1, 6));
}

TEST(Zeta, TwoAtThirtyDigits) {
    Ball z = zeta_int(2, 30);
    EXPECT_TRUE(z.overlaps(make("1.64493406684822643647241516664602519", 40)));
    EXPECT_TRUE(z.overlaps(sqr(const_pi(30)) / Ball::from_int(6, 30)));
    EXPECT_GE(digits_certified(z), 28);
}

TEST(Zeta, ThreeAtThirtyDigits) {
    Ball z = zeta_int(3, 30);
    EXPECT_TRUE(z.overlaps(make("1.20205690315959428539973816151144999", 40)));
    EXPECT_LT(z.radius_double(), 1e-28);
}

TEST(Zeta, DivergentAtOne) {
    EXPECT_THROW(zeta_int(1, 20), divergent_series_error);
    EXPECT_THROW(zeta_int(0, 20), divergent_series_error);
}

TEST(Zeta, MatchesMpfrOracle) {
    for (long k = 2; k <= 12; ++k)
        for (int digits : {15, 60, 200}) EXPECT_TRUE(zeta_int(k, digits).overlaps(mpfr_zeta_oracle(k, digits))) << k;
}

TEST(Zeta, HighPrecision) {
    Ball z = zeta_int(3, 1000);
    EXPECT_GE(digits_certified(z), 998);
    EXPECT_TRUE(z.overlaps(mpfr_zeta_oracle(3, 1000)));
}

TEST(Zeta, DoublingCutoffKeepsOverlap) {
    for (long k : {2L, 3L, 5L}) {
        for (long N : {10L, 20L, 40L, 80L}) {
            Ball a = zeta_int(k, 40, N);
            Ball b = zeta_int(k, 40, 2 * N);
            EXPECT_TRUE(a.overlaps(b)) << k << " " << N;
        }
    }
}

TEST(Zeta, AlternatingAndEulerMaclaurinRoutesAgree) {
    for (long k = 2; k <= 9; ++k)
        for (int digits : {20, 80, 150}) {
            Ball a = zeta_int(k, digits);
            Ball b = hurwitz_zeta(k, BigRational(1), digits);
            EXPECT_TRUE(a.overlaps(b)) << k;
            EXPECT_GE(digits_certified(b), digits - 2);
        }
}

TEST(ZetaEven, Rationals) {
    EXPECT_EQ(zeta_even_rational(2), BigRational(1, 6));
    EXPECT_EQ(zeta_even_rational(4), BigRational(1, 90));
    EXPECT_EQ(zeta_even_rational(6), BigRational(1, 945));
    EXPECT_EQ(zeta_even_rational(8), BigRational(1, 9450));
    EXPECT_THROW(zeta_even_rational(3), unsupported_error);
}

TEST(ZetaEven, ConsistentWithSeries) {
    for (long k : {2L, 4L, 6L, 8L})
        for (int digits : {10, 30, 60, 100})
            EXPECT_TRUE(zeta_int(k, digits).overlaps(pi_power_times(zeta_even_rational(k), k, digits))) << k;
}

TEST(Hurwitz, HalfShiftIsThreeZetaTwo) {
    Ball h = hurwitz_zeta(2, BigRational(1, 2), 40);
    EXPECT_TRUE(h.overlaps(mul_int(zeta_int(2, 40), 3)));
    EXPECT_GE(digits_certified(h), 38);
}

TEST(Mzv, DepthOneMatchesZeta) {
    for (long k = 2; k <= 8; ++k) {
        Ball m = mzv(MZVIndex{{k}}, 30);
        EXPECT_TRUE(m.overlaps(zeta_int(k, 30))) << k;
        EXPECT_GE(digits_certified(m), 28);
    }
}

TEST(Mzv, EulerTwoOne) {
    Ball m = mzv(MZVIndex{{2, 1}}, 20);
    Ball z = zeta_int(3, 20);
    EXPECT_TRUE(m.overlaps(z));
    EXPECT_GE(digits_certified(m), 18);
}

TEST(Mzv, SymmetricFunctionIdentities) {
    const int d = 40;
    Ball z2 = zeta_int(2, d), z3 = zeta_int(3, d), z4 = zeta_int(4, d), z5 = zeta_int(5, d), z6 = zeta_int(6, d);
    // stuffle: z(a) z(b) = z(a,b) + z(b,a) + z(a+b)
    EXPECT_TRUE(mzv(MZVIndex{{2, 2}}, d).overlaps(div_int(sqr(z2) - z4, 2)));
    EXPECT_TRUE((mzv(MZVIndex{{2, 3}}, d) + mzv(MZVIndex{{3, 2}}, d)).overlaps(z2 * z3 - z5));
    EXPECT_TRUE(mzv(MZVIndex{{3, 1}}, d).overlaps(div_int(z4, 4)));
    EXPECT_TRUE(mzv(MZVIndex{{2, 1, 1}}, d).overlaps(z4));
    EXPECT_TRUE(mzv(MZVIndex{{2, 1, 1, 1}}, d).overlaps(z5));
    EXPECT_TRUE(mzv(MZVIndex{{3, 3}}, d).overlaps(div_int(sqr(z3) - z6, 2)));
    // duality: reversed, swapped words give equal values
    EXPECT_TRUE(mzv(MZVIndex{{3, 1, 2}}, d).overlaps(mzv(MZVIndex{{2, 3, 1}}, d)));
    EXPECT_FALSE(mzv(MZVIndex{{3, 1, 2}}, d).overlaps(mzv(MZVIndex{{2, 2, 1}}, d)));
}

TEST(Mzv, Admissibility) {
    EXPECT_THROW(mzv(MZVIndex{{1, 2}}, 20), non_admissible_error);
    EXPECT_THROW(mzv(MZVIndex{{1}}, 20), non_admissible_error);
    EXPECT_THROW(mzv(MZVIndex{{2, 0}}, 20), non_admissible_error);
    EXPECT_THROW(mzv(MZVIndex{{}}, 20), non_admissible_error);
    try {
        mzv(MZVIndex{{1, 2}}, 20);
    } catch (const non_admissible_error& e) {
        EXPECT_NE(std::string(e.what()).find("s1 = 1"), std::string::npos);
    }
}

TEST(Mzv, IncreasingConverter) {
    MZVIndex idx = MZVIndex::from_increasing({1, 2});
    EXPECT_EQ(idx.exponents, (std::vector<long>{2, 1}));
    EXPECT_EQ(idx.weight(), 3);
    EXPECT_EQ(idx.depth(), 2u);
    EXPECT_TRUE(idx.admissible());
}

TEST(Mzv, DoublingCutoffKeepsOverlap) {
    for (long N : {40L, 80L, 160L}) {
        Ball a = mzv(MZVIndex{{3, 1, 2}}, 30, N);
        Ball b = mzv(MZVIndex{{3, 1, 2}}, 30, 2 * N);
        EXPECT_TRUE(a.overlaps(b));
    }
}

TEST(EulerProduct, SmallCases) {
    EXPECT_TRUE(euler_product_partial(2, 1, 20).is_exact());
    EXPECT_TRUE(euler_product_partial(2, 1, 20).contains(BigRational(1)));
    EXPECT_TRUE(euler_product_partial(2, 2, 20).contains(BigRational(4, 3)));
    EXPECT_EQ(euler_product_exact(2, 2), BigRational(4, 3));
    EXPECT_EQ(euler_product_exact(2, 3), BigRational(3, 2));
    EXPECT_TRUE(euler_product_partial(3, 50, 30).contains(euler_product_exact(3, 50)));
}

TEST(EulerProduct, MonotoneAndBelowZeta) {
    Ball z = zeta_int(2, 30);
    BigRational zeta_upper = z.mid_rational() + z.rad_rational();
    BigRational prev_upper(0);
    for (long pmax : {10L, 100L, 1000L, 10000L, 100000L}) {
        Ball p = euler_product_partial(2, pmax, 30);
        EXPECT_GT(p.mid_rational() - p.rad_rational(), prev_upper) << pmax;
        EXPECT_LT(p.mid_rational() + p.rad_rational(), zeta_upper);
        prev_upper = p.mid_rational() + p.rad_rational();
    }
    Ball gap = z - euler_product_partial(2, 100000, 30);
    EXPECT_LT(gap.mid_rational() + gap.rad_rational(), BigRational(1, 100000));
}

TEST(Liouville, Digits) {
    Ball l = liouville_constant(25);
    EXPECT_TRUE(l.contains(parse_decimal("0.1100010000000000000000010")));
    EXPECT_LT(l.radius_double(), 1e-25);
    Ball low = liouville_constant(3);
    EXPECT_TRUE(low.overlaps(make("0.110", 10)));
    EXPECT_LT(low.radius_double(), 1e-3);
    BigRational majorant = BigRational(1, 9) + BigRational(1, 90);
    EXPECT_LT(l.mid_rational() + l.rad_rational(), majorant);
}
