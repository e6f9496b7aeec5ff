// Acceptance run: one PASS/FAIL line per criterion, with wall time.
// Oracles are independent of the code under test wherever a value is derived.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "periodlab/cli/parse.hpp"
#include "periodlab/finite_field/elliptic.hpp"
#include "periodlab/finite_field/sums.hpp"
#include "periodlab/gamma/gamma.hpp"
#include "periodlab/identity/lab.hpp"
#include "periodlab/series/euler_product.hpp"
#include "periodlab/series/mzv.hpp"
#include "periodlab/series/primes.hpp"
#include "periodlab/series/zeta.hpp"

#ifndef PERIODLAB_CLI
#error "PERIODLAB_CLI must name the periodlab executable"
#endif

using namespace periodlab;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream note;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            note << " [failed: " << what << "]";
        }
    }
};

struct Criterion {
    int id;
    std::string title;
    double limit_s;
    std::function<void(Verdict&)> check;
};

bool agree_at_least(const Ball& a, const Ball& b, int digits) {
    CompareOutcome c = compare(a, b);
    return !c.separated() && c.agree_digits >= digits;
}

/// Both endpoints within tol of q.
bool within(const Ball& x, const BigRational& q, const BigRational& tol) {
    return ::abs(x.mid_rational() - q) + x.rad_rational() <= tol;
}

BigRational pow10(int e) {
    return e >= 0 ? BigRational(ipow(10, static_cast<unsigned long>(e))) : BigRational(BigInt(1), ipow(10, static_cast<unsigned long>(-e)));
}

void euler_identity(Verdict& v) {
    const int d = 60;
    Ball a = zeta_int(2, d);
    Ball b = Ball::from_rational(zeta_even_rational(2), d) * sqr(const_pi(d));
    Ball c = mzv(MZVIndex{{2}}, d);
    v.require(a.overlaps(b) && a.overlaps(c) && b.overlaps(c), "pairwise overlap");
    for (const Ball* x : {&a, &b, &c}) v.require(digits_certified(*x) >= 50, "digits_certified >= 50");
    v.note << " zeta(2) = " << to_string(a, 20);
}

void calabi_chain(Verdict& v) {
    const int d = 40;
    CalabiPair p = calabi_I(d);
    Ball pi = const_pi(d);
    v.require(agree_at_least(p.series, mul_int(zeta_int(2, d), 3), 30), "series vs 3 zeta(2)");
    v.require(agree_at_least(p.series, mul_2exp(sqr(pi), -1), 30), "series vs pi^2/2");
    v.require(agree_at_least(p.integral, p.series, 6), "quadrature vs series");
    std::mt19937_64 rng(2024);
    auto sample = [&] {
        long den = 2 + static_cast<long>(rng() % 999);
        return BigRational(1 + static_cast<long>(rng() % static_cast<std::uint64_t>(den - 1)), den);
    };
    std::vector<std::pair<BigRational, BigRational>> samples;
    for (int i = 0; i < 100; ++i) {
        BigRational eta = sample();
        samples.emplace_back(eta, sample());
    }
    v.require(calabi_jacobian_check(samples).is_zero(), "Jacobian check exactly 0");
    v.note << " quadrature agrees to " << compare(p.integral, p.series).agree_digits << " digits";
}

void near_coincidences(Verdict& v) {
    NearCoincidenceReport a = near_coincidence(PairId::A, 40);
    v.require(a.outcome.separated(), "pair A separated");
    v.require(a.outcome.agree_digits == 16 && a.outcome.agreed_text == "13.36972333037750",
              "pair A shares exactly 13.36972333037750");
    NearCoincidenceReport b = near_coincidence(PairId::B, 120);
    v.require(b.outcome.separated(), "pair B separated");
    v.require(b.outcome.agree_digits > 80, "pair B > 80 digits");
    v.note << " A: " << a.outcome.agreed_text << " (" << a.outcome.agree_digits << "), B: " << b.outcome.agree_digits
           << " digits";
}

void feynman(Verdict& v) {
    Ball p = feynman_p1(20);
    v.require(p.contains(BigRational(1)), "contains 1");
    v.require(p.rad_rational() < pow10(-15), "radius < 1e-15");
    v.note << " " << to_string(p);
}

void mahler_ratio(Verdict& v) {
    LaurentPoly p16 = parse_laurent("x+y+16+1/x+1/y"), p5 = parse_laurent("x+y+5+1/x+1/y");
    Ball r = mahler_measure(p16, 12, 20).value / mahler_measure(p5, 12, 20).value;
    v.require(within(r, BigRational(11, 6), pow10(-8)), "within 1e-8 of 11/6");
    v.note << " ratio = " << to_string(r);
}

void local_rh(Verdict& v) {
    long pairs = 0, weil_failures = 0, ratio_failures = 0;
    const BigRational tol = pow10(-20);
    for (long p : primes_up_to(50)) {
        if (p == 2) continue;
        auto chars = all_characters(p);
        for (const auto& a : chars)
            for (const auto& b : chars) {
                if (a.is_trivial() || b.is_trivial() || (a * b).is_trivial()) continue;
                ++pairs;
                WeilCheck w = weil_modulus_check(a, b);
                if (!w.holds || !w.product.is_constant(p)) ++weil_failures;
                Ball d = gauss_jacobi_ratio_check(a, b, 30);
                if (!d.contains(BigRational(0)) || d.rad_rational() >= tol) ++ratio_failures;
            }
    }
    v.require(weil_failures == 0, "J conj(J) = p");
    v.require(ratio_failures == 0, "Gauss ratio contains 0 with radius < 1e-20");
    v.require(pairs > 5000, "pair count");
    v.note << " " << pairs << " pairs, failures " << weil_failures << "/" << ratio_failures;
}

/// Counts solutions of y^2 = x^3 + a x + b by trying every (x, y).
long oracle_count(long a, long b, long p) {
    long n = 1;
    for (long x = 0; x < p; ++x)
        for (long y = 0; y < p; ++y)
            if (((y * y - x * x * x - a * x - b) % p + p) % p == 0) ++n;
    return n;
}

void hasse(Verdict& v) {
    long curves = 0, violations = 0, mismatches = 0;
    for (long p : primes_up_to(23)) {
        if (p == 2) continue; // short Weierstrass form is singular in characteristic 2
        for (long a = 0; a < p; ++a)
            for (long b = 0; b < p; ++b) {
                if ((4 * a * a * a + 27 * b * b) % p == 0) continue;
                EllipticCount e = elliptic_point_count(a, b, p);
                ++curves;
                if (!hasse_holds(e.trace, p)) ++violations;
                if (e.N != oracle_count(a, b, p)) ++mismatches;
            }
    }
    EllipticCount f5 = elliptic_point_count(-1, 0, 5);
    v.require(violations == 0, "Hasse bound");
    v.require(mismatches == 0, "recount agrees");
    v.require(f5.N == 8 && f5.trace == -2 && oracle_count(-1, 0, 5) == 8, "y^2 = x^3 - x over F_5");
    v.note << " " << curves << " curves, " << violations << " violations";
}

void veneziano_checks(Verdict& v) {
    AmplitudeValue one = veneziano({BigRational(1), BigRational(1), 40});
    AmplitudeValue twelfth = veneziano({BigRational(2), BigRational(3), 40});
    v.require(one.exact && *one.exact == 1, "B(1,1) = 1 exactly");
    v.require(twelfth.exact && *twelfth.exact == BigRational(1, 12), "B(2,3) = 1/12 exactly");
    v.require(agree_at_least(veneziano({BigRational(1, 2), BigRational(1, 2), 40}).value, const_pi(40), 30),
              "B(1/2,1/2) vs pi");
    for (auto [a, b] : std::vector<std::pair<long, long>>{{1, 2}, {2, 2}, {3, 5}}) {
        std::string expr = "x^" + std::to_string(a - 1) + "*(1-x)^" + std::to_string(b - 1);
        Ball integral = integrate_1d(parse_expression(expr), Interval{Endpoint::finite(0), Endpoint::finite(1)}, 20);
        v.require(integral.overlaps(veneziano({BigRational(a), BigRational(b), 20}).value), "Beta integral " + expr);
    }
}

void mzv_coincidence(Verdict& v) {
    v.require(agree_at_least(mzv(MZVIndex{{2, 1}}, 20), zeta_int(3, 20), 12), "zeta(2,1) vs zeta(3)");
    bool rejected = false;
    try {
        mzv(MZVIndex{{1, 2}}, 20);
    } catch (const non_admissible_error&) {
        rejected = true;
    }
    v.require(rejected, "zeta(1,2) rejected");
}

void euler_product(Verdict& v) {
    Ball z = zeta_int(2, 30);
    std::optional<Ball> prev;
    for (long pmax : {10L, 100L, 1000L, 10000L, 100000L}) {
        Ball cur = euler_product_partial(2, pmax, 30);
        if (prev) v.require(cur.mid_rational() - cur.rad_rational() > prev->mid_rational() + prev->rad_rational(),
                            "strictly increasing at pmax " + std::to_string(pmax));
        prev = cur;
    }
    Ball gap = z - *prev;
    v.require(within(gap, BigRational(0), pow10(-5)), "within 1e-5 of zeta(2)");
    v.note << " zeta(2) - P(10^5) = " << to_string(gap, 4);
}

BigRational random_rational(std::mt19937_64& rng) {
    long num = static_cast<long>(rng() % 2001) - 1000;
    long den = 1 + static_cast<long>(rng() % 97);
    return BigRational(num, den);
}

void containment(Verdict& v, long& violations) {
    std::mt19937_64 rng(11);
    violations = 0;
    for (int i = 0; i < 10000; ++i) {
        const int d = 10 + static_cast<int>(rng() % 50);
        BigRational qa = random_rational(rng), qb = random_rational(rng);
        Ball a = Ball::from_rational(qa, d), b = Ball::from_rational(qb, d);
        if (rng() % 2) a.add_error(BigRational(1, 1 + static_cast<long>(rng() % 1000000)));
        Ball r(d);
        BigRational exact;
        switch (rng() % 7) {
        case 0: r = a + b; exact = qa + qb; break;
        case 1: r = a - b; exact = qa - qb; break;
        case 2: r = a * b; exact = qa * qb; break;
        case 3:
            if (qb == 0) continue;
            r = a / Ball::from_rational(qb, d);
            exact = qa / qb;
            break;
        case 4: r = sqr(a); exact = qa * qa; break;
        case 5: r = sqrt(Ball::from_rational(qa * qa, d)); exact = ::abs(qa); break;
        case 6: r = div_int(mul_int(a, 7), 3); exact = qa * 7 / 3; break;
        }
        if (!r.contains(exact)) ++violations;
    }
    v.require(violations == 0, "containment");
}

void no_false_separation(Verdict& v, long& separated) {
    std::mt19937_64 rng(12);
    separated = 0;
    for (int i = 0; i < 1000; ++i) {
        const int d = 15 + static_cast<int>(rng() % 40);
        BigRational q = random_rational(rng);
        if (q == 0) q = 1;
        Ball x = Ball::from_rational(q, d), y = Ball::from_rational(random_rational(rng), d);
        Ball lhs(d), rhs(d);
        switch (i % 6) {
        case 0: lhs = (x + y) - y; rhs = x; break;
        case 1: lhs = (x * y + x) / x; rhs = y + Ball::from_int(1, d); break;
        case 2: {
            Ball ax = abs(x);
            lhs = exp(log(ax));
            rhs = ax;
            break;
        }
        case 3: {
            auto [c, s] = cos_sin(x / Ball::from_int(97, d));
            lhs = sqr(c) + sqr(s);
            rhs = Ball::from_int(1, d);
            break;
        }
        case 4: lhs = mul_int(atan(Ball::from_int(1, d)), 4); rhs = const_pi(d); break;
        case 5: lhs = zeta_int(2 + i % 5, d); rhs = hurwitz_zeta(2 + i % 5, BigRational(1), d); break;
        }
        if (compare(lhs, rhs).separated()) ++separated;
    }
    v.require(separated == 0, "no false separation");
}

std::string run_cli(const std::string& args, int& status) {
    std::string cmd = std::string(PERIODLAB_CLI) + " " + args + " 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    std::string out;
    if (!f) {
        status = -1;
        return out;
    }
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    status = pclose(f);
    return out;
}

void properties(Verdict& v) {
    long violations = 0, separated = 0;
    containment(v, violations);
    no_false_separation(v, separated);
    namespace fs = std::filesystem;
    fs::path cache = fs::temp_directory_path() / "periodlab-acceptance-cache";
    fs::remove_all(cache);
    const std::regex runtime("\"runtime_ms\":[0-9]+");
    int streams = 0;
    for (std::string args : {"zeta 3 --digits 40", "pi --digits 60", "gauss 11 5 2 --digits 30",
                             "calabi-jacobian 25 --seed 5", "verify-suite --digits 20", "compare-pair A"}) {
        args += " --json --cache-dir " + cache.string();
        int s1 = 0, s2 = 0;
        std::string first = std::regex_replace(run_cli(args, s1), runtime, "");
        std::string second = std::regex_replace(run_cli(args, s2), runtime, "");
        v.require(s1 == 0 && s2 == 0 && !first.empty(), "CLI run succeeded: " + args);
        v.require(first == second, "identical envelope streams: " + args);
        ++streams;
    }
    fs::remove_all(cache);
    v.note << " " << violations << " containment violations in 10^4 ops, " << separated
           << " false separations in 10^3 pairs, " << streams << " streams compared";
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "Euler identity at 60 digits", 5, euler_identity},
        {2, "Calabi chain", 120, calabi_chain},
        {3, "near-coincidence pairs A and B", 30, near_coincidences},
        {4, "Feynman period equals 1", 10, feynman},
        {5, "Mahler ratio 11/6", 300, mahler_ratio},
        {6, "local Riemann hypothesis p <= 50", 120, local_rh},
        {7, "Hasse bound p <= 23", 60, hasse},
        {8, "Veneziano amplitude", 60, veneziano_checks},
        {9, "zeta(2,1) = zeta(3)", 60, mzv_coincidence},
        {10, "Euler product convergence", 60, euler_product},
        {11, "property suites", 300, properties},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Verdict v;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.check(v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_s) v.require(false, "runtime limit " + std::to_string(c.limit_s) + " s");
        if (!v.pass) ++failed;
        std::printf("criterion %2d: %s  %7.2f s  %s%s\n", c.id, v.pass ? "PASS" : "FAIL", secs, c.title.c_str(),
                    v.note.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
