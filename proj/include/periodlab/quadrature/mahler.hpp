#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/precision/ball.hpp"
#include "periodlab/precision/elementary.hpp"
#include "periodlab/quadrature/laurent.hpp"
#include "periodlab/quadrature/tanh_sinh.hpp"

namespace periodlab {

inline constexpr int mahler_default_grid_log2 = 12;
inline constexpr long mahler_max_points = 1L << 26;

struct MahlerResult {
    Ball value;
    Rigor rigor;
    double step_difference = 0;
};

namespace detail {

using cld = std::complex<long double>;

/// Trapezoid sums of log|P| over grids of M, M/2 and M/4 points per
/// variable, accumulated in one pass over the fine grid, together with a
/// bound on the floating-point error of the fine sum.
struct TorusSums {
    long double fine = 0, coarse = 0, coarser = 0;
    long double fp_error = 0;
};

inline TorusSums torus_sums(const LaurentPoly& P, int grid_log2) {
    const int n = P.nvars();
    const long M = 1L << grid_log2;
    std::vector<cld> roots(static_cast<std::size_t>(M));
    const long double two_pi = 6.283185307179586476925286766559L;
    for (long j = 0; j < M; ++j) {
        long double a = two_pi * static_cast<long double>(j) / static_cast<long double>(M);
        roots[static_cast<std::size_t>(j)] = cld(std::cos(a), std::sin(a));
    }
    struct Term {
        std::vector<long> e;
        long double c;
    };
    std::vector<Term> terms;
    long double coef_sum = 0;
    for (const auto& [e, c] : P.terms()) {
        Term t{{}, static_cast<long double>(c)};
        for (int v : e) t.e.push_back(((static_cast<long>(v) % M) + M) % M);
        terms.push_back(std::move(t));
        coef_sum += std::fabs(static_cast<long double>(c));
    }
    const long double eps = std::numeric_limits<long double>::epsilon();
    long total = 1;
    for (int i = 0; i < n; ++i) total *= M;

    // Kahan-compensated sums; index digits in base M give the grid point
    long double sums[3] = {0, 0, 0}, comp[3] = {0, 0, 0};
    long double worst_rel = 0;
    auto add = [&](int which, long double v) {
        long double y = v - comp[which];
        long double t = sums[which] + y;
        comp[which] = (t - sums[which]) - y;
        sums[which] = t;
    };
    std::vector<long> idx(static_cast<std::size_t>(n), 0);
    for (long flat = 0; flat < total; ++flat) {
        long rest = flat;
        bool even = true, even4 = true;
        for (int i = 0; i < n; ++i) {
            idx[static_cast<std::size_t>(i)] = rest % M;
            rest /= M;
            even = even && idx[static_cast<std::size_t>(i)] % 2 == 0;
            even4 = even4 && idx[static_cast<std::size_t>(i)] % 4 == 0;
        }
        cld value(0, 0);
        for (const auto& t : terms) {
            long k = 0;
            for (int i = 0; i < n; ++i) k += t.e[static_cast<std::size_t>(i)] * idx[static_cast<std::size_t>(i)];
            value += t.c * roots[static_cast<std::size_t>(k % M)];
        }
        long double mag = std::abs(value);
        if (mag == 0) throw convergence_error("polynomial vanishes at a torus grid point");
        long double lg = std::log(mag);
        // error of |P| is about (terms + 2) eps sum|c|; of log|P| that over |P|
        long double rel = (static_cast<long double>(terms.size()) + 4) * coef_sum / mag + std::fabs(lg) + 1;
        if (rel > worst_rel) worst_rel = rel;
        add(0, lg);
        if (even) add(1, lg);
        if (even4) add(2, lg);
    }
    TorusSums s;
    const long double Mn = static_cast<long double>(total);
    s.fine = sums[0] / Mn;
    s.coarse = grid_log2 >= 1 ? sums[1] / (Mn / std::pow(2.0L, n)) : s.fine;
    s.coarser = grid_log2 >= 2 ? sums[2] / (Mn / std::pow(4.0L, n)) : s.coarse;
    s.fp_error = 4 * eps * worst_rel;
    return s;
}

} // namespace detail

/// Logarithmic Mahler measure under the normalised Haar measure, by the
/// tensor trapezoid rule with 2^grid_log2 points per variable. The radius
/// is the fine/coarse difference plus a floating-point bound; a monomial
/// times a constant is handled exactly (mu = log|c|).
inline MahlerResult mahler_measure(const LaurentPoly& P, int grid_log2, int prec) {
    if (P.is_zero()) throw domain_error("Mahler measure of the zero polynomial is undefined");
    if (P.nvars() > 3) throw domain_error("Mahler measure supports at most 3 variables");
    if (P.size() == 1) {
        std::int64_t c = P.terms().begin()->second;
        BigInt mag(c < 0 ? -c : c);
        return {log(Ball::from_integer(mag, prec)), Rigor::certified, 0};
    }
    if (grid_log2 < 2 || grid_log2 > 24) throw domain_error("grid_log2 must lie in [2, 24]");
    long total = 1;
    for (int i = 0; i < P.nvars(); ++i) {
        total *= 1L << grid_log2;
        if (total > mahler_max_points)
            throw resource_error("Mahler grid of 2^" + std::to_string(grid_log2) + " points per variable in " +
                                 std::to_string(P.nvars()) + " variables exceeds 2^26 points");
    }
    detail::TorusSums s = detail::torus_sums(P, grid_log2);
    long double diff = std::fabs(s.fine - s.coarse);
    long double prev = std::fabs(s.coarse - s.coarser);
    // Near a torus zero the rule converges slowly; when halving the step no
    // longer shrinks the difference the estimate cannot be trusted.
    if (diff > 100 * s.fp_error && diff >= prev)
        throw convergence_error("Mahler step-doubling difference is not decreasing (" +
                                std::to_string(static_cast<double>(diff)) + " >= " +
                                std::to_string(static_cast<double>(prev)) + "); the polynomial vanishes on or near the torus");
    const long double rad = diff + s.fp_error;
    Ball value = Ball::from_long_double(s.fine, rad, prec);
    return {value, Rigor::validated, static_cast<double>(diff)};
}

} // namespace periodlab
