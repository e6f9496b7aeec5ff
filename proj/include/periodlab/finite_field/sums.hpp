#pragma once

#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/finite_field/character.hpp"
#include "periodlab/finite_field/cyclotomic.hpp"
#include "periodlab/precision/complex.hpp"
#include "periodlab/precision/constants.hpp"

namespace periodlab {

namespace detail {

/// e^{2 pi i j / n} for j = 0 .. n-1, memoised per (n, digits).
inline const std::vector<ComplexBall>& unit_roots(long n, int digits) {
    static std::mutex mutex;
    static std::map<std::pair<long, int>, std::vector<ComplexBall>> memo;
    std::lock_guard lock(mutex);
    auto key = std::make_pair(n, digits);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<ComplexBall> roots;
    Ball unit = mul_2exp(const_pi(digits), 1) / Ball::from_int(n, digits);
    for (long j = 0; j < n; ++j) {
        auto [c, s] = cos_sin(mul_int(unit, j));
        roots.emplace_back(c, s);
    }
    return memo.emplace(key, std::move(roots)).first->second;
}

} // namespace detail

/// g(chi) = sum_{t=1}^{p-1} chi(t) e^{2 pi i t / p}; exactly -1 for the
/// trivial character.
inline ComplexBall gauss_sum(const DirichletCharacter& chi, int digits) {
    if (chi.is_trivial()) return {Ball::from_int(-1, digits), Ball(digits)};
    const int wd = digits + 5;
    const long p = chi.p(), m = chi.order();
    const auto& zp = detail::unit_roots(p, wd);
    const auto& zm = detail::unit_roots(m, wd);
    // group the terms by the value of chi, then one multiplication per value
    std::vector<ComplexBall> bucket(static_cast<std::size_t>(m), ComplexBall(wd));
    for (long t = 1; t < p; ++t) bucket[static_cast<std::size_t>(chi.exponent(t))] += zp[static_cast<std::size_t>(t)];
    ComplexBall g(wd);
    for (long k = 0; k < m; ++k) g += zm[static_cast<std::size_t>(k)] * bucket[static_cast<std::size_t>(k)];
    return {g.re.with_digits(digits), g.im.with_digits(digits)};
}

/// J(chi, chi') = sum_t chi(t) chi'(1 - t) in Z[zeta_M], M = lcm of the orders.
inline CyclotomicInt jacobi_sum_exact(const DirichletCharacter& a, const DirichletCharacter& b) {
    if (a.p() != b.p()) throw domain_error("Jacobi sum of characters modulo different primes");
    const long p = a.p();
    const long M = std::lcm(a.order(), b.order());
    if (M > max_cyclotomic_order) throw domain_error("Jacobi sum conductor above 200");
    IntPoly acc(static_cast<std::size_t>(M), 0);
    for (long t = 2; t < p; ++t) {
        long k = (a.exponent_in(t, M) + b.exponent_in(1 - t, M)) % M;
        acc[static_cast<std::size_t>(k)] += 1;
    }
    return CyclotomicInt::from_poly(static_cast<int>(M), std::move(acc));
}

namespace detail {

inline void require_nondegenerate(const DirichletCharacter& a, const DirichletCharacter& b) {
    if (a.p() != b.p()) throw domain_error("characters modulo different primes");
    if (a.is_trivial()) throw precondition_error("first character " + a.to_string() + " is trivial");
    if (b.is_trivial()) throw precondition_error("second character " + b.to_string() + " is trivial");
    if ((a * b).is_trivial())
        throw precondition_error("product character chi*chi' is trivial (" + a.to_string() + ", " + b.to_string() + ")");
}

} // namespace detail

struct WeilCheck {
    bool holds;
    CyclotomicInt jacobi;
    CyclotomicInt product; // J * conj(J)
};

/// J sigma(J) == p exactly, sigma: zeta -> zeta^-1.
inline WeilCheck weil_modulus_check(const DirichletCharacter& a, const DirichletCharacter& b) {
    detail::require_nondegenerate(a, b);
    CyclotomicInt J = jacobi_sum_exact(a, b);
    CyclotomicInt prod = J * J.conjugate();
    return {prod.is_constant(a.p()), J, prod};
}

/// |g(chi) g(chi') / g(chi chi') - J(chi, chi')| as a ball (it should contain 0).
/// Signals retry_precision when g(chi chi') cannot be separated from 0.
inline Ball gauss_jacobi_ratio_check(const DirichletCharacter& a, const DirichletCharacter& b, int digits) {
    detail::require_nondegenerate(a, b);
    const int wd = digits + 10;
    ComplexBall den = gauss_sum(a * b, wd);
    if (norm(den).contains_zero())
        throw retry_precision("Gauss sum denominator not separated from 0 at " + std::to_string(digits) + " digits",
                              2 * digits);
    ComplexBall ratio = gauss_sum(a, wd) * gauss_sum(b, wd) / den;
    ComplexBall diff = ratio - jacobi_sum_exact(a, b).embed(wd);
    return abs(diff).with_digits(digits);
}

/// Degenerate value J(chi, conj chi) = -chi(-1) for nontrivial chi.
inline long jacobi_degenerate_value(const DirichletCharacter& chi) {
    if (chi.is_trivial()) throw precondition_error("character is trivial");
    long k = chi.exponent(-1); // chi(-1) = +-1
    return (2 * k == chi.order()) ? 1 : -1;
}

} // namespace periodlab
