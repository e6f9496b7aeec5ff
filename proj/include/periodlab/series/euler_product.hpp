#pragma once

#include <string>

#include "periodlab/error.hpp"
#include "periodlab/precision/ball.hpp"
#include "periodlab/series/primes.hpp"

namespace periodlab {

/// prod_{p <= pmax} (1 - p^-s)^-1 = prod p^s / (p^s - 1).
inline Ball euler_product_partial(long s, long pmax, int digits) {
    if (s < 2) throw domain_error("Euler product needs s >= 2, got " + std::to_string(s));
    if (digits < 1) throw domain_error("precision must be positive");
    const int wd = digits + 5;
    Ball prod = Ball::from_int(1, wd);
    for (long p : primes_up_to(pmax)) {
        BigInt ps = ipow(p, static_cast<unsigned long>(s));
        prod = prod * (Ball::from_integer(ps, wd) / Ball::from_integer(ps - 1, wd));
    }
    return prod.with_digits(digits);
}

/// Same product as an exact rational (small pmax only).
inline BigRational euler_product_exact(long s, long pmax) {
    if (s < 2) throw domain_error("Euler product needs s >= 2, got " + std::to_string(s));
    if (pmax > 10000) throw resource_error("exact Euler product limited to pmax <= 10^4");
    BigRational prod(1);
    for (long p : primes_up_to(pmax)) {
        BigInt ps = ipow(p, static_cast<unsigned long>(s));
        prod *= BigRational(ps, ps - 1);
        prod.canonicalize();
    }
    return prod;
}

} // namespace periodlab
