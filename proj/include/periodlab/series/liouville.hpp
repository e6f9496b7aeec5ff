#pragma once

#include "periodlab/error.hpp"
#include "periodlab/precision/ball.hpp"

namespace periodlab {

/// sum_{n>=1} 10^-n!. Summed exactly while (N+1)! <= digits + 2; the tail
/// is below 2 * 10^-(N+1)!.
inline Ball liouville_constant(int digits) {
    if (digits < 1) throw domain_error("precision must be positive");
    BigRational sum(0);
    unsigned long n = 1, fact = 1;
    for (;; ++n) {
        fact *= n;
        sum += BigRational(BigInt(1), ipow(10, fact));
        unsigned long next = fact * (n + 1);
        if (next > static_cast<unsigned long>(digits) + 2) {
            Ball l = Ball::from_rational(sum, digits);
            l.add_error(BigRational(BigInt(2), ipow(10, next)));
            return l;
        }
    }
}

} // namespace periodlab
