#pragma once

#include <string>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/series/primes.hpp"

namespace periodlab {

inline constexpr long max_elliptic_prime = 10'000;

/// Point count of y^2 = x^3 + a x + b over F_p, including the point at infinity.
struct EllipticCount {
    long p, a, b;
    long N;
    long trace; // p + 1 - N
};

inline bool hasse_holds(long trace, long p) { return trace * trace <= 4 * p; }

inline EllipticCount elliptic_point_count(long a, long b, long p) {
    if (p > max_elliptic_prime) throw domain_error("point counting limited to p <= 10^4");
    if (p < 3 || !is_prime(p)) throw domain_error(std::to_string(p) + " is not an odd prime");
    auto mod = [p](long v) { return ((v % p) + p) % p; };
    const long am = mod(a), bm = mod(b);
    long disc = mod(4 * mod(am * am % p * am) + 27 * mod(bm * bm));
    if (disc == 0)
        throw domain_error("curve y^2 = x^3 + " + std::to_string(a) + "x + " + std::to_string(b) + " is singular mod " +
                           std::to_string(p));
    std::vector<long> roots(static_cast<std::size_t>(p), 0); // #{y : y^2 = r}
    for (long y = 0; y < p; ++y) ++roots[static_cast<std::size_t>(y * y % p)];
    long N = 1;
    for (long x = 0; x < p; ++x) N += roots[static_cast<std::size_t>(mod(x * x % p * x + am * x + bm))];
    EllipticCount out{p, a, b, N, p + 1 - N};
    return out;
}

} // namespace periodlab
