#pragma once

#include <cstdint>
#include <vector>

#include "periodlab/error.hpp"

namespace periodlab {

inline constexpr long max_sieve_limit = 10'000'000;

/// Primes up to n by the sieve of Eratosthenes.
inline std::vector<long> primes_up_to(long n) {
    if (n > max_sieve_limit) throw resource_error("prime sieve limit is 10^7");
    std::vector<long> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
    for (long i = 2; i <= n; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        out.push_back(i);
        for (long j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
    return out;
}

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace periodlab
