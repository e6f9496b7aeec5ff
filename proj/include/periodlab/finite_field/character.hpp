#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/series/primes.hpp"

namespace periodlab {

inline constexpr long max_character_prime = 1'000'000;

inline long pow_mod(long b, long e, long p) {
    long long r = 1, x = b % p;
    if (x < 0) x += p;
    while (e > 0) {
        if (e & 1) r = r * x % p;
        x = x * x % p;
        e >>= 1;
    }
    return static_cast<long>(r);
}

inline std::vector<long> prime_factors(long n) {
    std::vector<long> out;
    for (long q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        out.push_back(q);
        while (n % q == 0) n /= q;
    }
    if (n > 1) out.push_back(n);
    return out;
}

/// Smallest primitive root modulo an odd prime p.
inline long primitive_root(long p) {
    if (p > max_character_prime) throw domain_error("primitive root limited to p <= 10^6");
    if (!is_prime(p)) throw domain_error(std::to_string(p) + " is not prime");
    if (p == 2) throw domain_error("p must be an odd prime");
    const auto qs = prime_factors(p - 1);
    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (long q : qs)
            if (pow_mod(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw domain_error("no primitive root found");
}

/// Discrete logarithms base the smallest primitive root; dlog[0] unused.
struct DlogTable {
    long p;
    long g;
    std::vector<long> dlog;
};

inline std::shared_ptr<const DlogTable> dlog_table(long p) {
    static std::mutex mutex;
    static std::map<long, std::shared_ptr<const DlogTable>> tables;
    std::lock_guard lock(mutex);
    auto& slot = tables[p];
    if (!slot) {
        auto t = std::make_shared<DlogTable>();
        t->p = p;
        t->g = primitive_root(p);
        t->dlog.assign(static_cast<std::size_t>(p), 0);
        long x = 1;
        for (long k = 0; k < p - 1; ++k) {
            t->dlog[static_cast<std::size_t>(x)] = k;
            x = x * t->g % p;
        }
        slot = t;
    }
    return slot;
}

/// Multiplicative character of F_p^* with chi(g) = zeta_m^a for the smallest
/// primitive root g, extended by chi(0) = 0. (p, m, a) is normalised so that
/// gcd(a, m) = 1 and m is the exact order (m = 1 for the trivial character).
class DirichletCharacter {
  public:
    DirichletCharacter(long p, long m, long a) : table_(dlog_table(p)) {
        if (m < 1 || (p - 1) % m != 0)
            throw domain_error("character order " + std::to_string(m) + " must divide p - 1 = " + std::to_string(p - 1));
        a = ((a % m) + m) % m;
        long g = std::gcd(a, m);
        if (a == 0) g = m;
        m_ = m / g;
        a_ = a / g;
    }

    long p() const { return table_->p; }
    long order() const { return m_; }
    long index() const { return a_; }
    long generator() const { return table_->g; }
    bool is_trivial() const { return m_ == 1; }

    /// chi(x) = zeta_order^k; returns k, or -1 when x = 0 mod p.
    long exponent(long x) const {
        long r = ((x % p()) + p()) % p();
        if (r == 0) return -1;
        return a_ * table_->dlog[static_cast<std::size_t>(r)] % m_;
    }

    /// Same in zeta_M with order | M.
    long exponent_in(long x, long M) const {
        long k = exponent(x);
        return k < 0 ? -1 : k * (M / m_);
    }

    friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b) {
        if (a.p() != b.p()) throw domain_error("characters modulo different primes");
        long L = std::lcm(a.m_, b.m_);
        return DirichletCharacter(a.p(), L, a.a_ * (L / a.m_) + b.a_ * (L / b.m_));
    }

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
        return a.p() == b.p() && a.m_ == b.m_ && a.a_ == b.a_;
    }

    std::string to_string() const {
        return "chi(p=" + std::to_string(p()) + ", m=" + std::to_string(m_) + ", a=" + std::to_string(a_) + ")";
    }

  private:
    std::shared_ptr<const DlogTable> table_;
    long m_ = 1, a_ = 0;
};

/// All p - 1 characters, chi_j(g) = zeta_{p-1}^j for j = 0 .. p-2.
inline std::vector<DirichletCharacter> all_characters(long p) {
    std::vector<DirichletCharacter> out;
    for (long j = 0; j < p - 1; ++j) out.emplace_back(p, p - 1, j);
    return out;
}

} // namespace periodlab
