#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/precision/complex.hpp"
#include "periodlab/precision/constants.hpp"

namespace periodlab {

/// Integer polynomial, coefficients from x^0 upward.
using IntPoly = std::vector<std::int64_t>;

inline constexpr int max_cyclotomic_order = 200;

inline long euler_phi(long m) {
    long result = m;
    for (long q = 2; q * q <= m; ++q) {
        if (m % q) continue;
        while (m % q == 0) m /= q;
        result -= result / q;
    }
    if (m > 1) result -= result / m;
    return result;
}

namespace detail {

/// Exact quotient of a by a monic divisor b; throws if the remainder is nonzero.
inline IntPoly exact_divide(IntPoly a, const IntPoly& b) {
    const std::size_t db = b.size() - 1;
    if (a.size() < b.size()) throw domain_error("polynomial division: degree too small");
    IntPoly q(a.size() - db, 0);
    for (std::size_t i = a.size(); i-- > db;) {
        std::int64_t c = a[i];
        q[i - db] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    for (std::size_t i = 0; i < db; ++i)
        if (a[i] != 0) throw domain_error("polynomial division is not exact");
    return q;
}

} // namespace detail

/// m-th cyclotomic polynomial: (x^m - 1) divided by Phi_d for each proper divisor d.
inline const IntPoly& cyclotomic_poly(int m) {
    if (m < 1 || m > max_cyclotomic_order) throw domain_error("cyclotomic order must lie in [1, 200]");
    static std::mutex mutex;
    static std::map<int, IntPoly> memo;
    {
        std::lock_guard lock(mutex);
        if (auto it = memo.find(m); it != memo.end()) return it->second;
    }
    IntPoly p(static_cast<std::size_t>(m) + 1, 0);
    p[0] = -1;
    p[static_cast<std::size_t>(m)] = 1;
    for (int d = 1; d < m; ++d)
        if (m % d == 0) p = detail::exact_divide(p, cyclotomic_poly(d));
    std::lock_guard lock(mutex);
    return memo.emplace(m, std::move(p)).first->second;
}

/// Element of Z[zeta_m] in the basis 1, zeta, ..., zeta^{phi(m)-1}.
class CyclotomicInt {
  public:
    explicit CyclotomicInt(int m = 1) : m_(m), c_(static_cast<std::size_t>(euler_phi(m)), 0) { cyclotomic_poly(m); }

    /// Reduces a polynomial in zeta_m of any degree.
    static CyclotomicInt from_poly(int m, IntPoly p) {
        CyclotomicInt r(m);
        const IntPoly& phi = cyclotomic_poly(m);
        const std::size_t d = phi.size() - 1;
        // x^m = 1 first, then division by the monic Phi_m
        if (p.size() > static_cast<std::size_t>(m)) {
            for (std::size_t i = static_cast<std::size_t>(m); i < p.size(); ++i) p[i % static_cast<std::size_t>(m)] += p[i];
            p.resize(static_cast<std::size_t>(m));
        }
        for (std::size_t i = p.size(); i-- > d;) {
            std::int64_t c = p[i];
            if (c == 0) continue;
            for (std::size_t j = 0; j <= d; ++j) {
                if (__builtin_sub_overflow(p[i - d + j], c * phi[j], &p[i - d + j]))
                    throw resource_error("cyclotomic coefficient overflow");
            }
        }
        for (std::size_t i = 0; i < d && i < p.size(); ++i) r.c_[i] = p[i];
        return r;
    }

    static CyclotomicInt constant(int m, std::int64_t v) {
        CyclotomicInt r(m);
        r.c_[0] = v;
        return r;
    }

    /// zeta_m^j.
    static CyclotomicInt root_power(int m, long j) {
        long k = ((j % m) + m) % m;
        IntPoly p(static_cast<std::size_t>(k) + 1, 0);
        p[static_cast<std::size_t>(k)] = 1;
        return from_poly(m, std::move(p));
    }

    int conductor() const { return m_; }
    const std::vector<std::int64_t>& coeffs() const { return c_; }

    bool is_constant(std::int64_t v) const {
        if (c_.empty() || c_[0] != v) return false;
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    friend bool operator==(const CyclotomicInt& a, const CyclotomicInt& b) { return a.m_ == b.m_ && a.c_ == b.c_; }

    friend CyclotomicInt operator+(const CyclotomicInt& a, const CyclotomicInt& b) {
        a.same_ring(b);
        CyclotomicInt r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }
    friend CyclotomicInt operator-(const CyclotomicInt& a, const CyclotomicInt& b) {
        a.same_ring(b);
        CyclotomicInt r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
        return r;
    }
    friend CyclotomicInt operator*(const CyclotomicInt& a, const CyclotomicInt& b) {
        a.same_ring(b);
        IntPoly p(a.c_.size() + b.c_.size(), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                std::int64_t t;
                if (__builtin_mul_overflow(a.c_[i], b.c_[j], &t) || __builtin_add_overflow(p[i + j], t, &p[i + j]))
                    throw resource_error("cyclotomic coefficient overflow");
            }
        }
        return from_poly(a.m_, std::move(p));
    }
    CyclotomicInt& operator+=(const CyclotomicInt& b) { return *this = *this + b; }

    /// The automorphism zeta -> zeta^-1 (complex conjugation).
    CyclotomicInt conjugate() const {
        IntPoly p(static_cast<std::size_t>(m_), 0);
        for (std::size_t i = 0; i < c_.size(); ++i) p[(static_cast<std::size_t>(m_) - i) % static_cast<std::size_t>(m_)] += c_[i];
        return from_poly(m_, std::move(p));
    }

    /// Complex value at zeta_m = e^{2 pi i / m}.
    ComplexBall embed(int digits) const {
        const int wd = digits + 5;
        ComplexBall sum(wd);
        Ball angle_unit = mul_2exp(const_pi(wd), 1) / Ball::from_int(m_, wd);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            auto [c, s] = cos_sin(mul_int(angle_unit, static_cast<long>(i)));
            Ball k = Ball::from_int(c_[i], wd);
            sum += ComplexBall(c * k, s * k);
        }
        return {sum.re.with_digits(digits), sum.im.with_digits(digits)};
    }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            std::int64_t v = c_[i];
            if (!out.empty()) out += v < 0 ? " - " : " + ";
            else if (v < 0) out += "-";
            std::int64_t mag = v < 0 ? -v : v;
            if (i == 0)
                out += std::to_string(mag);
            else {
                if (mag != 1) out += std::to_string(mag) + "*";
                out += "z" + std::to_string(m_) + (i == 1 ? "" : "^" + std::to_string(i));
            }
        }
        return out.empty() ? "0" : out;
    }

  private:
    void same_ring(const CyclotomicInt& b) const {
        if (m_ != b.m_) throw domain_error("cyclotomic integers from different rings");
    }

    int m_;
    std::vector<std::int64_t> c_;
};

/// Lifts x in Z[zeta_m] to Z[zeta_M] for m | M.
inline CyclotomicInt lift(const CyclotomicInt& x, int M) {
    if (M % x.conductor() != 0) throw domain_error("lift target must be a multiple of the conductor");
    IntPoly p(static_cast<std::size_t>(M), 0);
    const int step = M / x.conductor();
    for (std::size_t i = 0; i < x.coeffs().size(); ++i) p[i * static_cast<std::size_t>(step)] += x.coeffs()[i];
    return CyclotomicInt::from_poly(M, std::move(p));
}

} // namespace periodlab
