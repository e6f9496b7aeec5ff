#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/precision/ball.hpp"

namespace periodlab {

/// Index (s1, ..., sk) of zeta(s1, ..., sk) = sum_{n1 > ... > nk >= 1} prod n_i^-s_i.
struct MZVIndex {
    std::vector<long> exponents;

    long weight() const {
        long w = 0;
        for (long s : exponents) w += s;
        return w;
    }
    std::size_t depth() const { return exponents.size(); }
    bool admissible() const { return !exponents.empty() && exponents.front() >= 2; }

    /// Reverses an index written for the increasing summation n1 < ... < nk.
    static MZVIndex from_increasing(std::vector<long> exps) {
        std::reverse(exps.begin(), exps.end());
        return MZVIndex{std::move(exps)};
    }
};

inline std::string to_string(const MZVIndex& index) {
    std::string out = "(";
    for (std::size_t i = 0; i < index.exponents.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(index.exponents[i]);
    }
    return out + ")";
}

inline void require_admissible(const MZVIndex& index) {
    if (index.exponents.empty()) throw non_admissible_error("empty MZV index");
    for (long s : index.exponents)
        if (s < 1) throw non_admissible_error("MZV exponents must be positive integers: " + to_string(index));
    if (index.exponents.front() < 2)
        throw non_admissible_error("MZV index " + to_string(index) + " is not admissible: s1 = " +
                                   std::to_string(index.exponents.front()) + " < 2, the outer sum diverges");
}

namespace detail {

/// Words in x0 = dt/t, x1 = dt/(1-t); index (s1..sk) <-> x0^{s1-1} x1 ... x0^{sk-1} x1.
using Word = std::vector<int>;

inline Word word_of(const MZVIndex& index) {
    Word w;
    for (long s : index.exponents) {
        w.insert(w.end(), static_cast<std::size_t>(s - 1), 0);
        w.push_back(1);
    }
    return w;
}

/// Inverse of word_of; the word must end in x1.
inline std::vector<long> exponents_of(const Word& w) {
    std::vector<long> out;
    long run = 1;
    for (int letter : w) {
        if (letter == 0) {
            ++run;
        } else {
            out.push_back(run);
            run = 1;
        }
    }
    return out;
}

/// Terms needed so that sum_{n>N} 2^-n n^(k-1) < 10^-digits.
inline long half_polylog_terms(int digits, std::size_t depth) {
    long N = std::max<long>(4 * static_cast<long>(depth) + 4, 8);
    auto log10_tail = [&](long n) {
        return -static_cast<double>(n + 1) * std::log10(2.0) +
               static_cast<double>(depth - 1) * std::log10(static_cast<double>(n + 1)) + std::log10(4.0);
    };
    while (log10_tail(N) > -digits) N += 8;
    return N;
}

/// Rigorous bound for sum_{n>N} 2^-n n^(k-1), valid when N >= 4k.
inline BigRational half_polylog_tail(long N, std::size_t depth) {
    // consecutive ratio <= (1 + 1/(N+1))^(k-1) / 2 <= e^{1/4} / 2 < 2/3 for N >= 4k
    BigRational first = BigRational(ipow(N + 1, static_cast<unsigned long>(depth - 1))) /
                        BigRational(ipow(2, static_cast<unsigned long>(N + 1)));
    return first * 3;
}

/// Li_{s1..sk}(1/2) = sum_{n1>...>nk} 2^-n1 prod n_i^-s_i, s_i >= 1,
/// truncated at n1 <= N with the tail bound above.
inline Ball polylog_half(const std::vector<long>& s, int wd, long N) {
    const std::size_t k = s.size();
    if (k == 0) return Ball::from_int(1, wd);
    // c[i]: partial sums of the inner chain starting at position i (i >= 1)
    std::vector<Ball> c(k + 1, Ball(wd));
    c[k] = Ball::from_int(1, wd); // empty chain
    Ball total(wd);
    Ball half_pow = Ball::from_int(1, wd);
    for (long n = 1; n <= N; ++n) {
        half_pow = mul_2exp(half_pow, -1);
        Ball nb = Ball::from_int(n, wd);
        for (std::size_t i = 0; i < k; ++i) {
            // uses c[i+1] from step n-1, so update in increasing i
            Ball t = c[i + 1] / pow_int(nb, s[i]);
            if (i == 0)
                total += half_pow * t;
            else
                c[i] += t;
        }
    }
    total.add_error(half_polylog_tail(N, k));
    return total;
}

} // namespace detail

/// Multiple zeta value. The iterated integral over 1 > t1 > ... > tw > 0 is
/// split at t = 1/2; the upper piece becomes, after t -> 1 - t, a multiple
/// polylogarithm at 1/2 of the swapped reversed word, so
///   zeta(w) = sum_j Li(swap(a_j ... a_1))(1/2) Li(a_{j+1} ... a_w)(1/2).
/// All series converge like 2^-n and carry explicit tail bounds.
inline Ball mzv(const MZVIndex& index, int digits, long N = 0) {
    require_admissible(index);
    if (digits < 1) throw domain_error("precision must be positive");
    const detail::Word w = detail::word_of(index);
    const std::size_t weight = w.size();
    const int wd = digits + 5 + static_cast<int>(std::log10(static_cast<double>(weight) + 1)) + 1;
    if (N <= 0) N = detail::half_polylog_terms(wd + 2, weight);
    if (N < 4 * static_cast<long>(weight)) throw domain_error("MZV truncation point too small for the tail bound");
    Ball sum(wd);
    for (std::size_t j = 0; j <= weight; ++j) {
        detail::Word left;
        for (std::size_t i = j; i-- > 0;) left.push_back(1 - w[i]);
        detail::Word right(w.begin() + static_cast<long>(j), w.end());
        Ball a = detail::polylog_half(detail::exponents_of(left), wd, N);
        Ball b = detail::polylog_half(detail::exponents_of(right), wd, N);
        sum += a * b;
    }
    return sum.with_digits(digits);
}

inline Ball mzv(const std::vector<long>& exponents, int digits) {
    return mzv(MZVIndex{exponents}, digits);
}

} // namespace periodlab
