#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>

#include "periodlab/precision/ball.hpp"

namespace periodlab {

struct CompareOutcome {
    enum class Status { overlap, separated };
    Status status = Status::overlap;
    int agree_digits = 0;       // certified shared leading significant digits
    int first_diff_digit = 0;   // agree_digits + 1 when separated, else 0
    std::optional<Ball> gap;    // |a - b| when separated
    std::string agreed_text;    // the shared leading digits, e.g. "13.36972333037750"
    int precision_used = 0;

    bool separated() const { return status == Status::separated; }
};

namespace detail {

/// Truncated significant-digit expansion of an exact mpfr value.
struct DecimalDigits {
    bool negative = false;
    bool zero = false;
    long exponent = 0; // value = 0.d1d2... * 10^exponent
    std::string digits;
};

inline DecimalDigits truncated_digits(mpfr_srcptr x, std::size_t n) {
    DecimalDigits out;
    if (mpfr_zero_p(x)) {
        out.zero = true;
        return out;
    }
    mpfr_exp_t e = 0;
    char* raw = mpfr_get_str(nullptr, &e, 10, n, x, MPFR_RNDZ);
    std::string s(raw);
    mpfr_free_str(raw);
    if (!s.empty() && s.front() == '-') {
        out.negative = true;
        s.erase(0, 1);
    }
    out.exponent = e;
    out.digits = s;
    return out;
}

inline std::size_t common_prefix(const DecimalDigits& a, const DecimalDigits& b) {
    if (a.zero || b.zero || a.negative != b.negative || a.exponent != b.exponent) return 0;
    std::size_t k = 0;
    while (k < a.digits.size() && k < b.digits.size() && a.digits[k] == b.digits[k]) ++k;
    return k;
}

/// Leading digits shared by every point of the ball (by its truncated endpoints).
inline DecimalDigits certain_digits(const Ball& x, std::size_t n) {
    mpfr_value lo = x.lower(), hi = x.upper();
    DecimalDigits l = truncated_digits(lo.get(), n), h = truncated_digits(hi.get(), n);
    std::size_t k = common_prefix(l, h);
    l.digits.resize(k);
    if (k == 0) l.zero = true;
    return l;
}

inline std::string format_prefix(const DecimalDigits& d, std::size_t k) {
    if (k == 0) return "";
    std::string s = d.digits.substr(0, k);
    std::string out = d.negative ? "-" : "";
    if (d.exponent <= 0) {
        out += "0." + std::string(static_cast<std::size_t>(-d.exponent), '0') + s;
    } else if (static_cast<std::size_t>(d.exponent) >= k) {
        out += s + std::string(static_cast<std::size_t>(d.exponent) - k, '0');
    } else {
        out += s.substr(0, static_cast<std::size_t>(d.exponent)) + "." + s.substr(static_cast<std::size_t>(d.exponent));
    }
    return out;
}

} // namespace detail

/// Certified comparison. Separated exactly when |mid a - mid b| > rad a + rad b.
/// For separated balls the agreement count is the common prefix of the digits
/// every point of each ball shares; for overlapping balls it is the number of
/// digits the combined radius leaves intact, capped by the precision.
inline CompareOutcome compare(const Ball& a, const Ball& b) {
    CompareOutcome out;
    const int cap = std::min(a.digits(), b.digits());
    out.precision_used = cap;
    BigRational dist = ::abs(a.mid_rational() - b.mid_rational());
    BigRational radii = a.rad_rational() + b.rad_rational();
    const std::size_t n = static_cast<std::size_t>(cap) + 10;
    if (a.is_exact() && b.is_exact() && dist == 0) {
        out.agree_digits = cap;
        detail::DecimalDigits d = detail::truncated_digits(a.mid(), static_cast<std::size_t>(cap));
        out.agreed_text = d.zero ? "0" : detail::format_prefix(d, d.digits.size());
        return out;
    }
    if (dist > radii) {
        detail::DecimalDigits da = detail::certain_digits(a, n), db = detail::certain_digits(b, n);
        std::size_t k = std::min<std::size_t>(detail::common_prefix(da, db), static_cast<std::size_t>(cap));
        out.status = CompareOutcome::Status::separated;
        out.agree_digits = static_cast<int>(k);
        out.agreed_text = detail::format_prefix(da, k);
        out.first_diff_digit = out.agree_digits + 1;
        out.gap = abs(a - b);
        return out;
    }
    // Overlap: digits implied by the combined radius relative to the magnitude.
    BigRational mag = ::abs(a.mid_rational());
    int k = cap;
    if (radii > 0) {
        if (mag == 0) {
            k = 0;
        } else {
            k = 0;
            BigRational scaled = mag / radii;
            while (k < cap && scaled >= 10) {
                scaled /= 10;
                ++k;
            }
        }
    }
    out.agree_digits = k;
    if (k > 0) {
        detail::DecimalDigits d = detail::truncated_digits(a.mid(), static_cast<std::size_t>(k));
        out.agreed_text = detail::format_prefix(d, d.digits.size());
    }
    return out;
}

inline const char* to_string(CompareOutcome::Status s) {
    return s == CompareOutcome::Status::overlap ? "overlap" : "separated";
}

} // namespace periodlab
