#pragma once

#include "periodlab/precision/ball.hpp"
#include "periodlab/precision/elementary.hpp"

namespace periodlab {

/// Rectangular complex ball: independent real and imaginary balls.
struct ComplexBall {
    Ball re, im;

    explicit ComplexBall(int digits = 16) : re(digits), im(digits) {}
    ComplexBall(Ball r, Ball i) : re(std::move(r)), im(std::move(i)) {}

    int digits() const { return std::min(re.digits(), im.digits()); }
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    bool overlaps(const ComplexBall& o) const { return re.overlaps(o.re) && im.overlaps(o.im); }
};

inline ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) { return {a.re + b.re, a.im + b.im}; }
inline ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) { return {a.re - b.re, a.im - b.im}; }
inline ComplexBall operator-(const ComplexBall& a) { return {-a.re, -a.im}; }
inline ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline ComplexBall& operator+=(ComplexBall& a, const ComplexBall& b) { return a = a + b; }

inline ComplexBall conj(const ComplexBall& a) { return {a.re, -a.im}; }

/// |a|^2.
inline Ball norm(const ComplexBall& a) { return sqr(a.re) + sqr(a.im); }

inline Ball abs(const ComplexBall& a) { return sqrt(norm(a)); }

/// Division; throws domain_error when |b|^2 contains 0.
inline ComplexBall operator/(const ComplexBall& a, const ComplexBall& b) {
    Ball d = norm(b);
    if (d.contains_zero()) throw domain_error("complex division by a ball containing 0");
    ComplexBall n = a * conj(b);
    return {n.re / d, n.im / d};
}

inline ComplexBall scale(const ComplexBall& a, const Ball& s) { return {a.re * s, a.im * s}; }

} // namespace periodlab
