#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/precision/ball.hpp"
#include "periodlab/precision/constants.hpp"
#include "periodlab/precision/elementary.hpp"

namespace periodlab {

/// How an error radius was obtained.
enum class Rigor { certified, validated };

inline const char* to_string(Rigor r) { return r == Rigor::certified ? "certified" : "validated"; }

/// Integration endpoint: a rational or +-infinity.
struct Endpoint {
    std::optional<BigRational> value;
    int infinity = 0; // -1 or +1 when value is empty

    static Endpoint finite(BigRational v) { return Endpoint{std::move(v), 0}; }
    static Endpoint pos_inf() { return Endpoint{std::nullopt, 1}; }
    static Endpoint neg_inf() { return Endpoint{std::nullopt, -1}; }
    bool is_finite() const { return value.has_value(); }
};

inline std::string to_string(const Endpoint& e) {
    if (e.is_finite()) return e.value->get_str();
    return e.infinity > 0 ? "inf" : "-inf";
}

struct Interval {
    Endpoint a, b;
};

/// 1 > t1 > ... > tk > 0.
struct Simplex {
    int k;
};

/// n-torus with normalised Haar measure.
struct Torus {
    int n;
};

/// Sample handed to integrands. `left` = x - a and `right` = b - x are
/// formed without cancellation; they are only meaningful at finite ends.
struct Point {
    Ball x;
    Ball left;
    Ball right;
};

namespace detail {

/// Tanh-sinh abscissa u = tanh(pi/2 sinh t) for t >= 0 with 1 - u, 1 + u
/// and the weight (pi/2) cosh t / cosh^2(pi/2 sinh t), all computed from
/// E = exp(-pi sinh t) so that 1 - u keeps full relative accuracy.
struct TanhSinhNode {
    Ball u, one_minus_u, one_plus_u, weight;
};

class TanhSinhTable {
  public:
    explicit TanhSinhTable(int wd) : wd_(wd), pi_(const_pi(wd)) {
        t_max_ = std::asinh(wd * std::log(10.0) / M_PI);
    }

    int digits() const { return wd_; }
    double t_max() const { return t_max_; }

    /// Nodes with t = k 2^-level, k odd (level 0: every k >= 0), t <= t_max.
    const std::vector<TanhSinhNode>& level(int L) {
        std::lock_guard lock(mutex_);
        while (static_cast<int>(levels_.size()) <= L) build(static_cast<int>(levels_.size()));
        return levels_[static_cast<std::size_t>(L)];
    }

  private:
    void build(int L) {
        std::vector<TanhSinhNode> nodes;
        const double h = std::ldexp(1.0, -L);
        for (long k = (L == 0 ? 0 : 1);; k += (L == 0 ? 1 : 2)) {
            double t = static_cast<double>(k) * h;
            if (t > t_max_) break;
            nodes.push_back(node(mul_2exp(Ball::from_int(k, wd_), -L)));
        }
        levels_.push_back(std::move(nodes));
    }

    TanhSinhNode node(const Ball& t) const {
        Ball one = Ball::from_int(1, wd_);
        Ball et = exp(t);
        Ball inv = one / et;
        Ball sinh_t = mul_2exp(et - inv, -1);
        Ball cosh_t = mul_2exp(et + inv, -1);
        Ball E = exp(-(pi_ * sinh_t));
        Ball d = one + E;
        TanhSinhNode n;
        n.one_minus_u = mul_2exp(E / d, 1);
        n.one_plus_u = Ball::from_int(2, wd_) / d;
        n.u = (one - E) / d;
        n.weight = mul_2exp(pi_ * cosh_t * E / sqr(d), 1);
        return n;
    }

    int wd_;
    Ball pi_;
    double t_max_;
    std::mutex mutex_;
    std::vector<std::vector<TanhSinhNode>> levels_;
};

inline TanhSinhTable& tanh_sinh_table(int wd) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<TanhSinhTable>> tables;
    std::lock_guard lock(mutex);
    auto& slot = tables[wd];
    if (!slot) slot = std::make_unique<TanhSinhTable>(wd);
    return *slot;
}

/// Point and Jacobian for abscissa u in (-1, 1) with 1 - u, 1 + u given.
struct Mapped {
    Point p;
    Ball jacobian;
};

inline Mapped map_to_interval(const Interval& dom, const Ball& u, const Ball& omu, const Ball& opu, int wd) {
    Ball one = Ball::from_int(1, wd);
    if (dom.a.is_finite() && dom.b.is_finite()) {
        Ball a = Ball::from_rational(*dom.a.value, wd);
        Ball half = mul_2exp(Ball::from_rational(*dom.b.value - *dom.a.value, wd), -1);
        Ball left = half * opu;
        Ball right = half * omu;
        return {{a + left, left, right}, half};
    }
    if (dom.a.is_finite()) {
        Ball a = Ball::from_rational(*dom.a.value, wd);
        Ball left = opu / omu;
        return {{a + left, left, left}, Ball::from_int(2, wd) / sqr(omu)};
    }
    if (dom.b.is_finite()) {
        Ball b = Ball::from_rational(*dom.b.value, wd);
        Ball right = omu / opu;
        return {{b - right, right, right}, Ball::from_int(2, wd) / sqr(opu)};
    }
    Ball prod = omu * opu;
    Ball x = u / prod;
    return {{x, x, x}, (one + sqr(u)) / sqr(prod)};
}

inline void check_interval(const Interval& dom) {
    if (dom.a.is_finite() && dom.b.is_finite()) {
        if (!(*dom.a.value < *dom.b.value)) throw domain_error("interval needs a < b");
        return;
    }
    if (!dom.a.is_finite() && dom.a.infinity > 0) throw domain_error("lower endpoint cannot be +inf");
    if (!dom.b.is_finite() && dom.b.infinity < 0) throw domain_error("upper endpoint cannot be -inf");
}

inline constexpr int max_tanh_sinh_level = 12;

/// Upper bound of |b| as a rational.
inline BigRational magnitude_bound(const Ball& b) {
    return ::abs(b.mid_rational()) + b.rad_rational();
}

} // namespace detail

/// Outcome of a quadrature with its diagnostics.
struct QuadratureResult {
    Ball value;
    int levels = 0;
    double error_estimate = 0;
    Rigor rigor = Rigor::validated;
};

/// Tanh-sinh quadrature of f over an interval. f receives a Point and
/// returns a Ball. Works at 2 prec + 10 digits internally; the step is
/// halved until consecutive estimates differ by less than 10^-(prec+2),
/// and that difference plus the last retained term enter the radius.
template <class F>
QuadratureResult integrate_points(const F& f, const Interval& dom, int prec) {
    detail::check_interval(dom);
    if (prec < 1) throw domain_error("precision must be positive");
    const int wd = 2 * prec + 10;
    detail::TanhSinhTable& table = detail::tanh_sinh_table(wd);
    const BigRational target(BigInt(1), ipow(10, static_cast<unsigned long>(prec + 2)));

    auto contribution = [&](const detail::TanhSinhNode& n, bool mirrored) {
        Ball u = mirrored ? -n.u : n.u;
        const Ball& omu = mirrored ? n.one_plus_u : n.one_minus_u;
        const Ball& opu = mirrored ? n.one_minus_u : n.one_plus_u;
        detail::Mapped m = detail::map_to_interval(dom, u, omu, opu, wd);
        return n.weight * m.jacobian * f(m.p);
    };

    // level sums without the step factor h
    Ball raw(wd);
    Ball outer_term(wd);
    const auto& base = table.level(0);
    for (std::size_t i = 0; i < base.size(); ++i) {
        Ball c = contribution(base[i], false);
        if (i > 0) c += contribution(base[i], true);
        raw += c;
        if (i + 1 == base.size()) outer_term = c;
    }
    Ball estimate = raw;
    std::optional<BigRational> prev_diff;
    for (int L = 1; L <= detail::max_tanh_sinh_level; ++L) {
        Ball fresh(wd);
        for (const auto& n : table.level(L)) fresh += contribution(n, false) + contribution(n, true);
        raw += fresh;
        Ball next = mul_2exp(raw, -L);
        BigRational diff = ::abs(next.mid_rational() - estimate.mid_rational());
        estimate = next;
        if (L >= 3 && diff < target) {
            Ball value = estimate;
            value.add_error(diff);
            value.add_error(detail::magnitude_bound(outer_term));
            return {value.with_digits(prec), L, diff.get_d(), Rigor::validated};
        }
        if (L == detail::max_tanh_sinh_level) {
            if (prev_diff && diff >= *prev_diff)
                throw convergence_error("tanh-sinh step halving stopped converging (difference " +
                                        std::to_string(diff.get_d()) + ")");
            Ball value = estimate;
            value.add_error(diff);
            value.add_error(detail::magnitude_bound(outer_term));
            return {value.with_digits(prec), L, diff.get_d(), Rigor::validated};
        }
        prev_diff = diff;
    }
    throw convergence_error("tanh-sinh did not converge");
}

/// Integral of a parsed expression in x.
template <class Expr>
Ball integrate_1d(const Expr& f, const Interval& dom, int prec) {
    return integrate_points([&](const Point& p) { return f.evaluate(p.x); }, dom, prec).value;
}

/// Tensor tanh-sinh over (0,1)^2; f(Point u, Point v). Same stopping rule.
template <class F>
QuadratureResult integrate_unit_square(const F& f, int prec, int max_level = 8) {
    const int wd = 2 * prec + 10;
    detail::TanhSinhTable& table = detail::tanh_sinh_table(wd);
    const BigRational target(BigInt(1), ipow(10, static_cast<unsigned long>(prec + 2)));
    const Interval unit{Endpoint::finite(0), Endpoint::finite(1)};
    struct Sample {
        Point p;
        Ball w; // weight times Jacobian
    };
    std::vector<std::vector<Sample>> by_level;
    auto samples_of = [&](int L) {
        std::vector<Sample> out;
        const auto& nodes = table.level(L);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (bool mirrored : {false, true}) {
                if (mirrored && L == 0 && i == 0) continue;
                const auto& n = nodes[i];
                Ball u = mirrored ? -n.u : n.u;
                detail::Mapped m = detail::map_to_interval(unit, u, mirrored ? n.one_plus_u : n.one_minus_u,
                                                           mirrored ? n.one_minus_u : n.one_plus_u, wd);
                out.push_back({m.p, n.weight * m.jacobian});
            }
        }
        return out;
    };
    std::vector<Sample> all;
    Ball raw(wd);
    std::optional<Ball> estimate;
    std::optional<BigRational> prev_diff;
    for (int L = 0; L <= max_level; ++L) {
        std::vector<Sample> fresh = samples_of(L);
        // new grid points: (fresh x all) + (all x fresh) + (fresh x fresh)
        Ball add(wd);
        for (const auto& a : fresh) {
            for (const auto& b : all) add += a.w * b.w * (f(a.p, b.p) + f(b.p, a.p));
            for (const auto& b : fresh) add += a.w * b.w * f(a.p, b.p);
        }
        all.insert(all.end(), fresh.begin(), fresh.end());
        raw += add;
        Ball next = mul_2exp(raw, -2 * L);
        if (estimate) {
            BigRational diff = ::abs(next.mid_rational() - estimate->mid_rational());
            if (L >= 3 && diff < target) {
                next.add_error(diff);
                return {next.with_digits(prec), L, diff.get_d(), Rigor::validated};
            }
            if (L == max_level) {
                if (prev_diff && diff >= *prev_diff)
                    throw convergence_error("2-D tanh-sinh step halving stopped converging");
                next.add_error(diff);
                return {next.with_digits(prec), L, diff.get_d(), Rigor::validated};
            }
            prev_diff = diff;
        }
        estimate = next;
    }
    throw convergence_error("2-D tanh-sinh did not converge");
}

} // namespace periodlab
