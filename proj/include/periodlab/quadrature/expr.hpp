#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/precision/ball.hpp"
#include "periodlab/precision/elementary.hpp"

namespace periodlab {

/// Expression tree in one variable x.
class IntegrandExpr {
  public:
    enum class Kind { constant, variable, add, sub, mul, div, neg, power, sqrt, log, abs };

    static IntegrandExpr constant(BigRational value) {
        IntegrandExpr e(Kind::constant);
        e.node_->value = std::move(value);
        return e;
    }
    static IntegrandExpr variable() { return IntegrandExpr(Kind::variable); }
    static IntegrandExpr binary(Kind kind, IntegrandExpr lhs, IntegrandExpr rhs) {
        IntegrandExpr e(kind);
        e.node_->children = {std::move(lhs), std::move(rhs)};
        return e;
    }
    static IntegrandExpr unary(Kind kind, IntegrandExpr arg) {
        IntegrandExpr e(kind);
        e.node_->children = {std::move(arg)};
        return e;
    }
    static IntegrandExpr power(IntegrandExpr base, long exponent) {
        IntegrandExpr e(Kind::power);
        e.node_->children = {std::move(base)};
        e.node_->exponent = exponent;
        return e;
    }

    Kind kind() const { return node_->kind; }
    const BigRational& value() const { return node_->value; }
    long exponent() const { return node_->exponent; }
    const IntegrandExpr& child(std::size_t i) const { return node_->children.at(i); }
    std::size_t arity() const { return node_->children.size(); }

    /// Ball evaluation; throws domain_error where the expression is undefined.
    Ball evaluate(const Ball& x) const {
        switch (kind()) {
        case Kind::constant: return Ball::from_rational(value(), x.digits());
        case Kind::variable: return x;
        case Kind::add: return child(0).evaluate(x) + child(1).evaluate(x);
        case Kind::sub: return child(0).evaluate(x) - child(1).evaluate(x);
        case Kind::mul: return child(0).evaluate(x) * child(1).evaluate(x);
        case Kind::div: return child(0).evaluate(x) / child(1).evaluate(x);
        case Kind::neg: return -child(0).evaluate(x);
        case Kind::power: return pow_int(child(0).evaluate(x), exponent());
        case Kind::sqrt: return periodlab::sqrt(child(0).evaluate(x));
        case Kind::log: return periodlab::log(child(0).evaluate(x));
        case Kind::abs: return periodlab::abs(child(0).evaluate(x));
        }
        throw domain_error("bad expression node");
    }

    /// Exact value at a rational point when only rational operations occur
    /// (sqrt and log of perfect values are not recognised).
    std::optional<BigRational> evaluate_exact(const BigRational& x) const {
        auto sub = [&](std::size_t i) { return child(i).evaluate_exact(x); };
        switch (kind()) {
        case Kind::constant: return value();
        case Kind::variable: return x;
        case Kind::neg: {
            auto a = sub(0);
            if (!a) return std::nullopt;
            return BigRational(-*a);
        }
        case Kind::abs: {
            auto a = sub(0);
            if (!a) return std::nullopt;
            return BigRational(::abs(*a));
        }
        case Kind::power: {
            auto a = sub(0);
            if (!a) return std::nullopt;
            if (*a == 0 && exponent() < 0) throw domain_error("division by zero");
            BigRational r(1);
            for (long i = 0; i < (exponent() < 0 ? -exponent() : exponent()); ++i) r *= *a;
            if (exponent() < 0) r = 1 / r;
            return r;
        }
        case Kind::add:
        case Kind::sub:
        case Kind::mul:
        case Kind::div: {
            auto a = sub(0), b = sub(1);
            if (!a || !b) return std::nullopt;
            switch (kind()) {
            case Kind::add: return BigRational(*a + *b);
            case Kind::sub: return BigRational(*a - *b);
            case Kind::mul: return BigRational(*a * *b);
            default:
                if (*b == 0) throw domain_error("division by zero");
                return BigRational(*a / *b);
            }
        }
        case Kind::sqrt:
        case Kind::log: return std::nullopt;
        }
        return std::nullopt;
    }

    std::string to_string() const {
        switch (kind()) {
        case Kind::constant: return value().get_str();
        case Kind::variable: return "x";
        case Kind::add: return "(" + child(0).to_string() + " + " + child(1).to_string() + ")";
        case Kind::sub: return "(" + child(0).to_string() + " - " + child(1).to_string() + ")";
        case Kind::mul: return "(" + child(0).to_string() + " * " + child(1).to_string() + ")";
        case Kind::div: return "(" + child(0).to_string() + " / " + child(1).to_string() + ")";
        case Kind::neg: return "-" + child(0).to_string();
        case Kind::power: return child(0).to_string() + "^" + std::to_string(exponent());
        case Kind::sqrt: return "sqrt(" + child(0).to_string() + ")";
        case Kind::log: return "log(" + child(0).to_string() + ")";
        case Kind::abs: return "abs(" + child(0).to_string() + ")";
        }
        return "?";
    }

  private:
    struct Node {
        Kind kind;
        BigRational value;
        long exponent = 0;
        std::vector<IntegrandExpr> children;
    };

    explicit IntegrandExpr(Kind kind) : node_(std::make_shared<Node>()) { node_->kind = kind; }

    std::shared_ptr<Node> node_;
};

} // namespace periodlab
