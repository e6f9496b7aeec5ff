#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "periodlab/error.hpp"
#include "periodlab/precision/rational.hpp"
#include "periodlab/quadrature/expr.hpp"
#include "periodlab/quadrature/laurent.hpp"
#include "periodlab/quadrature/tanh_sinh.hpp"

namespace periodlab {

namespace detail {

class Cursor {
  public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    bool at_end() { return peek() == '\0'; }
    std::size_t pos() const { return pos_; }

    [[noreturn]] void fail(const std::string& what) const { throw parse_error(what, pos_); }

    std::string identifier() {
        skip_ws();
        std::string out;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) out.push_back(text_[pos_++]);
        return out;
    }
    std::string digits() {
        skip_ws();
        std::string out;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) out.push_back(text_[pos_++]);
        return out;
    }
    void rewind(std::size_t p) { pos_ = p; }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

/// Signed integer exponent: n, -n, or a parenthesised (n) / (-n).
inline long parse_int_exponent(Cursor& c) {
    bool paren = c.accept('(');
    bool neg = c.accept('-');
    if (!neg) c.accept('+');
    std::size_t at = c.pos();
    std::string d = c.digits();
    if (d.empty()) c.fail("exponent must be an integer");
    if (d.size() > 6) throw parse_error("exponent too large", at);
    if (paren) {
        if (c.peek() == '/' || c.peek() == '.') c.fail("exponent must be an integer");
        c.expect(')');
    } else if (c.peek() == '.') {
        c.fail("exponent must be an integer");
    }
    long v = std::stol(d);
    return neg ? -v : v;
}

class ExprParser {
  public:
    explicit ExprParser(std::string_view text) : c_(text) {}

    IntegrandExpr parse() {
        if (c_.at_end()) c_.fail("empty expression");
        IntegrandExpr e = sum();
        if (!c_.at_end()) {
            if (c_.peek() == ')') c_.fail("unbalanced ')'");
            c_.fail(std::string("unexpected '") + c_.peek() + "'");
        }
        return e;
    }

  private:
    using K = IntegrandExpr::Kind;

    IntegrandExpr sum() {
        IntegrandExpr lhs = product();
        for (;;) {
            if (c_.accept('+'))
                lhs = IntegrandExpr::binary(K::add, lhs, product());
            else if (c_.accept('-'))
                lhs = IntegrandExpr::binary(K::sub, lhs, product());
            else
                return lhs;
        }
    }
    IntegrandExpr product() {
        IntegrandExpr lhs = unary();
        for (;;) {
            if (c_.accept('*'))
                lhs = IntegrandExpr::binary(K::mul, lhs, unary());
            else if (c_.accept('/'))
                lhs = IntegrandExpr::binary(K::div, lhs, unary());
            else
                return lhs;
        }
    }
    IntegrandExpr unary() {
        if (c_.accept('-')) return IntegrandExpr::unary(K::neg, unary());
        if (c_.accept('+')) return unary();
        return power();
    }
    IntegrandExpr power() {
        IntegrandExpr base = primary();
        if (c_.accept('^')) return IntegrandExpr::power(base, parse_int_exponent(c_));
        return base;
    }
    IntegrandExpr primary() {
        char ch = c_.peek();
        if (ch == '(') {
            c_.accept('(');
            IntegrandExpr e = sum();
            if (!c_.accept(')')) c_.fail("unbalanced '(': expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(ch))) {
            std::size_t at = c_.pos();
            std::string id = c_.identifier();
            if (id == "x") return IntegrandExpr::variable();
            K kind;
            if (id == "sqrt")
                kind = K::sqrt;
            else if (id == "log")
                kind = K::log;
            else if (id == "abs")
                kind = K::abs;
            else
                throw parse_error("unknown identifier '" + id + "'", at);
            if (!c_.accept('(')) c_.fail("expected '(' after " + id);
            IntegrandExpr arg = sum();
            if (!c_.accept(')')) c_.fail("unbalanced '(': expected ')'");
            return IntegrandExpr::unary(kind, arg);
        }
        if (ch == '\0') c_.fail("unexpected end of expression");
        if (ch == ')') c_.fail("unbalanced ')'");
        c_.fail(std::string("unexpected '") + ch + "'");
    }
    IntegrandExpr number() {
        std::size_t at = c_.pos();
        std::string whole = c_.digits();
        std::string frac;
        c_.skip_ws();
        if (c_.peek() == '.') {
            c_.accept('.');
            frac = c_.digits();
        }
        if (whole.empty() && frac.empty()) throw parse_error("malformed number", at);
        return IntegrandExpr::constant(parse_decimal(whole + (frac.empty() ? "" : "." + frac)));
    }

    Cursor c_;
};

} // namespace detail

/// Integrand grammar: numbers, x, + - * /, ^ with integer exponents,
/// sqrt() log() abs(), parentheses. Errors carry the character position.
inline IntegrandExpr parse_expression(std::string_view text) {
    return detail::ExprParser(text).parse();
}

/// Laurent polynomial in x, y, z with integer coefficients. Terms are
/// separated by + and -; a term is an optional integer coefficient times
/// factors v, v^k, v^-k, v^(-k) or 1/v, 1/v^k joined by * or juxtaposed.
/// The variable count is the highest variable used (at least 1).
inline LaurentPoly parse_laurent(std::string_view text) {
    detail::Cursor c(text);
    struct RawTerm {
        std::int64_t coeff;
        int e[3];
    };
    std::vector<RawTerm> raw;
    int nvars = 1;
    auto var_index = [&](char ch) -> int {
        switch (ch) {
        case 'x': return 0;
        case 'y': return 1;
        case 'z': return 2;
        default: return -1;
        }
    };
    if (c.at_end()) c.fail("empty polynomial");
    bool first = true;
    while (!c.at_end()) {
        int sign = 1;
        if (c.accept('-'))
            sign = -1;
        else if (!c.accept('+') && !first)
            c.fail(std::string("expected '+' or '-', found '") + c.peek() + "'");
        first = false;
        RawTerm t{sign, {0, 0, 0}};
        bool have_factor = false;
        for (;;) {
            char ch = c.peek();
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                std::size_t at = c.pos();
                std::string d = c.digits();
                if (c.peek() == '.') c.fail("coefficients must be integers");
                if (c.peek() == '/') {
                    // 1/v or 1/v^k
                    std::size_t slash = c.pos();
                    c.accept('/');
                    char v = c.peek();
                    if (var_index(v) < 0) throw parse_error("coefficients must be integers", slash);
                    if (d != "1") throw parse_error("only 1/v denominators are allowed", at);
                    c.identifier();
                    long k = 1;
                    if (c.accept('^')) k = detail::parse_int_exponent(c);
                    t.e[var_index(v)] -= static_cast<int>(k);
                    nvars = std::max(nvars, var_index(v) + 1);
                } else {
                    if (d.size() > 18) throw parse_error("coefficient too large", at);
                    if (__builtin_mul_overflow(t.coeff, std::stoll(d), &t.coeff))
                        throw parse_error("coefficient too large", at);
                }
                have_factor = true;
            } else if (std::isalpha(static_cast<unsigned char>(ch))) {
                std::size_t at = c.pos();
                c.skip_ws();
                std::string id = c.identifier();
                // juxtaposed letters such as "xy" are products of variables
                for (std::size_t i = 0; i < id.size(); ++i) {
                    int vi = var_index(id[i]);
                    if (vi < 0)
                        throw parse_error("unknown variable '" + std::string(1, id[i]) + "': at most 3 variables (x, y, z)", at + i);
                    long k = 1;
                    if (i + 1 == id.size() && c.accept('^')) k = detail::parse_int_exponent(c);
                    t.e[vi] += static_cast<int>(k);
                    nvars = std::max(nvars, vi + 1);
                }
                have_factor = true;
            } else if (ch == '(') {
                c.fail("parentheses are only allowed around exponents");
            } else {
                break;
            }
            if (!c.accept('*')) {
                char nx = c.peek();
                if (!(std::isalpha(static_cast<unsigned char>(nx)))) break;
            }
        }
        if (!have_factor) c.fail("expected a term");
        raw.push_back(t);
    }
    LaurentPoly P(nvars);
    for (const auto& t : raw) {
        LaurentPoly::Exponents e(t.e, t.e + nvars);
        P.add_term(e, t.coeff);
    }
    return P;
}

/// "inf", "-inf", "+inf" or a rational / decimal literal.
inline Endpoint parse_endpoint(std::string_view text) {
    if (text == "inf" || text == "+inf") return Endpoint::pos_inf();
    if (text == "-inf") return Endpoint::neg_inf();
    if (auto q = parse_rational(text)) return Endpoint::finite(*q);
    return Endpoint::finite(parse_decimal(text));
}

} // namespace periodlab
