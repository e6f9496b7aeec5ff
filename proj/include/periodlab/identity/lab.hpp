#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/gamma/gamma.hpp"
#include "periodlab/identity/compare.hpp"
#include "periodlab/precision/constants.hpp"
#include "periodlab/quadrature/laurent.hpp"
#include "periodlab/quadrature/mahler.hpp"
#include "periodlab/quadrature/periods.hpp"
#include "periodlab/series/euler_product.hpp"
#include "periodlab/series/mzv.hpp"
#include "periodlab/series/zeta.hpp"

namespace periodlab {

inline constexpr int max_escalation_digits = 1000;

/// Next precision under the x2 escalation policy, or nullopt at the cap.
inline std::optional<int> escalate(int digits) {
    if (digits >= max_escalation_digits) return std::nullopt;
    return std::min(2 * digits, max_escalation_digits);
}

enum class PairId { A, B };

struct NearCoincidenceReport {
    PairId id;
    Ball lhs, rhs;
    CompareOutcome outcome;
};

namespace detail {

inline Ball pair_a_lhs(int d) { return const_pi(d) * sqrt(Ball::from_int(163, d)) / Ball::from_int(3, d); }
inline Ball pair_a_rhs(int d) { return log(Ball::from_int(640320, d)); }

inline Ball pair_b_lhs(int d) { return const_pi(d) * sqrt(Ball::from_int(3502, d)) / Ball::from_int(6, d); }

inline Ball pair_b_rhs(int d) {
    const int wd = d + 10;
    Ball s34 = sqrt(Ball::from_int(34, wd)), s2 = sqrt(Ball::from_int(2, wd));
    auto half = [&](long n) { return Ball::from_rational(BigRational(n, 2), wd); };
    std::array<Ball, 4> x{half(1071) + mul_int(s34, 92), half(1553) + mul_int(s34, 133),
                          Ball::from_int(429, wd) + mul_int(s2, 304), half(627) + mul_int(s2, 221)};
    Ball prod = Ball::from_int(2, wd);
    for (const Ball& xj : x) prod = prod * (xj + sqrt(sqr(xj) - Ball::from_int(1, wd)));
    return log(prod).with_digits(d);
}

} // namespace detail

/// Minimum precision at which each showcase pair is evaluated.
inline int near_coincidence_min_digits(PairId id) { return id == PairId::A ? 40 : 120; }

/// Evaluates the pair and certifies separation. Signals retry_precision
/// (never a verdict) when the precision is below the pair's minimum or the
/// balls still overlap.
inline NearCoincidenceReport near_coincidence(PairId id, int digits) {
    const int need = near_coincidence_min_digits(id);
    auto next = escalate(digits).value_or(max_escalation_digits);
    if (digits < need)
        throw retry_precision("pair " + std::string(id == PairId::A ? "A" : "B") + " needs at least " +
                                  std::to_string(need) + " digits",
                              std::max(next, need));
    NearCoincidenceReport r{id, Ball(), Ball(), {}};
    r.lhs = id == PairId::A ? detail::pair_a_lhs(digits) : detail::pair_b_lhs(digits);
    r.rhs = id == PairId::A ? detail::pair_a_rhs(digits) : detail::pair_b_rhs(digits);
    r.outcome = compare(r.lhs, r.rhs);
    if (!r.outcome.separated())
        throw retry_precision("pair not separated at " + std::to_string(digits) + " digits", next);
    return r;
}

/// Retries with doubled precision up to the cap.
inline NearCoincidenceReport near_coincidence_escalating(PairId id, int digits) {
    for (;;) {
        try {
            return near_coincidence(id, digits);
        } catch (const retry_precision& e) {
            if (digits >= max_escalation_digits) throw;
            digits = std::min(std::max(e.suggested_digits(), digits + 1), max_escalation_digits);
        }
    }
}

// ---------------------------------------------------------------------------
// nested radical parse matrix

struct RadicalBranch {
    std::string name;
    std::string expression;
    std::optional<Ball> value; // empty when the parse needs sqrt of a negative ball
    std::string invalid_reason;
};

struct RadicalCell {
    std::string lhs, rhs;
    std::optional<CompareOutcome> outcome; // empty when either side is invalid
};

struct RadicalMatrix {
    std::vector<RadicalBranch> lhs, rhs;
    std::vector<RadicalCell> cells;
    Ball literal_inner; // 16 - 2 sqrt29 + 2 sqrt55 - 10 sqrt29
};

inline RadicalMatrix nested_radical_check(int digits) {
    if (digits < 30) throw retry_precision("radical matrix needs at least 30 digits", 30);
    const int d = digits;
    auto I = [d](long n) { return Ball::from_int(n, d); };
    Ball s29 = sqrt(I(29)), s5 = sqrt(I(5));
    Ball common = sqrt(I(11) + mul_int(s29, 2));
    RadicalMatrix m;
    m.literal_inner = I(16) - mul_int(s29, 2) + mul_int(sqrt(I(55)), 2) - mul_int(s29, 10);

    auto branch = [&](std::string name, std::string text, const std::function<Ball()>& f) {
        RadicalBranch b{std::move(name), std::move(text), std::nullopt, ""};
        try {
            b.value = f();
        } catch (const domain_error& e) {
            b.invalid_reason = e.what();
        }
        return b;
    };
    m.lhs.push_back(branch("lhs_nested", "sqrt(11+2sqrt29) + sqrt(16-2sqrt29+2sqrt(55-10sqrt29))", [&] {
        return common + sqrt(I(16) - mul_int(s29, 2) + mul_int(sqrt(I(55) - mul_int(s29, 10)), 2));
    }));
    m.lhs.push_back(branch("lhs_literal", "sqrt(11+2sqrt29) + sqrt(16-2sqrt29+2sqrt55-10sqrt29)",
                           [&] { return common + sqrt(m.literal_inner); }));
    m.rhs.push_back(branch("rhs_literal", "sqrt5 + sqrt22 + 2sqrt5", [&] { return s5 + sqrt(I(22)) + mul_int(s5, 2); }));
    m.rhs.push_back(branch("rhs_nested", "sqrt5 + sqrt(22+2sqrt5)", [&] { return s5 + sqrt(I(22) + mul_int(s5, 2)); }));
    for (const auto& l : m.lhs)
        for (const auto& r : m.rhs) {
            RadicalCell c{l.name, r.name, std::nullopt};
            if (l.value && r.value) c.outcome = compare(*l.value, *r.value);
            m.cells.push_back(std::move(c));
        }
    return m;
}

// ---------------------------------------------------------------------------
// identity suite

struct Expectation {
    bool equal = true;
    int after_digits = 0; // for expected-distinct records: minimum agreement before separation
    int min_agree = 0;    // for expected-equal records: minimum certified agreement
};

struct IdentityRecord {
    std::string id;
    std::string lhs, rhs;
    Expectation expected;
    Rigor rigor = Rigor::certified;
    std::optional<CompareOutcome> result;
    std::optional<Ball> lhs_value, rhs_value;
    std::string error;
    bool passed = false;
};

struct SuiteReport {
    int digits = 0;
    std::vector<IdentityRecord> records;
    bool passed = true;
    std::optional<std::string> first_failure;
};

struct SuiteOptions {
    std::function<Ball(int)> pi = [](int d) { return const_pi(d); };
    int mahler_grid_log2 = mahler_default_grid_log2;
};

inline SuiteReport run_identity_suite(int digits, const SuiteOptions& options = {}) {
    if (digits < 20) throw domain_error("identity suite needs at least 20 digits");
    const int d = digits;
    auto pi = [&] { return options.pi(d); };
    struct Recipe {
        std::string id, lhs, rhs;
        Expectation expected;
        Rigor rigor;
        std::function<std::pair<Ball, Ball>()> eval;
    };
    std::optional<CalabiPair> calabi;
    auto get_calabi = [&]() -> const CalabiPair& {
        if (!calabi) calabi = calabi_I(d);
        return *calabi;
    };
    const int quad_agree = 6;
    std::vector<Recipe> recipes{
        {"zeta2_euler", "zeta_int(2)", "zeta_even_rational(2) * pi^2", {true, 0, d - 3}, Rigor::certified,
         [&] {
             return std::make_pair(zeta_int(2, d), Ball::from_rational(zeta_even_rational(2), d) * sqr(pi()));
         }},
        {"calabi_series_3zeta2", "calabi_I series", "3 * zeta_int(2)", {true, 0, d - 3}, Rigor::certified,
         [&] { return std::make_pair(get_calabi().series, mul_int(zeta_int(2, d), 3)); }},
        {"calabi_series_pi2_half", "calabi_I series", "pi^2 / 2", {true, 0, d - 3}, Rigor::certified,
         [&] { return std::make_pair(get_calabi().series, mul_2exp(sqr(pi()), -1)); }},
        {"calabi_integral_series", "calabi_I 2-D quadrature", "calabi_I series", {true, 0, quad_agree},
         Rigor::validated, [&] { return std::make_pair(get_calabi().integral, get_calabi().series); }},
        {"mzv21_zeta3", "mzv(2,1)", "zeta_int(3)", {true, 0, d - 3}, Rigor::certified,
         [&] { return std::make_pair(mzv(MZVIndex{{2, 1}}, d), zeta_int(3, d)); }},
        {"mahler_11_6", "mu(x+y+16+1/x+1/y) / mu(x+y+5+1/x+1/y)", "11/6", {true, 0, 8}, Rigor::validated,
         [&] {
             LaurentPoly p16(2), p5(2);
             for (auto* P : {&p16, &p5}) {
                 P->add_term({1, 0}, 1);
                 P->add_term({0, 1}, 1);
                 P->add_term({-1, 0}, 1);
                 P->add_term({0, -1}, 1);
             }
             p16.add_term({0, 0}, 16);
             p5.add_term({0, 0}, 5);
             Ball ratio = mahler_measure(p16, options.mahler_grid_log2, d).value /
                          mahler_measure(p5, options.mahler_grid_log2, d).value;
             return std::make_pair(ratio, Ball::from_rational(BigRational(11, 6), d));
         }},
        {"feynman_p1", "feynman_p1", "1", {true, 0, std::min(d - 3, 15)}, Rigor::validated,
         [&] {
             Ball radial = feynman_radial(d + 5);
             return std::make_pair((mul_int(radial, 4) / options.pi(d + 5)).with_digits(d), Ball::from_int(1, d));
         }},
        {"veneziano_half_pi", "veneziano(1/2, 1/2)", "pi", {true, 0, d - 3}, Rigor::certified,
         [&] {
             return std::make_pair(veneziano({BigRational(1, 2), BigRational(1, 2), d}).value, pi());
         }},
        {"euler_product_zeta2", "euler_product_partial(2, 10^5)", "zeta_int(2)", {false, 5, 0}, Rigor::certified,
         [&] { return std::make_pair(euler_product_partial(2, 100000, d), zeta_int(2, d)); }},
    };
    SuiteReport report;
    report.digits = d;
    for (const auto& r : recipes) {
        IdentityRecord rec{r.id, r.lhs, r.rhs, r.expected, r.rigor, std::nullopt, std::nullopt, std::nullopt, "", false};
        try {
            auto [a, b] = r.eval();
            rec.lhs_value = a;
            rec.rhs_value = b;
            rec.result = compare(a, b);
            if (r.expected.equal)
                rec.passed = !rec.result->separated() && rec.result->agree_digits >= r.expected.min_agree;
            else
                rec.passed = rec.result->separated() && rec.result->agree_digits >= r.expected.after_digits;
        } catch (const std::exception& e) {
            rec.error = e.what();
            rec.passed = false;
        }
        if (!rec.passed && !report.first_failure) report.first_failure = rec.id;
        report.passed = report.passed && rec.passed;
        report.records.push_back(std::move(rec));
    }
    return report;
}

} // namespace periodlab
