#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "periodlab/cli/cache.hpp"
#include "periodlab/cli/parse.hpp"
#include "periodlab/finite_field/elliptic.hpp"
#include "periodlab/finite_field/sums.hpp"
#include "periodlab/gamma/gamma.hpp"
#include "periodlab/identity/lab.hpp"
#include "periodlab/precision/constants.hpp"
#include "periodlab/quadrature/mahler.hpp"
#include "periodlab/quadrature/periods.hpp"
#include "periodlab/series/euler_product.hpp"
#include "periodlab/series/liouville.hpp"
#include "periodlab/series/mzv.hpp"
#include "periodlab/series/primes.hpp"
#include "periodlab/series/zeta.hpp"

namespace periodlab::cli {

using json = nlohmann::ordered_json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_domain = 2;
inline constexpr int exit_check_failed = 3;
inline constexpr int exit_usage = 64;

struct Options {
    int digits = 50;
    bool json = false;
    std::string cache_dir = "./.periodlab-cache";
    int max_digits = 1000;
    std::uint64_t seed = 1;
    int grid_log2 = mahler_default_grid_log2;
};

/// Writes one envelope per result, as JSON lines or as text.
class Emitter {
  public:
    Emitter(std::ostream& out, bool as_json, std::string command)
        : out_(out), json_(as_json), command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

    void emit(const json& inputs, const std::string& value, const std::string& radius, int digits_certified,
              Rigor rigor) {
        long ms = static_cast<long>(
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count());
        if (json_) {
            json j{{"command", command_},
                   {"inputs", inputs},
                   {"value", value},
                   {"radius", radius},
                   {"digits_certified", digits_certified},
                   {"rigor", to_string(rigor)},
                   {"runtime_ms", ms}};
            out_ << j.dump() << '\n';
        } else {
            out_ << command_ << ' ' << inputs.dump() << ": " << value << " ± " << radius
                 << "  (digits_certified " << digits_certified << ", " << to_string(rigor) << ", " << ms << " ms)\n";
        }
    }

    void ball(const json& inputs, const Ball& b, Rigor rigor) {
        auto [m, r] = decimal_parts(b);
        emit(inputs, m, r, digits_certified(b), rigor);
    }

    void integer(const json& inputs, long v, int digits) {
        emit(inputs, std::to_string(v), "0", digits, Rigor::certified);
    }

  private:
    std::ostream& out_;
    bool json_;
    std::string command_;
    std::chrono::steady_clock::time_point start_;
};

struct Context {
    Options opt;
    std::vector<std::string> args;
    Emitter& out;
    std::ostream& err;
    ConstantCache& cache;

    int digits() const { return opt.digits; }

    json inputs(std::initializer_list<std::string> names) const {
        json j = json::object();
        std::size_t i = 0;
        for (const auto& n : names) j[n] = i < args.size() ? args[i++] : "";
        j["digits"] = opt.digits;
        return j;
    }
};

namespace detail {

inline long parse_long(const std::string& text, const std::string& what) {
    long v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    if (!text.empty() && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || text.empty())
        throw parse_error("expected an integer for " + what + ", got '" + text + "'",
                          static_cast<std::size_t>(p - text.data()));
    return v;
}

inline BigRational parse_number(const std::string& text) {
    if (auto q = parse_rational(text)) return *q;
    return parse_decimal(text);
}

inline std::vector<long> parse_index_list(const std::string& text) {
    std::vector<long> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        part.erase(0, part.find_first_not_of(' '));
        part.erase(part.find_last_not_of(' ') + 1);
        out.push_back(parse_long(part, "index entry"));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

inline DirichletCharacter character_at(const Context& c, std::size_t first) {
    return DirichletCharacter(parse_long(c.args[0], "P"), parse_long(c.args[first], "M"),
                              parse_long(c.args[first + 1], "A"));
}

inline LaurentPoly mahler_operand(long k) {
    LaurentPoly p(2);
    p.add_term({1, 0}, 1);
    p.add_term({0, 1}, 1);
    p.add_term({-1, 0}, 1);
    p.add_term({0, -1}, 1);
    p.add_term({0, 0}, k);
    return p;
}

inline Ball cached_constant(Context& c, const std::string& kind, const std::function<Ball(int)>& compute) {
    const int d = c.digits();
    const std::string key = kind + "::" + std::to_string(d);
    auto check = [&] { return compute(std::min(d, 20)); };
    if (auto hit = c.cache.ball(key, d, check)) return *hit;
    Ball v = compute(d);
    c.cache.put_ball(key, v);
    return v;
}

} // namespace detail

struct Command {
    std::string name;
    std::vector<std::string> args;
    std::string help;
    std::function<int(Context&)> run;
};

inline const std::vector<Command>& commands() {
    using detail::parse_long;
    static const std::vector<Command> table = {
        {"pi", {}, "pi by Machin's formula",
         [](Context& c) {
             c.out.ball(c.inputs({}), detail::cached_constant(c, "pi", [](int d) { return const_pi(d); }),
                        Rigor::certified);
             return exit_ok;
         }},
        {"e", {}, "Euler's number",
         [](Context& c) {
             c.out.ball(c.inputs({}), detail::cached_constant(c, "e", [](int d) { return const_e(d); }),
                        Rigor::certified);
             return exit_ok;
         }},
        {"gamma-const", {}, "Euler-Mascheroni constant (at most 100 digits)",
         [](Context& c) {
             c.out.ball(c.inputs({}), detail::cached_constant(c, "gamma", [](int d) { return const_gamma(d); }),
                        Rigor::certified);
             return exit_ok;
         }},
        {"zeta", {"K"}, "zeta(K) for an integer K >= 2",
         [](Context& c) {
             c.out.ball(c.inputs({"k"}), zeta_int(parse_long(c.args[0], "K"), c.digits()), Rigor::certified);
             return exit_ok;
         }},
        {"zeta-even", {"K"}, "zeta(K) = r pi^K for even K; also prints r",
         [](Context& c) {
             long k = parse_long(c.args[0], "K");
             BigRational r = zeta_even_rational(k);
             Ball coeff = Ball::from_rational(r, c.digits());
             json in = c.inputs({"k"});
             in["component"] = "zeta";
             c.out.ball(in, coeff * pow_int(const_pi(c.digits() + 5), k).with_digits(c.digits()), Rigor::certified);
             in["component"] = "coefficient";
             c.out.ball(in, coeff, Rigor::certified);
             return exit_ok;
         }},
        {"mzv", {"S"}, "multiple zeta value, S = \"s1,s2,...\" with s1 >= 2",
         [](Context& c) {
             c.out.ball(c.inputs({"s"}), mzv(MZVIndex{detail::parse_index_list(c.args[0])}, c.digits()),
                        Rigor::certified);
             return exit_ok;
         }},
        {"euler-product", {"S", "PMAX"}, "prod over primes p <= PMAX of (1 - p^-S)^-1",
         [](Context& c) {
             c.out.ball(c.inputs({"s", "pmax"}),
                        euler_product_partial(parse_long(c.args[0], "S"), parse_long(c.args[1], "PMAX"), c.digits()),
                        Rigor::certified);
             return exit_ok;
         }},
        {"liouville", {}, "Liouville's constant sum 10^-n!",
         [](Context& c) {
             c.out.ball(c.inputs({}), liouville_constant(c.digits()), Rigor::certified);
             return exit_ok;
         }},
        {"integrate", {"EXPR", "A", "B"}, "tanh-sinh integral of EXPR(x) over [A, B]; A, B may be inf/-inf",
         [](Context& c) {
             IntegrandExpr f = parse_expression(c.args[0]);
             Interval dom{parse_endpoint(c.args[1]), parse_endpoint(c.args[2])};
             c.out.ball(c.inputs({"expr", "a", "b"}), integrate_1d(f, dom, c.digits()), Rigor::validated);
             return exit_ok;
         }},
        {"zeta-iter", {"K"}, "zeta(K) as an iterated integral, K in {2, 3}",
         [](Context& c) {
             QuadratureResult r = zeta_iterated_integral(static_cast<int>(parse_long(c.args[0], "K")), c.digits());
             c.out.ball(c.inputs({"k"}), r.value, r.rigor);
             return exit_ok;
         }},
        {"calabi-i", {}, "double integral over the unit square, by series and by quadrature",
         [](Context& c) {
             CalabiPair p = calabi_I(c.digits());
             json in = c.inputs({});
             in["component"] = "series";
             c.out.ball(in, p.series, Rigor::certified);
             in["component"] = "integral";
             c.out.ball(in, p.integral, Rigor::validated);
             return exit_ok;
         }},
        {"calabi-jacobian", {"N"}, "exact Jacobian check of the Calabi substitution on N random samples",
         [](Context& c) {
             long n = parse_long(c.args[0], "N");
             if (n < 1 || n > 100000) throw domain_error("N must be in [1, 100000]");
             std::mt19937_64 rng(c.opt.seed);
             auto sample = [&] {
                 long den = 2 + static_cast<long>(rng() % 999);
                 long num = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(den - 1));
                 return BigRational(num, den);
             };
             std::vector<std::pair<BigRational, BigRational>> samples;
             for (long i = 0; i < n; ++i) {
                 BigRational eta = sample();
                 samples.emplace_back(eta, sample());
             }
             Ball worst = calabi_jacobian_check(samples, c.digits());
             json in = c.inputs({"n"});
             in["seed"] = c.opt.seed;
             c.out.ball(in, worst, Rigor::certified);
             return worst.is_zero() ? exit_ok : exit_check_failed;
         }},
        {"mahler", {"POLY"}, "logarithmic Mahler measure of a Laurent polynomial in x, y, z",
         [](Context& c) {
             MahlerResult r = mahler_measure(parse_laurent(c.args[0]), c.opt.grid_log2, c.digits());
             json in = c.inputs({"poly"});
             in["grid_log2"] = c.opt.grid_log2;
             c.out.ball(in, r.value, r.rigor);
             return exit_ok;
         }},
        {"mahler-ratio", {}, "m(x+y+16+1/x+1/y) / m(x+y+5+1/x+1/y), compared with 11/6",
         [](Context& c) {
             MahlerResult a = mahler_measure(detail::mahler_operand(16), c.opt.grid_log2, c.digits());
             MahlerResult b = mahler_measure(detail::mahler_operand(5), c.opt.grid_log2, c.digits());
             json in = c.inputs({});
             in["grid_log2"] = c.opt.grid_log2;
             c.out.ball(in, a.value / b.value, Rigor::validated);
             return exit_ok;
         }},
        {"feynman-p1", {}, "one-loop Feynman period, expected to be 1",
         [](Context& c) {
             c.out.ball(c.inputs({}), feynman_p1(c.digits()), Rigor::validated);
             return exit_ok;
         }},
        {"gauss", {"P", "M", "A"}, "Gauss sum of the character (P, M, A)",
         [](Context& c) {
             ComplexBall g = gauss_sum(detail::character_at(c, 1), c.digits());
             json in = c.inputs({"p", "m", "a"});
             in["component"] = "re";
             c.out.ball(in, g.re, Rigor::certified);
             in["component"] = "im";
             c.out.ball(in, g.im, Rigor::certified);
             return exit_ok;
         }},
        {"jacobi", {"P", "M", "A", "M2", "A2"}, "exact Jacobi sum J(chi1, chi2) and its norm",
         [](Context& c) {
             DirichletCharacter a = detail::character_at(c, 1), b = detail::character_at(c, 3);
             CyclotomicInt j = jacobi_sum_exact(a, b);
             ComplexBall z = j.embed(c.digits());
             json in = c.inputs({"p", "m", "a", "m2", "a2"});
             c.err << "J = " << j.to_string() << '\n';
             in["component"] = "re";
             c.out.ball(in, z.re, Rigor::certified);
             in["component"] = "im";
             c.out.ball(in, z.im, Rigor::certified);
             if (a.is_trivial() || b.is_trivial() || (a * b).is_trivial()) return exit_ok;
             WeilCheck w = weil_modulus_check(a, b);
             in["component"] = "norm";
             c.out.ball(in, norm(z), Rigor::certified);
             return w.holds ? exit_ok : exit_check_failed;
         }},
        {"weil-sweep", {"PMAX"}, "|J|^2 = p for all non-degenerate character pairs, odd p <= PMAX",
         [](Context& c) {
             long pmax = parse_long(c.args[0], "PMAX");
             if (pmax > 100) throw resource_error("weil-sweep is limited to PMAX <= 100");
             bool ok = true;
             for (long p : primes_up_to(pmax)) {
                 if (p == 2) continue;
                 auto chars = all_characters(p);
                 long pairs = 0, failures = 0;
                 for (const auto& a : chars)
                     for (const auto& b : chars) {
                         if (a.is_trivial() || b.is_trivial() || (a * b).is_trivial()) continue;
                         ++pairs;
                         if (!weil_modulus_check(a, b).holds) ++failures;
                     }
                 json in = c.inputs({"pmax"});
                 in["p"] = p;
                 in["pairs"] = pairs;
                 c.out.integer(in, failures, c.digits());
                 ok = ok && failures == 0;
             }
             return ok ? exit_ok : exit_check_failed;
         }},
        {"ratio-check", {"P", "M", "A", "M2", "A2"}, "J - G(chi1) G(chi2) / G(chi1 chi2), expected to contain 0",
         [](Context& c) {
             Ball d = gauss_jacobi_ratio_check(detail::character_at(c, 1), detail::character_at(c, 3), c.digits());
             c.out.ball(c.inputs({"p", "m", "a", "m2", "a2"}), d, Rigor::certified);
             return d.contains(BigRational(0)) ? exit_ok : exit_check_failed;
         }},
        {"elliptic", {"A", "B", "P"}, "points on y^2 = x^3 + A x + B over F_P and the Frobenius trace",
         [](Context& c) {
             EllipticCount e = elliptic_point_count(parse_long(c.args[0], "A"), parse_long(c.args[1], "B"),
                                                    parse_long(c.args[2], "P"));
             json in = c.inputs({"a", "b", "p"});
             in["component"] = "points";
             c.out.integer(in, e.N, c.digits());
             in["component"] = "trace";
             c.out.integer(in, e.trace, c.digits());
             return hasse_holds(e.trace, e.p) ? exit_ok : exit_check_failed;
         }},
        {"gamma", {"X"}, "Gamma(X) for X > 0 (rational or decimal)",
         [](Context& c) {
             c.out.ball(c.inputs({"x"}), gamma_pos(detail::parse_number(c.args[0]), c.digits()), Rigor::certified);
             return exit_ok;
         }},
        {"veneziano", {"A", "B"}, "B(A, B) = Gamma(A) Gamma(B) / Gamma(A + B)",
         [](Context& c) {
             AmplitudeValue v =
                 veneziano({detail::parse_number(c.args[0]), detail::parse_number(c.args[1]), c.digits()});
             if (v.exact) c.err << "exact: " << v.exact->get_str(10) << '\n';
             c.out.ball(c.inputs({"a", "b"}), v.value, Rigor::certified);
             return exit_ok;
         }},
        {"compare-pair", {"PAIR"}, "certify the near-coincidence pair A or B",
         [](Context& c) {
             PairId id;
             if (c.args[0] == "A" || c.args[0] == "a")
                 id = PairId::A;
             else if (c.args[0] == "B" || c.args[0] == "b")
                 id = PairId::B;
             else
                 throw parse_error("pair must be A or B, got '" + c.args[0] + "'", 0);
             int d = std::max(c.digits(), near_coincidence_min_digits(id));
             NearCoincidenceReport r;
             for (;;) {
                 if (d > c.opt.max_digits)
                     throw retry_precision("pair needs more than --max-digits " + std::to_string(c.opt.max_digits), d);
                 try {
                     r = near_coincidence(id, d);
                     break;
                 } catch (const retry_precision& e) {
                     if (d >= max_escalation_digits) throw;
                     d = std::max(e.suggested_digits(), d + 1);
                 }
             }
             json in = c.inputs({"pair"});
             in["digits"] = d;
             in["component"] = "lhs";
             c.out.ball(in, r.lhs, Rigor::certified);
             in["component"] = "rhs";
             c.out.ball(in, r.rhs, Rigor::certified);
             in["component"] = "difference";
             c.out.ball(in, r.lhs - r.rhs, Rigor::certified);
             c.err << "separated; shared leading digits " << r.outcome.agreed_text << " (" << r.outcome.agree_digits
                   << ")\n";
             return exit_ok;
         }},
        {"radical-matrix", {}, "both readings of each side of the nested-radical display",
         [](Context& c) {
             RadicalMatrix m = nested_radical_check(c.digits());
             for (const auto* side : {&m.lhs, &m.rhs})
                 for (const auto& b : *side) {
                     json in = c.inputs({});
                     in["component"] = b.name;
                     if (b.value)
                         c.out.ball(in, *b.value, Rigor::certified);
                     else
                         c.err << b.name << ": invalid, " << b.invalid_reason << '\n';
                 }
             for (const auto& cell : m.cells) {
                 if (!cell.outcome) {
                     c.err << cell.lhs << " vs " << cell.rhs << ": not comparable\n";
                     continue;
                 }
                 c.err << cell.lhs << " vs " << cell.rhs << ": " << to_string(cell.outcome->status) << ", "
                       << cell.outcome->agree_digits << " digits\n";
             }
             return exit_ok;
         }},
        {"verify-suite", {}, "run the identity suite; exit 3 on any failed record",
         [](Context& c) {
             SuiteOptions so;
             so.mahler_grid_log2 = c.opt.grid_log2;
             SuiteReport r = run_identity_suite(c.digits(), so);
             for (const auto& rec : r.records) {
                 json in = c.inputs({});
                 in["record"] = rec.id;
                 in["lhs"] = rec.lhs;
                 in["rhs"] = rec.rhs;
                 in["expected"] = rec.expected.equal ? "equal" : "distinct";
                 if (rec.lhs_value && rec.rhs_value) c.out.ball(in, *rec.lhs_value - *rec.rhs_value, rec.rigor);
                 c.err << rec.id << ": " << (rec.passed ? "pass" : "FAIL");
                 if (rec.result)
                     c.err << " (" << to_string(rec.result->status) << ", " << rec.result->agree_digits << " digits)";
                 if (!rec.error.empty()) c.err << " error: " << rec.error;
                 c.err << '\n';
             }
             if (!r.passed) {
                 c.err << "suite failed at record " << *r.first_failure << '\n';
                 return exit_check_failed;
             }
             return exit_ok;
         }},
    };
    return table;
}

inline std::string usage() {
    std::ostringstream s;
    s << "usage: periodlab [--digits N] [--json] [--cache-dir PATH] [--max-digits N] [--seed N] [--grid-log2 N]"
         " <command> [args]\n\ncommands:\n";
    for (const auto& c : commands()) {
        std::string head = c.name;
        for (const auto& a : c.args) head += " " + a;
        s << "  " << head << std::string(head.size() < 30 ? 30 - head.size() : 1, ' ') << c.help << '\n';
    }
    return s.str();
}

namespace detail {

inline bool takes_value(const std::string& flag) {
    static const std::vector<std::string> with_value = {"--digits", "--cache-dir", "--max-digits", "--seed",
                                                        "--grid-log2"};
    return std::find(with_value.begin(), with_value.end(), flag) != with_value.end();
}

/// Splits argv into global flags, the command name and its positionals, so
/// that positionals such as "-inf" are never mistaken for flags.
struct SplitArgs {
    std::vector<std::string> flags;
    std::optional<std::string> command;
    std::vector<std::string> positional;
};

inline SplitArgs split_args(const std::vector<std::string>& args) {
    SplitArgs out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) == 0 && a.size() > 2) {
            out.flags.push_back(a);
            if (a.find('=') == std::string::npos && takes_value(a) && i + 1 < args.size()) out.flags.push_back(args[++i]);
        } else if (!out.command) {
            out.command = a;
        } else {
            out.positional.push_back(a);
        }
    }
    return out;
}

} // namespace detail

/// Runs one command. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    for (const auto& a : args)
        if (a == "-h" || a == "--help") {
            out << usage();
            return exit_ok;
        }
    detail::SplitArgs split = detail::split_args(args);
    const auto& name = split.command;
    auto it = std::find_if(commands().begin(), commands().end(),
                           [&](const Command& c) { return name && c.name == *name; });
    if (it == commands().end()) {
        if (name) err << "unknown command '" << *name << "'\n";
        err << usage();
        return exit_usage;
    }

    Options opt;
    CLI::App app{"periodlab", "periodlab"};
    app.set_help_flag();
    app.add_option("--digits", opt.digits);
    app.add_flag("--json", opt.json);
    app.add_option("--cache-dir", opt.cache_dir);
    app.add_option("--max-digits", opt.max_digits);
    app.add_option("--seed", opt.seed);
    app.add_option("--grid-log2", opt.grid_log2);
    CLI::App* sub = app.add_subcommand(it->name, it->help);
    sub->fallthrough();
    std::vector<std::string> positional(it->args.size());
    for (std::size_t i = 0; i < it->args.size(); ++i) sub->add_option(it->args[i], positional[i])->required();
    try {
        std::vector<std::string> ordered = split.flags;
        ordered.push_back(it->name);
        ordered.push_back("--");
        ordered.insert(ordered.end(), split.positional.begin(), split.positional.end());
        std::vector<std::string> reversed(ordered.rbegin(), ordered.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nusage: periodlab " << it->name;
        for (const auto& a : it->args) err << ' ' << a;
        err << "  (periodlab --help lists all commands)\n";
        return exit_domain;
    }

    ConstantCache cache(opt.cache_dir);
    Emitter emitter(out, opt.json, it->name);
    Context ctx{opt, positional, emitter, err, cache};
    int code = exit_error;
    try {
        if (opt.digits < 1) throw domain_error("--digits must be positive");
        if (opt.digits > opt.max_digits)
            throw domain_error("--digits " + std::to_string(opt.digits) + " exceeds --max-digits " +
                               std::to_string(opt.max_digits));
        cache.load_bernoulli();
        code = it->run(ctx);
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << '\n';
        return exit_domain;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    } catch (const retry_precision& e) {
        err << "error: " << e.what() << "; retry with --digits " << e.suggested_digits() << '\n';
        return exit_domain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
    cache.store_bernoulli();
    if (!cache.flush()) err << "warning: could not write cache at " << cache.path() << '\n';
    return code;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace periodlab::cli
