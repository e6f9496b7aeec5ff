#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "periodlab/error.hpp"

namespace periodlab {

/// Laurent polynomial in n variables with integer coefficients; zero
/// coefficients are never stored.
class LaurentPoly {
  public:
    using Exponents = std::vector<int>;

    explicit LaurentPoly(int nvars) : nvars_(nvars) {
        if (nvars < 1) throw domain_error("Laurent polynomial needs at least one variable");
    }

    int nvars() const { return nvars_; }
    const std::map<Exponents, std::int64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(Exponents e, std::int64_t c) {
        if (static_cast<int>(e.size()) != nvars_) throw domain_error("exponent vector has wrong length");
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(std::move(e), c);
            return;
        }
        if (__builtin_add_overflow(it->second, c, &it->second)) throw domain_error("coefficient overflow");
        if (it->second == 0) terms_.erase(it);
    }

    std::int64_t coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? 0 : it->second;
    }

    std::string to_string() const {
        static const char* names[] = {"x", "y", "z"};
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            std::int64_t mag = c < 0 ? -c : c;
            out += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            first = false;
            std::string mono;
            for (int i = 0; i < nvars_; ++i) {
                if (e[static_cast<std::size_t>(i)] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += i < 3 ? names[i] : "v" + std::to_string(i);
                if (e[static_cast<std::size_t>(i)] != 1) mono += "^" + std::to_string(e[static_cast<std::size_t>(i)]);
            }
            if (mono.empty())
                out += std::to_string(mag);
            else
                out += (mag == 1 ? "" : std::to_string(mag) + "*") + mono;
        }
        return out;
    }

  private:
    int nvars_;
    std::map<Exponents, std::int64_t> terms_;
};

} // namespace periodlab
