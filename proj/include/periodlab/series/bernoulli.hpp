#pragma once

#include <cstddef>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/precision/rational.hpp"

namespace periodlab {

/// Exact Bernoulli numbers under the B_1 = -1/2 convention, generated from
/// sum_{j=0}^{n} C(n+1, j) B_j = 0 and memoised. One writer extends the
/// table; readers take whole-table snapshots.
class BernoulliCache {
  public:
    static constexpr std::size_t default_max_index = 200;
    static constexpr const char* convention = "B1=-1/2";

    explicit BernoulliCache(std::size_t max_index = default_max_index) : max_index_(max_index) {
        table_.emplace_back(1);
    }

    std::size_t max_index() const noexcept { return max_index_; }

    BigRational get(std::size_t n) {
        if (n > max_index_)
            throw resource_error("Bernoulli index " + std::to_string(n) + " above cap " + std::to_string(max_index_));
        {
            std::shared_lock lock(mutex_);
            if (n < table_.size()) return table_[n];
        }
        std::unique_lock lock(mutex_);
        while (table_.size() <= n) table_.push_back(next_locked());
        return table_[n];
    }

    std::vector<BigRational> snapshot() const {
        std::shared_lock lock(mutex_);
        return table_;
    }

    /// Appends externally stored values (e.g. from the on-disk cache) after
    /// checking each against the recurrence. Returns how many were accepted;
    /// the first value that does not continue the table or fails the check
    /// stops the load.
    std::size_t load(const std::vector<std::pair<std::size_t, BigRational>>& entries) {
        std::unique_lock lock(mutex_);
        std::size_t accepted = 0;
        for (const auto& [n, value] : entries) {
            if (n < table_.size()) {
                if (table_[n] != value) break;
                continue;
            }
            if (n != table_.size() || n > max_index_) break;
            if (next_locked() != value) break;
            table_.push_back(value);
            ++accepted;
        }
        return accepted;
    }

  private:
    BigRational next_locked() const {
        const std::size_t n = table_.size();
        if (n > 1 && n % 2 == 1) return BigRational(0);
        BigRational acc(0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j > 1 && j % 2 == 1) continue;
            acc += BigRational(binomial(n + 1, j)) * table_[j];
        }
        BigRational r = -acc / BigRational(static_cast<long>(n + 1));
        r.canonicalize();
        return r;
    }

    std::size_t max_index_;
    mutable std::shared_mutex mutex_;
    std::vector<BigRational> table_;
};

inline BernoulliCache& default_bernoulli_cache() {
    static BernoulliCache cache;
    return cache;
}

/// Exact B_n, n <= 200 with the default cache.
inline BigRational bernoulli(std::size_t n) {
    return default_bernoulli_cache().get(n);
}

} // namespace periodlab
