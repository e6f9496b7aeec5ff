#pragma once

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "periodlab/precision/ball.hpp"
#include "periodlab/series/bernoulli.hpp"

namespace periodlab {

/// One line of cache.jsonl. Numerics are decimal strings only.
struct CacheEntry {
    std::string key;    // kind:params:precision
    std::string value;  // exact decimal midpoint, or num/den for rationals
    std::string radius; // exact decimal radius ("0" for rationals)
    std::string created_at;
};

namespace detail {

/// Holds an flock on a file descriptor for its lifetime.
class FileLock {
  public:
    FileLock(const std::string& path, int flags, int op) : fd_(::open(path.c_str(), flags, 0644)) {
        if (fd_ >= 0 && ::flock(fd_, op) != 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }
    ~FileLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

    int fd() const { return fd_; }
    bool ok() const { return fd_ >= 0; }

  private:
    int fd_;
};

inline std::string utc_timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string read_fd(int fd) {
    std::string out;
    char buf[65536];
    ssize_t n;
    while ((n = ::read(fd, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
    return out;
}

} // namespace detail

/// Persistent cache of constants and Bernoulli numbers in <dir>/cache.jsonl.
/// Readers take a shared flock, the appender an exclusive one. Malformed
/// lines and entries that fail validation are ignored, so a damaged cache
/// only costs recomputation.
class ConstantCache {
  public:
    explicit ConstantCache(std::string dir) : dir_(std::move(dir)) {
        if (!dir_.empty()) load();
    }

    bool enabled() const { return !dir_.empty(); }
    std::string path() const { return dir_ + "/cache.jsonl"; }
    const std::map<std::string, CacheEntry>& entries() const { return entries_; }

    /// Cached ball under key, accepted only if it overlaps `check` (a cheap
    /// low-precision recomputation).
    std::optional<Ball> ball(const std::string& key, int digits, const std::function<Ball()>& check) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        try {
            Ball b = from_exact_strings(it->second.value, it->second.radius, digits);
            if (!b.overlaps(check())) return std::nullopt;
            return b;
        } catch (const error&) {
            return std::nullopt;
        }
    }

    void put_ball(const std::string& key, const Ball& b) {
        if (entries_.count(key)) return;
        auto [m, r] = exact_strings(b);
        add_pending({key, m, r, detail::utc_timestamp()});
    }

    /// Feeds stored Bernoulli numbers to the shared table; each is checked
    /// against the recurrence before it is accepted.
    std::size_t load_bernoulli(BernoulliCache& table = default_bernoulli_cache()) const {
        std::vector<std::pair<std::size_t, BigRational>> values;
        for (const auto& [key, e] : entries_) {
            if (key.rfind("bernoulli:", 0) != 0) continue;
            try {
                std::size_t n = std::stoul(key.substr(10));
                auto q = parse_rational(e.value);
                if (q) values.emplace_back(n, *q);
            } catch (const std::exception&) {
            }
        }
        std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return table.load(values);
    }

    void store_bernoulli(const BernoulliCache& table = default_bernoulli_cache()) {
        std::vector<BigRational> snap = table.snapshot();
        for (std::size_t n = 0; n < snap.size(); ++n) {
            std::string key = "bernoulli:" + std::to_string(n) + ":exact";
            if (!entries_.count(key)) add_pending({key, snap[n].get_str(10), "0", detail::utc_timestamp()});
        }
    }

    /// Appends pending entries. Returns false if the cache could not be written.
    bool flush() {
        if (!enabled() || pending_.empty()) return true;
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) return false;
        detail::FileLock lock(path(), O_RDWR | O_CREAT | O_APPEND, LOCK_EX);
        if (!lock.ok()) return false;
        // another process may have appended since we loaded
        std::map<std::string, CacheEntry> current;
        parse_into(detail::read_fd(lock.fd()), current);
        std::string text;
        for (const auto& e : pending_) {
            if (current.count(e.key)) continue;
            nlohmann::ordered_json j{{"key", e.key}, {"value", e.value}, {"radius", e.radius}, {"created_at", e.created_at}};
            text += j.dump() + "\n";
        }
        const char* p = text.data();
        std::size_t left = text.size();
        while (left > 0) {
            ssize_t n = ::write(lock.fd(), p, left);
            if (n <= 0) return false;
            p += n;
            left -= static_cast<std::size_t>(n);
        }
        for (auto& e : pending_) entries_.emplace(e.key, e);
        pending_.clear();
        return true;
    }

  private:
    static void parse_into(const std::string& text, std::map<std::string, CacheEntry>& out) {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                auto j = nlohmann::json::parse(line);
                CacheEntry e{j.at("key").get<std::string>(), j.at("value").get<std::string>(),
                             j.at("radius").get<std::string>(), j.value("created_at", "")};
                out.emplace(e.key, std::move(e));
            } catch (const std::exception&) {
            }
        }
    }

    void load() {
        if (!std::filesystem::exists(path())) return;
        detail::FileLock lock(path(), O_RDONLY, LOCK_SH);
        if (!lock.ok()) return;
        parse_into(detail::read_fd(lock.fd()), entries_);
    }

    void add_pending(CacheEntry e) {
        for (const auto& p : pending_)
            if (p.key == e.key) return;
        pending_.push_back(std::move(e));
    }

    std::string dir_;
    std::map<std::string, CacheEntry> entries_;
    std::vector<CacheEntry> pending_;
};

} // namespace periodlab
