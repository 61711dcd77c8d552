#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace shocklab::lab {

using Json = nlohmann::json;

/// NDJSON report. Every record carries experiment, config_hash, seed and t;
/// records are written sorted by (experiment, seed, t), ties kept in
/// insertion order.
class Report {
public:
    explicit Report(std::string config_hash) : hash_(std::move(config_hash)) {}

    /// Adds a record; payload keys are merged next to the standard ones.
    void add(const std::string& experiment, std::uint64_t seed, double t, Json payload);

    /// A check: records value/tolerance/pass/hard and tracks hard failures.
    void check(const std::string& experiment, const std::string& name, std::uint64_t seed, double t, double value,
               double tolerance, bool pass, bool hard, Json extra = Json::object());

    bool hard_failure() const noexcept { return hard_failure_; }
    void mark_hard_failure() noexcept { hard_failure_ = true; }
    const std::string& config_hash() const noexcept { return hash_; }

    std::vector<Json> sorted() const;
    void write(std::ostream& os) const;
    void write(const std::filesystem::path& path) const;

    std::size_t size() const noexcept { return records_.size(); }
    const std::vector<Json>& records() const noexcept { return records_; }

private:
    std::string hash_;
    std::vector<Json> records_;
    bool hard_failure_ = false;
};

} // namespace shocklab::lab
