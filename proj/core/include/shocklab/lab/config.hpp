#pragma once

// Experiment configuration: a YAML file flattened to dotted keys, merged
// over built-in defaults, with command-line overrides.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shocklab/simulation.hpp"

namespace shocklab::lab {

class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_yaml(const std::string& text);

    /// Override one key ("domain.n=512" style, already split). Unknown keys
    /// are rejected so typos surface early.
    void set(const std::string& key, const std::string& value);
    void set_assignment(const std::string& key_eq_value);

    bool explicitly_set(const std::string& key) const { return values_.count(key) != 0; }

    std::string str(const std::string& key) const;
    double num(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<double> num_list(const std::string& key) const;
    std::vector<std::string> str_list(const std::string& key) const;

    /// Effective key=value lines (defaults merged), sorted by key.
    std::string canonical() const;
    /// FNV-1a over the canonical text, as 16 hex digits.
    std::string hash() const;

    /// Known keys with their default text.
    static const std::map<std::string, std::string>& defaults();

private:
    std::string raw(const std::string& key) const;
    std::map<std::string, std::string> values_;
};

/// Grid, noise, scheme, time, pair and tracker keys as a realization config.
RealizationConfig realization_config(const Config& c);

/// The kernel width for the configured kind (sigma or radius).
double kernel_width(const Config& c);

} // namespace shocklab::lab
