#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bosonlight {

/// Config text could not be parsed, or a key had the wrong type / was missing.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scalar TOML value; arrays hold homogeneous scalars.
using TomlScalar = std::variant<bool, std::int64_t, double, std::string>;

struct TomlValue {
    bool is_array = false;
    TomlScalar scalar;
    std::vector<TomlScalar> array;
};

/// Flat view of a TOML document: `[a.b]` + `k = v` stored under "a.b.k".
/// Supports the subset used by the experiment configs: bare keys, strings,
/// integers, floats, booleans, scalar arrays, comments, dotted table headers.
class TomlTable {
public:
    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    bool get_bool(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    double get_double(const std::string& key) const;  // accepts integers
    std::string get_string(const std::string& key) const;
    std::vector<std::int64_t> get_int_array(const std::string& key) const;
    std::vector<double> get_double_array(const std::string& key) const;
    std::vector<bool> get_bool_array(const std::string& key) const;

    bool get_bool_or(const std::string& key, bool fallback) const;
    std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
    double get_double_or(const std::string& key, double fallback) const;
    std::string get_string_or(const std::string& key, const std::string& fallback) const;

    void set(const std::string& key, TomlValue value);
    const std::map<std::string, TomlValue>& entries() const { return entries_; }

private:
    const TomlValue& require(const std::string& key) const;
    std::map<std::string, TomlValue> entries_;
};

TomlTable parse_toml(const std::string& text);

}  // namespace bosonlight
