#include "bosonlight/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace bosonlight {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Strip a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (size_t k = 0; k < line.size(); ++k) {
        if (line[k] == '"') in_string = !in_string;
        if (line[k] == '#' && !in_string) return line.substr(0, k);
    }
    return line;
}

bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    return std::all_of(key.begin(), key.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    });
}

TomlScalar parse_scalar(const std::string& raw, int line_no) {
    const std::string tok = trim(raw);
    if (tok.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            throw ConfigError("line " + std::to_string(line_no) + ": unterminated string");
        return tok.substr(1, tok.size() - 2);
    }
    if (tok == "true") return true;
    if (tok == "false") return false;

    const bool looks_float = tok.find_first_of(".eE") != std::string::npos &&
                             tok.find("0x") == std::string::npos;
    if (!looks_float) {
        std::int64_t iv = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), iv);
        if (ec == std::errc() && p == tok.data() + tok.size()) return iv;
    }
    try {
        size_t used = 0;
        double dv = std::stod(tok, &used);
        if (used == tok.size()) return dv;
    } catch (const std::exception&) {
    }
    throw ConfigError("line " + std::to_string(line_no) + ": cannot parse value '" + tok + "'");
}

std::vector<TomlScalar> parse_array(const std::string& raw, int line_no) {
    const std::string body = trim(raw.substr(1, raw.size() - 2));
    std::vector<TomlScalar> out;
    if (body.empty()) return out;
    size_t start = 0;
    bool in_string = false;
    for (size_t k = 0; k <= body.size(); ++k) {
        if (k < body.size() && body[k] == '"') in_string = !in_string;
        if (k == body.size() || (body[k] == ',' && !in_string)) {
            out.push_back(parse_scalar(body.substr(start, k - start), line_no));
            start = k + 1;
        }
    }
    if (!out.empty()) {
        const size_t type0 = out.front().index();
        for (const auto& s : out)
            if (s.index() != type0 && !(s.index() <= 2 && type0 <= 2 &&
                                        s.index() >= 1 && type0 >= 1))
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": mixed-type array");
    }
    return out;
}

}  // namespace

TomlTable parse_toml(const std::string& text) {
    TomlTable table;
    std::string prefix;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        ++line_no;
        std::string line = trim(strip_comment(text.substr(pos, nl - pos)));
        pos = nl + 1;
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed table header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            for (size_t a = 0, b = 0; a <= name.size(); a = b + 1) {
                b = name.find('.', a);
                if (b == std::string::npos) b = name.size();
                if (!valid_key(name.substr(a, b - a)))
                    throw ConfigError("line " + std::to_string(line_no) +
                                      ": bad table name '" + name + "'");
            }
            prefix = name + ".";
            continue;
        }

        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (!valid_key(key))
            throw ConfigError("line " + std::to_string(line_no) + ": bad key '" + key + "'");
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": missing value for '" +
                              key + "'");

        TomlValue v;
        if (value.front() == '[') {
            if (value.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": arrays must close on the same line");
            v.is_array = true;
            v.array = parse_array(value, line_no);
        } else {
            v.scalar = parse_scalar(value, line_no);
        }
        const std::string full = prefix + key;
        if (table.has(full))
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                              full + "'");
        table.set(full, std::move(v));
    }
    return table;
}

void TomlTable::set(const std::string& key, TomlValue value) {
    entries_[key] = std::move(value);
}

const TomlValue& TomlTable::require(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

bool TomlTable::get_bool(const std::string& key) const {
    const TomlValue& v = require(key);
    if (v.is_array || !std::holds_alternative<bool>(v.scalar))
        throw ConfigError("config key '" + key + "' must be a boolean");
    return std::get<bool>(v.scalar);
}

std::int64_t TomlTable::get_int(const std::string& key) const {
    const TomlValue& v = require(key);
    if (v.is_array || !std::holds_alternative<std::int64_t>(v.scalar))
        throw ConfigError("config key '" + key + "' must be an integer");
    return std::get<std::int64_t>(v.scalar);
}

double TomlTable::get_double(const std::string& key) const {
    const TomlValue& v = require(key);
    if (!v.is_array) {
        if (std::holds_alternative<double>(v.scalar)) return std::get<double>(v.scalar);
        if (std::holds_alternative<std::int64_t>(v.scalar))
            return static_cast<double>(std::get<std::int64_t>(v.scalar));
    }
    throw ConfigError("config key '" + key + "' must be a number");
}

std::string TomlTable::get_string(const std::string& key) const {
    const TomlValue& v = require(key);
    if (v.is_array || !std::holds_alternative<std::string>(v.scalar))
        throw ConfigError("config key '" + key + "' must be a string");
    return std::get<std::string>(v.scalar);
}

std::vector<std::int64_t> TomlTable::get_int_array(const std::string& key) const {
    const TomlValue& v = require(key);
    if (!v.is_array) throw ConfigError("config key '" + key + "' must be an array");
    std::vector<std::int64_t> out;
    for (const auto& s : v.array) {
        if (!std::holds_alternative<std::int64_t>(s))
            throw ConfigError("config key '" + key + "' must hold integers");
        out.push_back(std::get<std::int64_t>(s));
    }
    return out;
}

std::vector<double> TomlTable::get_double_array(const std::string& key) const {
    const TomlValue& v = require(key);
    if (!v.is_array) throw ConfigError("config key '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& s : v.array) {
        if (std::holds_alternative<double>(s))
            out.push_back(std::get<double>(s));
        else if (std::holds_alternative<std::int64_t>(s))
            out.push_back(static_cast<double>(std::get<std::int64_t>(s)));
        else
            throw ConfigError("config key '" + key + "' must hold numbers");
    }
    return out;
}

std::vector<bool> TomlTable::get_bool_array(const std::string& key) const {
    const TomlValue& v = require(key);
    if (!v.is_array) throw ConfigError("config key '" + key + "' must be an array");
    std::vector<bool> out;
    for (const auto& s : v.array) {
        if (!std::holds_alternative<bool>(s))
            throw ConfigError("config key '" + key + "' must hold booleans");
        out.push_back(std::get<bool>(s));
    }
    return out;
}

bool TomlTable::get_bool_or(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}
std::int64_t TomlTable::get_int_or(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}
double TomlTable::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}
std::string TomlTable::get_string_or(const std::string& key,
                                     const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

}  // namespace bosonlight
