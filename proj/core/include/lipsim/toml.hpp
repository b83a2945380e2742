#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lipsim::toml {

// Minimal TOML-compatible reader covering what scenario files need:
// [table] and [table.sub] headers, bare and quoted keys, strings, integers,
// floats, booleans, homogeneous arrays (multi-line allowed), and # comments.
// Every value remembers its source line for diagnostics; parsing is strict
// (duplicate keys are errors, unknown keys are rejected by the config layer).

struct Value {
    enum class Kind { Integer, Float, String, Boolean, Array };
    Kind kind = Kind::Integer;
    long long integer = 0;
    double real = 0.0;
    std::string str;
    bool boolean = false;
    std::vector<Value> array;
    int line = 0;

    bool is_number() const { return kind == Kind::Integer || kind == Kind::Float; }
    double as_number() const { return kind == Kind::Integer ? static_cast<double>(integer) : real; }
};

struct Document {
    // Keys are full dotted paths ("drive.delta1_cm1"); a quoted key keeps its
    // dots inside the final segment.
    std::map<std::string, Value> values;
    // Table headers seen, for better unknown-block messages.
    std::vector<std::string> tables;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    // All entries under `prefix.`; returns (suffix, value) pairs.
    std::vector<std::pair<std::string, const Value*>> items_under(const std::string& prefix) const;
};

// Throws ConfigError with a "line N:" prefix on syntax problems.
Document parse(std::string_view text);

// Serialization helper for config echo files: formats a double with 17
// significant digits (round-trips exactly).
std::string format_double(double v);

} // namespace lipsim::toml
