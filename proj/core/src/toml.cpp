#include "lipsim/toml.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "lipsim/errors.hpp"

namespace lipsim::toml {

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return eof() ? '\0' : text[pos]; }
    char get() {
        const char c = text[pos++];
        if (c == '\n') ++line;
        return c;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("line " + std::to_string(line) + ": " + msg);
    }
    void skip_spaces() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) get();
    }
    void skip_comment() {
        if (peek() == '#')
            while (!eof() && peek() != '\n') get();
    }
    // spaces, comments, and (optionally) newlines
    void skip_filler(bool newlines) {
        while (!eof()) {
            skip_spaces();
            skip_comment();
            if (newlines && peek() == '\n') {
                get();
                continue;
            }
            break;
        }
    }
};

bool is_bare_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_basic_string(Cursor& c) {
    c.get(); // opening quote
    std::string out;
    while (true) {
        if (c.eof()) c.fail("unterminated string");
        const char ch = c.get();
        if (ch == '"') break;
        if (ch == '\n') c.fail("newline in string");
        if (ch == '\\') {
            if (c.eof()) c.fail("dangling escape");
            const char esc = c.get();
            switch (esc) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: c.fail(std::string("unsupported escape \\") + esc);
            }
        } else {
            out += ch;
        }
    }
    return out;
}

std::string parse_key_segment(Cursor& c) {
    if (c.peek() == '"') return parse_basic_string(c);
    std::string out;
    while (!c.eof() && is_bare_char(c.peek())) out += c.get();
    if (out.empty()) c.fail("expected a key");
    return out;
}

Value parse_value(Cursor& c);

Value parse_number_or_bool(Cursor& c) {
    Value v;
    v.line = c.line;
    std::string tok;
    while (!c.eof() && (is_bare_char(c.peek()) || c.peek() == '+' || c.peek() == '.')) tok += c.get();
    if (tok == "true" || tok == "false") {
        v.kind = Value::Kind::Boolean;
        v.boolean = (tok == "true");
        return v;
    }
    if (tok.empty()) c.fail("expected a value");
    const bool looks_float = tok.find_first_of(".eE") != std::string::npos &&
                             tok.find("0x") != 0;
    errno = 0;
    char* end = nullptr;
    if (!looks_float) {
        const long long i = std::strtoll(tok.c_str(), &end, 10);
        if (errno == 0 && end && *end == '\0') {
            v.kind = Value::Kind::Integer;
            v.integer = i;
            return v;
        }
    }
    const double d = std::strtod(tok.c_str(), &end);
    if (end == nullptr || *end != '\0' || !std::isfinite(d))
        c.fail("malformed number '" + tok + "'");
    v.kind = Value::Kind::Float;
    v.real = d;
    return v;
}

Value parse_value(Cursor& c) {
    c.skip_spaces();
    Value v;
    v.line = c.line;
    if (c.peek() == '"') {
        v.kind = Value::Kind::String;
        v.str = parse_basic_string(c);
        return v;
    }
    if (c.peek() == '[') {
        c.get();
        v.kind = Value::Kind::Array;
        c.skip_filler(true);
        while (c.peek() != ']') {
            v.array.push_back(parse_value(c));
            c.skip_filler(true);
            if (c.peek() == ',') {
                c.get();
                c.skip_filler(true);
            } else if (c.peek() != ']') {
                c.fail("expected ',' or ']' in array");
            }
        }
        c.get(); // ']'
        return v;
    }
    return parse_number_or_bool(c);
}

} // namespace

std::vector<std::pair<std::string, const Value*>> Document::items_under(
    const std::string& prefix) const {
    std::vector<std::pair<std::string, const Value*>> out;
    const std::string want = prefix + ".";
    for (const auto& [key, value] : values)
        if (key.rfind(want, 0) == 0) out.emplace_back(key.substr(want.size()), &value);
    return out;
}

Document parse(std::string_view text) {
    Document doc;
    Cursor c{text};
    std::string prefix;
    while (true) {
        c.skip_filler(true);
        if (c.eof()) break;
        if (c.peek() == '[') {
            c.get();
            c.skip_spaces();
            std::string name = parse_key_segment(c);
            c.skip_spaces();
            while (c.peek() == '.') {
                c.get();
                c.skip_spaces();
                name += "." + parse_key_segment(c);
                c.skip_spaces();
            }
            if (c.peek() != ']') c.fail("expected ']' after table name");
            c.get();
            c.skip_spaces();
            c.skip_comment();
            if (!c.eof() && c.peek() != '\n') c.fail("junk after table header");
            prefix = name;
            doc.tables.push_back(name);
            continue;
        }
        const int key_line = c.line;
        std::string key = parse_key_segment(c);
        c.skip_spaces();
        while (c.peek() == '.') { // dotted bare key
            c.get();
            c.skip_spaces();
            key += "." + parse_key_segment(c);
            c.skip_spaces();
        }
        if (c.peek() != '=') c.fail("expected '=' after key '" + key + "'");
        c.get();
        Value v = parse_value(c);
        v.line = key_line;
        c.skip_spaces();
        c.skip_comment();
        if (!c.eof() && c.peek() != '\n') c.fail("junk after value for key '" + key + "'");
        const std::string full = prefix.empty() ? key : prefix + "." + key;
        if (doc.values.count(full))
            c.fail("duplicate key '" + full + "'");
        doc.values.emplace(full, std::move(v));
    }
    return doc;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace lipsim::toml
