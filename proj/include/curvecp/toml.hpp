#pragma once
// Small TOML subset: [tables], [[arrays of tables]], dotted keys, strings,
// integers, floats, booleans and (possibly multi-line) flat arrays.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace curvecp::toml {

struct Value {
    enum class Kind { None, Bool, Int, Float, String, Array, Table };
    Kind kind = Kind::None;
    bool b = false;
    std::int64_t i = 0;
    double d = 0.0;
    std::string s;
    std::vector<Value> arr;
    std::vector<std::pair<std::string, Value>> tab;
    bool array_of_tables = false;

    static Value table() { Value v; v.kind = Kind::Table; return v; }
    static Value array() { Value v; v.kind = Kind::Array; return v; }
    static Value of(double x) { Value v; v.kind = Kind::Float; v.d = x; return v; }
    static Value of(std::int64_t x) { Value v; v.kind = Kind::Int; v.i = x; return v; }
    static Value of(int x) { return of(static_cast<std::int64_t>(x)); }
    static Value of(bool x) { Value v; v.kind = Kind::Bool; v.b = x; return v; }
    static Value of(std::string x) { Value v; v.kind = Kind::String; v.s = std::move(x); return v; }
    static Value of(const char* x) { return of(std::string(x)); }

    bool is_table() const { return kind == Kind::Table; }
    bool is_number() const { return kind == Kind::Int || kind == Kind::Float; }

    const Value* find(const std::string& key) const {
        for (auto& kv : tab)
            if (kv.first == key) return &kv.second;
        return nullptr;
    }
    Value* find(const std::string& key) {
        for (auto& kv : tab)
            if (kv.first == key) return &kv.second;
        return nullptr;
    }
    Value& set(const std::string& key, Value v) {
        if (Value* p = find(key)) { *p = std::move(v); return *p; }
        tab.emplace_back(key, std::move(v));
        return tab.back().second;
    }
    double as_double(const std::string& ctx = "") const {
        if (kind == Kind::Float) return d;
        if (kind == Kind::Int) return static_cast<double>(i);
        throw Error(Errc::ConfigError, "expected a number for '" + ctx + "'");
    }
    std::int64_t as_int(const std::string& ctx = "") const {
        if (kind == Kind::Int) return i;
        if (kind == Kind::Float && std::floor(d) == d) return static_cast<std::int64_t>(d);
        throw Error(Errc::ConfigError, "expected an integer for '" + ctx + "'");
    }
    const std::string& as_string(const std::string& ctx = "") const {
        if (kind != Kind::String) throw Error(Errc::ConfigError, "expected a string for '" + ctx + "'");
        return s;
    }
    bool as_bool(const std::string& ctx = "") const {
        if (kind != Kind::Bool) throw Error(Errc::ConfigError, "expected a boolean for '" + ctx + "'");
        return b;
    }
};

namespace detail {

inline std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out + "\"";
}

class Parser {
public:
    explicit Parser(std::string text) : src_(std::move(text)) {}

    Value parse() {
        Value root = Value::table();
        Value* cur = &root;
        while (skip_ws_lines(), pos_ < src_.size()) {
            if (peek() == '[') {
                bool aot = pos_ + 1 < src_.size() && src_[pos_ + 1] == '[';
                pos_ += aot ? 2 : 1;
                auto path = parse_key_path();
                skip_inline_ws();
                expect(']');
                if (aot) expect(']');
                end_of_line();
                cur = open_path(root, path, aot);
            } else {
                auto path = parse_key_path();
                skip_inline_ws();
                expect('=');
                skip_inline_ws();
                Value v = parse_value();
                end_of_line();
                Value* t = cur;
                for (std::size_t k = 0; k + 1 < path.size(); ++k) t = &child_table(*t, path[k]);
                if (t->find(path.back())) fail("duplicate key '" + path.back() + "'");
                t->set(path.back(), std::move(v));
            }
        }
        return root;
    }

private:
    std::string src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        std::size_t line = 1;
        for (std::size_t k = 0; k < pos_ && k < src_.size(); ++k)
            if (src_[k] == '\n') ++line;
        throw Error(Errc::ConfigError, "line " + std::to_string(line) + ": " + msg);
    }
    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    void skip_inline_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
    }
    void skip_comment() {
        if (peek() == '#')
            while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    }
    void skip_ws_lines() {
        for (;;) {
            skip_inline_ws();
            skip_comment();
            if (peek() == '\n' || peek() == '\r') { ++pos_; continue; }
            break;
        }
    }
    void end_of_line() {
        skip_inline_ws();
        skip_comment();
        if (pos_ < src_.size() && peek() != '\n' && peek() != '\r') fail("unexpected trailing characters");
    }

    std::string parse_key() {
        skip_inline_ws();
        if (peek() == '"') return parse_basic_string();
        if (peek() == '\'') return parse_literal_string();
        std::size_t b = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                                      src_[pos_] == '-'))
            ++pos_;
        if (b == pos_) fail("expected a key");
        return src_.substr(b, pos_ - b);
    }
    std::vector<std::string> parse_key_path() {
        std::vector<std::string> path{parse_key()};
        for (;;) {
            skip_inline_ws();
            if (peek() != '.') break;
            ++pos_;
            path.push_back(parse_key());
        }
        return path;
    }

    Value& child_table(Value& t, const std::string& k) {
        Value* c = t.find(k);
        if (!c) return t.set(k, Value::table());
        if (c->kind == Value::Kind::Array && c->array_of_tables) return c->arr.back();
        if (!c->is_table()) fail("key '" + k + "' is not a table");
        return *c;
    }
    Value* open_path(Value& root, const std::vector<std::string>& path, bool aot) {
        Value* t = &root;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) t = &child_table(*t, path[k]);
        const std::string& last = path.back();
        Value* c = t->find(last);
        if (aot) {
            if (!c) {
                Value a = Value::array();
                a.array_of_tables = true;
                c = &t->set(last, std::move(a));
            }
            if (c->kind != Value::Kind::Array || !c->array_of_tables) fail("key '" + last + "' is not an array of tables");
            c->arr.push_back(Value::table());
            return &c->arr.back();
        }
        if (!c) return &t->set(last, Value::table());
        if (!c->is_table()) fail("key '" + last + "' is not a table");
        return c;
    }

    std::string parse_basic_string() {
        expect('"');
        std::string out;
        while (pos_ < src_.size() && src_[pos_] != '"') {
            char c = src_[pos_++];
            if (c == '\n') fail("newline in string");
            if (c == '\\') {
                char e = src_[pos_++];
                switch (e) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: fail("unsupported escape");
                }
            } else {
                out += c;
            }
        }
        expect('"');
        return out;
    }
    std::string parse_literal_string() {
        expect('\'');
        std::size_t b = pos_;
        while (pos_ < src_.size() && src_[pos_] != '\'') {
            if (src_[pos_] == '\n') fail("newline in string");
            ++pos_;
        }
        std::string out = src_.substr(b, pos_ - b);
        expect('\'');
        return out;
    }

    Value parse_value() {
        char c = peek();
        if (c == '"') return Value::of(parse_basic_string());
        if (c == '\'') return Value::of(parse_literal_string());
        if (c == '[') return parse_array();
        if (c == '{') fail("inline tables are not supported");
        std::size_t b = pos_;
        while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) && src_[pos_] != ',' &&
               src_[pos_] != ']' && src_[pos_] != '#')
            ++pos_;
        std::string tok = src_.substr(b, pos_ - b);
        if (tok == "true") return Value::of(true);
        if (tok == "false") return Value::of(false);
        return parse_number(tok);
    }
    Value parse_number(std::string tok) {
        std::string t;
        for (char c : tok)
            if (c != '_') t += c;
        if (t.empty()) fail("expected a value");
        std::string body = (t[0] == '+' || t[0] == '-') ? t.substr(1) : t;
        if (body == "inf" || body == "nan") {
            double v = body == "inf" ? INFINITY : NAN;
            return Value::of(t[0] == '-' ? -v : v);
        }
        bool is_float = t.find_first_of(".eE") != std::string::npos;
        try {
            std::size_t used = 0;
            if (is_float) {
                double v = std::stod(t, &used);
                if (used != t.size()) fail("malformed number '" + tok + "'");
                return Value::of(v);
            }
            long long v = std::stoll(t, &used, 10);
            if (used != t.size()) fail("malformed number '" + tok + "'");
            return Value::of(static_cast<std::int64_t>(v));
        } catch (const Error&) {
            throw;
        } catch (...) {
            fail("malformed value '" + tok + "'");
        }
    }
    Value parse_array() {
        expect('[');
        Value a = Value::array();
        for (;;) {
            skip_ws_lines();
            if (peek() == ']') { ++pos_; break; }
            a.arr.push_back(parse_value());
            skip_ws_lines();
            if (peek() == ',') { ++pos_; continue; }
            if (peek() == ']') { ++pos_; break; }
            fail("expected ',' or ']' in array");
        }
        return a;
    }
};

inline void write_value(std::ostream& os, const Value& v) {
    switch (v.kind) {
    case Value::Kind::Bool: os << (v.b ? "true" : "false"); break;
    case Value::Kind::Int: os << v.i; break;
    case Value::Kind::Float: os << fmt_double(v.d); break;
    case Value::Kind::String: os << quote(v.s); break;
    case Value::Kind::Array:
        os << "[";
        for (std::size_t k = 0; k < v.arr.size(); ++k) {
            if (k) os << ", ";
            write_value(os, v.arr[k]);
        }
        os << "]";
        break;
    default: break;
    }
}

inline void write_table(std::ostream& os, const Value& t, const std::string& prefix) {
    for (auto& [k, v] : t.tab)
        if (!v.is_table() && !v.array_of_tables) {
            os << k << " = ";
            write_value(os, v);
            os << "\n";
        }
    for (auto& [k, v] : t.tab) {
        std::string name = prefix.empty() ? k : prefix + "." + k;
        if (v.is_table()) {
            os << "\n[" << name << "]\n";
            write_table(os, v, name);
        } else if (v.array_of_tables) {
            for (auto& e : v.arr) {
                os << "\n[[" << name << "]]\n";
                write_table(os, e, name);
            }
        }
    }
}

} // namespace detail

inline Value parse(const std::string& text) { return detail::Parser(text).parse(); }

inline std::string dump(const Value& root) {
    std::ostringstream os;
    detail::write_table(os, root, "");
    return os.str();
}

} // namespace curvecp::toml
