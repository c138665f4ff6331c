#pragma once

// Minimal TOML-like config reader/writer: [section] headers, `key = value`
// lines, `#` comments. Values are strings ("quoted" or bare), booleans,
// numbers, or flat arrays of numbers `[a, b, c]`. That is the whole grammar;
// nested tables are not supported.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cotrack/errors.hpp"

namespace cotrack {

class KvConfig {
  public:
    KvConfig() = default;

    static KvConfig parse_text(const std::string& text, const std::string& origin = "<string>") {
        KvConfig kv;
        std::istringstream in(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = strip(line);
            if (s.empty() || s[0] == '#') continue;
            if (s.front() == '[') {
                if (s.back() != ']')
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
                section = strip(s.substr(1, s.size() - 2));
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected `key = value`");
            std::string key = strip(s.substr(0, eq));
            std::string val = strip(s.substr(eq + 1));
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            kv.set_raw(section.empty() ? key : section + "." + key, val);
        }
        return kv;
    }

    static KvConfig parse_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config file: " + path);
        std::ostringstream buf;
        buf << f.rdbuf();
        return parse_text(buf.str(), path);
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key) const {
        const std::string& raw = raw_of(key);
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
            return raw.substr(1, raw.size() - 2);
        return raw;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        return has(key) ? get_string(key) : fallback;
    }

    double get_double(const std::string& key) const {
        const std::string raw = get_string(key);
        try {
            std::size_t pos = 0;
            const double v = std::stod(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key `" + key + "`: not a number: " + raw);
        }
    }

    double get_double(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    long long get_int(const std::string& key) const {
        const std::string raw = get_string(key);
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key `" + key + "`: not an integer: " + raw);
        }
    }

    long long get_int(const std::string& key, long long fallback) const {
        return has(key) ? get_int(key) : fallback;
    }

    bool get_bool(const std::string& key) const {
        const std::string raw = get_string(key);
        if (raw == "true") return true;
        if (raw == "false") return false;
        throw ConfigError("config key `" + key + "`: not a boolean: " + raw);
    }

    bool get_bool(const std::string& key, bool fallback) const {
        return has(key) ? get_bool(key) : fallback;
    }

    std::vector<double> get_double_list(const std::string& key) const {
        const std::string& raw = raw_of(key);
        if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']')
            throw ConfigError("config key `" + key + "`: expected [a, b, ...]: " + raw);
        std::vector<double> out;
        std::string body = raw.substr(1, raw.size() - 2);
        std::istringstream in(body);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            tok = strip(tok);
            if (tok.empty()) continue;
            try {
                out.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("config key `" + key + "`: bad list element: " + tok);
            }
        }
        return out;
    }

    std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const {
        return has(key) ? get_double_list(key) : fallback;
    }

    std::vector<std::string> get_string_list(const std::string& key) const {
        const std::string& raw = raw_of(key);
        if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']')
            throw ConfigError("config key `" + key + "`: expected [\"a\", ...]: " + raw);
        std::vector<std::string> out;
        std::string body = raw.substr(1, raw.size() - 2);
        std::istringstream in(body);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            tok = strip(tok);
            if (tok.empty()) continue;
            if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
                tok = tok.substr(1, tok.size() - 2);
            out.push_back(tok);
        }
        return out;
    }

    // --- writing ---

    void set_raw(const std::string& key, const std::string& raw) {
        if (!values_.count(key)) order_.push_back(key);
        values_[key] = raw;
    }

    void set_string(const std::string& key, const std::string& v) { set_raw(key, "\"" + v + "\""); }
    void set_int(const std::string& key, long long v) { set_raw(key, std::to_string(v)); }
    void set_bool(const std::string& key, bool v) { set_raw(key, v ? "true" : "false"); }

    void set_double(const std::string& key, double v) { set_raw(key, format_double(v)); }

    void set_double_list(const std::string& key, const std::vector<double>& vs) {
        std::string raw = "[";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) raw += ", ";
            raw += format_double(vs[i]);
        }
        raw += "]";
        set_raw(key, raw);
    }

    // Copies every entry of `other`, overwriting duplicates.
    void merge(const KvConfig& other) {
        for (const auto& key : other.order_) set_raw(key, other.values_.at(key));
    }

    // Serializes with keys grouped under their sections, in insertion order.
    std::string to_text() const {
        std::ostringstream out;
        std::string current_section;
        bool first = true;
        for (const auto& key : order_) {
            const auto dot = key.rfind('.');
            const std::string section = dot == std::string::npos ? "" : key.substr(0, dot);
            const std::string leaf = dot == std::string::npos ? key : key.substr(dot + 1);
            if (section != current_section) {
                if (!first) out << "\n";
                out << "[" << section << "]\n";
                current_section = section;
            }
            out << leaf << " = " << values_.at(key) << "\n";
            first = false;
        }
        return out.str();
    }

    void write_file(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw DataError("cannot write config file: " + path);
        f << to_text();
    }

    const std::vector<std::string>& keys() const { return order_; }

    static std::string format_double(double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

  private:
    const std::string& raw_of(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing config key: " + key);
        return it->second;
    }

    static std::string strip(const std::string& s) {
        std::size_t b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        std::size_t e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
};

}  // namespace cotrack
