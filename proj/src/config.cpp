#include "qosc/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qosc/errors.hpp"

namespace qosc::cfg {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])) != 0) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])) != 0) --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '_' &&
            c != '-' && c != '.')
            return false;
    }
    return true;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& tok, const std::string& origin, int line) {
    const char* s = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || end == nullptr || *end != '\0')
        fail(origin, line, "bad number '" + tok + "'");
    return v;
}

}  // namespace

std::vector<double> SweepSpec::values() const {
    if (count < 1) throw ConfigError("sweep: count must be at least 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(start);
        return out;
    }
    if (log_spaced) {
        if (!(start > 0.0) || !(stop > 0.0))
            throw ConfigError("sweep: log spacing needs positive endpoints");
        const double la = std::log(start);
        const double lb = std::log(stop);
        for (int i = 0; i < count; ++i)
            out.push_back(std::exp(la + (lb - la) * i / (count - 1)));
    } else {
        for (int i = 0; i < count; ++i)
            out.push_back(start + (stop - start) * i / (count - 1));
    }
    return out;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("config: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_string(ss.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config out;
    std::istringstream stream(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(stream, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!valid_name(section)) fail(origin, lineno, "bad section name");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!valid_name(key)) fail(origin, lineno, "bad key name");
        if (val.empty()) fail(origin, lineno, "empty value");

        const std::string full = section.empty() ? key : section + "." + key;
        if (out.map_.count(full) != 0) fail(origin, lineno, "duplicate key " + full);

        Value v;
        if (val.front() == '"') {
            if (val.size() < 2 || val.back() != '"')
                fail(origin, lineno, "unterminated string");
            v.kind = Kind::text;
            v.str = val.substr(1, val.size() - 2);
        } else if (val == "true" || val == "false") {
            v.kind = Kind::boolean;
            v.flag = val == "true";
        } else if (val.front() == '[') {
            if (val.back() != ']') fail(origin, lineno, "unterminated array");
            std::istringstream items(val.substr(1, val.size() - 2));
            std::vector<std::string> toks;
            std::string tok;
            while (std::getline(items, tok, ',')) toks.push_back(trim(tok));
            if (toks.size() != 4)
                fail(origin, lineno, "sweep arrays are [start, stop, count, lin|log]");
            v.kind = Kind::sweep;
            v.sw.start = parse_double(toks[0], origin, lineno);
            v.sw.stop = parse_double(toks[1], origin, lineno);
            const double cnt = parse_double(toks[2], origin, lineno);
            if (cnt < 1.0 || cnt != std::floor(cnt) || cnt > 1e7)
                fail(origin, lineno, "sweep count must be a small positive integer");
            v.sw.count = static_cast<int>(cnt);
            if (toks[3] == "log")
                v.sw.log_spaced = true;
            else if (toks[3] == "lin")
                v.sw.log_spaced = false;
            else
                fail(origin, lineno, "sweep spacing must be lin or log");
        } else {
            v.kind = Kind::number;
            v.num = parse_double(val, origin, lineno);
        }
        out.map_.emplace(full, std::move(v));
        out.order_.push_back(full);
    }
    return out;
}

bool Config::has(const std::string& key) const { return map_.count(key) != 0; }

bool Config::is_sweep(const std::string& key) const {
    auto it = map_.find(key);
    return it != map_.end() && it->second.kind == Kind::sweep;
}

const Config::Value& Config::get(const std::string& key, Kind kind) const {
    auto it = map_.find(key);
    if (it == map_.end()) throw ConfigError("config: missing key " + key);
    if (it->second.kind != kind)
        throw ConfigError("config: wrong type for key " + key);
    return it->second;
}

double Config::number(const std::string& key) const { return get(key, Kind::number).num; }

double Config::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

std::string Config::text(const std::string& key) const { return get(key, Kind::text).str; }

std::string Config::text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
}

bool Config::flag_or(const std::string& key, bool fallback) const {
    return has(key) ? get(key, Kind::boolean).flag : fallback;
}

SweepSpec Config::sweep(const std::string& key) const { return get(key, Kind::sweep).sw; }

std::vector<std::string> Config::section_keys(const std::string& section) const {
    std::vector<std::string> out;
    const std::string prefix = section + ".";
    for (const auto& key : order_) {
        if (key.rfind(prefix, 0) == 0) out.push_back(key);
    }
    return out;
}

bool Config::has_section(const std::string& section) const {
    return !section_keys(section).empty();
}

std::vector<std::pair<std::string, std::string>> Config::entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(order_.size());
    for (const auto& key : order_) {
        const Value& v = map_.at(key);
        std::string repr;
        switch (v.kind) {
            case Kind::number: {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.17g", v.num);
                repr = buf;
                break;
            }
            case Kind::text:
                repr = v.str;
                break;
            case Kind::boolean:
                repr = v.flag ? "true" : "false";
                break;
            case Kind::sweep: {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "[%.17g, %.17g, %d, %s]", v.sw.start,
                              v.sw.stop, v.sw.count, v.sw.log_spaced ? "log" : "lin");
                repr = buf;
                break;
            }
        }
        out.emplace_back(key, repr);
    }
    return out;
}

void Config::set_number(const std::string& key, double value) {
    auto it = map_.find(key);
    if (it == map_.end()) {
        Value v;
        v.kind = Kind::number;
        v.num = value;
        map_.emplace(key, v);
        order_.push_back(key);
    } else {
        it->second.kind = Kind::number;
        it->second.num = value;
    }
}

}  // namespace qosc::cfg
