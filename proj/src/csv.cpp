#include "qosc/csv.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qosc/errors.hpp"

namespace qosc::csv {

namespace {

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

double parse_number(const std::string& tok, const std::string& path, int line) {
    const char* s = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    while (end != nullptr && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == s || end == nullptr || *end != '\0')
        throw ConfigError(path + ":" + std::to_string(line) + ": bad number '" +
                          tok + "'");
    return v;
}

}  // namespace

void write_table(const Table& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("write_table: cannot open " + path);
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c > 0) f << ',';
        f << t.columns[c];
    }
    f << '\n';
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size())
            throw ValidationError("write_table: row width differs from header");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) f << ',';
            f << format_value(row[c]);
        }
        f << '\n';
    }
    if (!f) throw IoError("write_table: write failed for " + path);
}

ProfileData load_profile(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("load_profile: cannot open " + path);
    ProfileData d;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen && (std::isalpha(static_cast<unsigned char>(line[0])) != 0)) {
            if (line != "omega,log_mag")
                throw ConfigError(path + ":1: expected header 'omega,log_mag'");
            header_seen = true;
            continue;
        }
        header_seen = true;
        std::istringstream ss(line);
        std::string a, b, extra;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected two columns");
        if (std::getline(ss, extra, ','))
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected two columns");
        d.omega.push_back(parse_number(a, path, lineno));
        d.log_mag.push_back(parse_number(b, path, lineno));
    }
    if (d.omega.empty())
        throw ConfigError(path + ": no profile rows");
    return d;
}

void save_profile(const ProfileData& d, const std::string& path) {
    if (d.omega.size() != d.log_mag.size())
        throw ValidationError("save_profile: column lengths differ");
    Table t;
    t.columns = {"omega", "log_mag"};
    t.rows.reserve(d.omega.size());
    for (std::size_t i = 0; i < d.omega.size(); ++i)
        t.rows.push_back({d.omega[i], d.log_mag[i]});
    write_table(t, path);
}

}  // namespace qosc::csv
