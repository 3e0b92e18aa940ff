#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

// Flat INI-style run configuration:
//
//   [section]
//   key = 3.5            # number
//   name = "text"        # quoted string
//   flag = true          # boolean
//   s = [1e-4, 1e-2, 25, log]   # sweep: start, stop, count, lin|log
//
// Keys are addressed as "section.key". Duplicate keys are an error, '#'
// starts a comment. No nesting, no multi-line values.

namespace qosc::cfg {

struct SweepSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    bool log_spaced = false;

    std::vector<double> values() const;
};

class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    bool is_sweep(const std::string& key) const;

    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    SweepSpec sweep(const std::string& key) const;

    // keys of one section, insertion order
    std::vector<std::string> section_keys(const std::string& section) const;
    bool has_section(const std::string& section) const;

    // flat key -> printable value, for manifests
    std::vector<std::pair<std::string, std::string>> entries() const;

    // override or insert a numeric entry (sweep executor uses this)
    void set_number(const std::string& key, double value);

  private:
    enum class Kind { number, text, boolean, sweep };
    struct Value {
        Kind kind = Kind::number;
        double num = 0.0;
        std::string str;
        bool flag = false;
        SweepSpec sw;
    };

    const Value& get(const std::string& key, Kind kind) const;

    std::map<std::string, Value> map_;
    std::vector<std::string> order_;
};

}  // namespace qosc::cfg
