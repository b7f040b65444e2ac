#include "run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace latgas::cli {
namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError{"cannot open config file '" + path + "'", "", -1};
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

RunConfig RunConfig::from_string(const std::string& body) {
    RunConfig cfg;
    std::istringstream in(body);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError{"expected 'key = value'", t, lineno};
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError{"empty key", t, lineno};
        cfg.entries_[key] = Entry{value, lineno, false};
    }
    return cfg;
}

void RunConfig::set_override(const std::string& key, const std::string& value) {
    entries_[key] = Entry{value, -1, false};
}

bool RunConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string RunConfig::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) missing(key);
    it->second.used = true;
    return it->second.value;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

std::int64_t RunConfig::get_int(const std::string& key) const {
    const std::string v = get_string(key);
    char* end = nullptr;
    const long long out = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') invalid(key, "expected an integer, got '" + v + "'");
    return out;
}

std::int64_t RunConfig::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double RunConfig::get_double(const std::string& key) const {
    const std::string v = get_string(key);
    char* end = nullptr;
    const double out = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') invalid(key, "expected a number, got '" + v + "'");
    return out;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    invalid(key, "expected a boolean, got '" + v + "'");
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
    const std::string v = get_string(key);
    std::vector<double> out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const std::string t = trim(item);
        const double x = std::strtod(t.c_str(), &end);
        if (end == t.c_str() || *end != '\0')
            invalid(key, "expected a comma-separated number list, got '" + v + "'");
        out.push_back(x);
    }
    if (out.empty()) invalid(key, "empty list");
    return out;
}

std::map<std::string, std::string> RunConfig::entries() const {
    std::map<std::string, std::string> out;
    for (const auto& [k, e] : entries_) out[k] = e.value;
    return out;
}

std::vector<std::string> RunConfig::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, e] : entries_)
        if (!e.used) out.push_back(k);
    return out;
}

void RunConfig::missing(const std::string& key) const {
    throw ConfigError{"missing required field '" + key + "'", key, -1};
}

void RunConfig::invalid(const std::string& key, const std::string& why) const {
    const auto it = entries_.find(key);
    throw ConfigError{"field '" + key + "': " + why, key,
                      it == entries_.end() ? -1 : it->second.line};
}

} // namespace latgas::cli
