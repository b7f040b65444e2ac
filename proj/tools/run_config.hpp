#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace latgas::cli {

/// Config-file or flag error carrying the offending field and line.
struct ConfigError {
    std::string message;
    std::string field;
    int line = -1;
};

/// Flat key = value run file with # comments. Values keep their source line
/// so validation errors can point at them; CLI --set overrides replace file
/// values (line -1).
class RunConfig {
public:
    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& body);

    void set_override(const std::string& key, const std::string& value);

    [[nodiscard]] bool has(const std::string& key) const;

    [[nodiscard]] std::string get_string(const std::string& key) const;
    [[nodiscard]] std::string get_string(const std::string& key,
                                         const std::string& fallback) const;
    [[nodiscard]] std::int64_t get_int(const std::string& key) const;
    [[nodiscard]] std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    [[nodiscard]] double get_double(const std::string& key) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
    [[nodiscard]] std::vector<double> get_double_list(const std::string& key) const;

    /// All keys and raw values, for manifests.
    [[nodiscard]] std::map<std::string, std::string> entries() const;

    /// Keys that were never read by any getter (catches typos).
    [[nodiscard]] std::vector<std::string> unused_keys() const;

    [[noreturn]] void missing(const std::string& key) const;
    [[noreturn]] void invalid(const std::string& key, const std::string& why) const;

private:
    struct Entry {
        std::string value;
        int line = -1;
        mutable bool used = false;
    };
    std::map<std::string, Entry> entries_;
};

} // namespace latgas::cli
