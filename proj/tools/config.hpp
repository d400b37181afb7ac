#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace latboson::cli {

struct config_parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat INI-style configuration: lines of `section.key = value`, `#` or `;`
/// comments, blank lines ignored. A bare `[section]` header prefixes the
/// following keys. Overrides come in as full `section.key=value` strings.
class Config {
  public:
    Config() = default;

    void load_file(const std::string& path);
    void apply_override(const std::string& assignment);  // "section.key=value"

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    void set_line(const std::string& line, const std::string& where, const std::string& section_hint,
                  std::string* section_io);
    std::map<std::string, std::string> kv_;
};

}  // namespace latboson::cli
