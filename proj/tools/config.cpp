#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace latboson::cli {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void Config::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_parse_error("cannot open config file: " + path);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) {
                throw config_parse_error(path + ":" + std::to_string(lineno) + ": empty section");
            }
            continue;
        }
        set_line(t, path + ":" + std::to_string(lineno), section, nullptr);
    }
}

void Config::apply_override(const std::string& assignment) {
    set_line(assignment, "--set " + assignment, "", nullptr);
}

void Config::set_line(const std::string& line, const std::string& where,
                      const std::string& section_hint, std::string*) {
    auto eq = line.find('=');
    if (eq == std::string::npos) throw config_parse_error(where + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw config_parse_error(where + ": empty key");
    if (!section_hint.empty() && key.find('.') == std::string::npos) {
        key = section_hint + "." + key;
    }
    kv_[key] = val;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (trim(it->second.substr(pos)) != "") throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw config_parse_error("bad numeric value for " + key + ": " + it->second);
    }
}

int Config::get_int(const std::string& key, int fallback) const {
    double v = get_double(key, static_cast<double>(fallback));
    int r = static_cast<int>(v);
    if (static_cast<double>(r) != v) throw config_parse_error("expected integer for " + key);
    return r;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::uint64_t v = 0;
    auto sv = it->second;
    auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc{} || p != sv.data() + sv.size()) {
        throw config_parse_error("bad unsigned value for " + key + ": " + sv);
    }
    return v;
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::vector<double> out;
    std::string token;
    std::stringstream ss(it->second);
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        try {
            out.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw config_parse_error("bad list entry for " + key + ": " + token);
        }
    }
    if (out.empty()) throw config_parse_error("empty list for " + key);
    return out;
}

std::vector<int> Config::get_int_list(const std::string& key,
                                      const std::vector<int>& fallback) const {
    std::vector<double> dflt(fallback.begin(), fallback.end());
    std::vector<double> v = get_list(key, dflt);
    std::vector<int> out;
    for (double d : v) {
        int r = static_cast<int>(d);
        if (static_cast<double>(r) != d) throw config_parse_error("expected integer list for " + key);
        out.push_back(r);
    }
    return out;
}

}  // namespace latboson::cli
