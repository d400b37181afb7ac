#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#ifndef LATBOSON_VERSION
#define LATBOSON_VERSION "v0.1.0"
#endif

namespace latboson::cli {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) out += ',';
        out += t.header[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (std::isfinite(row[i])) out += fmt17(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Table& t, const Config& cfg, const std::string& subcommand,
                    const std::map<std::string, double>& extras, double wall_seconds) {
    nlohmann::json doc;
    doc["version"] = LATBOSON_VERSION;
    doc["subcommand"] = subcommand;
    doc["wall_time_seconds"] = wall_seconds;
    doc["config"] = nlohmann::json::object();
    for (const auto& [k, v] : cfg.entries()) doc["config"][k] = v;
    doc["table"]["header"] = t.header;
    bool nonfinite = false;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (double v : row) {
            if (std::isfinite(v)) {
                r.push_back(v);
            } else {
                r.push_back(nullptr);
                nonfinite = true;
            }
        }
        rows.push_back(std::move(r));
    }
    doc["table"]["rows"] = std::move(rows);
    for (const auto& [k, v] : extras) {
        if (std::isfinite(v)) {
            doc["extras"][k] = v;
        } else {
            doc["extras"][k] = nullptr;
            nonfinite = true;
        }
    }
    doc["error"] = nonfinite ? nlohmann::json("non-finite values replaced by null")
                             : nlohmann::json(nullptr);
    return doc.dump(2) + "\n";
}

void emit(const Table& t, const Config& cfg, const std::string& subcommand,
          const std::map<std::string, double>& extras, double wall_seconds,
          const std::string& path, const std::string& format) {
    std::string body =
        format == "json" ? to_json(t, cfg, subcommand, extras, wall_seconds) : to_csv(t);
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << body;
}

}  // namespace latboson::cli
