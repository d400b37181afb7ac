#pragma once

#include <map>
#include <string>
#include <vector>

#include "config.hpp"

namespace latboson::cli {

/// One results table: fixed header, numeric rows. Non-finite entries are
/// emitted as empty CSV cells / JSON nulls with an error note.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Full-precision decimal rendering (17 significant digits).
std::string fmt17(double v);

std::string to_csv(const Table& t);

/// JSON document with config echo, version, wall time, the table, and any
/// scalar extras.
std::string to_json(const Table& t, const Config& cfg, const std::string& subcommand,
                    const std::map<std::string, double>& extras, double wall_seconds);

/// Writes to `path` ("-" or empty = stdout) in `format` ("csv" or "json").
void emit(const Table& t, const Config& cfg, const std::string& subcommand,
          const std::map<std::string, double>& extras, double wall_seconds,
          const std::string& path, const std::string& format);

}  // namespace latboson::cli
