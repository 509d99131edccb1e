#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "slowlight/errors.hpp"

namespace slowlight {

/// Shortest round-trip decimal representation (printf %.17g is exact for
/// doubles; a locale-independent fixed format keeps output byte-stable).
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

/// Generic numeric table with '#'-prefixed metadata lines above the header.
struct CsvTable {
    std::vector<std::string> metadata;  // emitted as "# key: value"
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_meta(const std::string& key, const std::string& value) {
        metadata.push_back(key + ": " + value);
    }
};

inline std::string render_csv(const CsvTable& table) {
    std::ostringstream out;
    for (const auto& m : table.metadata) out << "# " << m << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out << ",";
        out << table.columns[i];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw io_error("render_csv: row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << format_number(row[i]);
        }
        out << "\n";
    }
    return out.str();
}

inline void emit_csv(const CsvTable& table, const std::string& path) {
    const std::string body = render_csv(table);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("emit_csv: cannot open '" + path + "' for writing");
    f << body;
    f.flush();
    if (!f) throw io_error("emit_csv: write failed for '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    if (!f && !f.eof()) throw io_error("read failed for '" + path + "'");
    return ss.str();
}

}  // namespace slowlight
