#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "nvfield/error.hpp"

#if defined(__unix__) || defined(__APPLE__)
#include <unistd.h>
#endif

namespace nvfield::io {

/// Shortest round-trip decimal form; identical bits give identical text.
inline std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw IoError("format_number: conversion failed");
    return std::string(buf, end);
}

/// Writes `contents` to `path` through a sibling temporary and a rename, so
/// readers never see a partial file.
inline void write_atomic(const std::filesystem::path& path, std::string_view contents) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    long pid = 0;
#if defined(__unix__) || defined(__APPLE__)
    pid = static_cast<long>(::getpid());
#endif
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(pid);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            throw IoError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

struct Column {
    std::string name;
    std::string unit;
};

/// Column-labelled numeric table; CSV headers read `name [unit]`.
struct Table {
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> r) {
        if (r.size() != columns.size()) throw ArgumentError("Table: row width does not match header");
        rows.push_back(std::move(r));
    }
};

inline std::string to_csv(const Table& t) {
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) s += ',';
        s += t.columns[i].name + " [" + t.columns[i].unit + "]";
    }
    s += '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) s += ',';
            s += format_number(r[i]);
        }
        s += '\n';
    }
    return s;
}

inline nlohmann::ordered_json to_json(const Table& t, const std::string& kind) {
    nlohmann::ordered_json j;
    j["kind"] = kind;
    j["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : t.columns) j["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) j["rows"].push_back(r);
    return j;
}

/// JSON text with numbers in shortest round-trip form.
inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// CSV input
// ---------------------------------------------------------------------------

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view field, const std::string& source, std::size_t line) {
    field = trim(field);
    if (field.empty()) throw ParseError(source, line, "empty field");
    if (field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(source, line, "not a number: '" + std::string(field) + "'");
    if (!std::isfinite(v)) throw ParseError(source, line, "non-finite value");
    return v;
}

/// Parses numeric CSV text. Blank lines and lines starting with '#' are
/// skipped; a first non-numeric row is treated as a header. Every data row
/// must have between min_cols and max_cols fields.
inline std::vector<std::vector<double>> parse_csv(std::string_view text, std::size_t min_cols, std::size_t max_cols,
                                                  const std::string& source = "<csv>") {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    bool header_allowed = true;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (header_allowed) {
            header_allowed = false;
            double dummy;
            const auto f = trim(fields[0]);
            const auto first = f.empty() || f.front() != '+' ? f : f.substr(1);
            auto [p, ec] = std::from_chars(first.data(), first.data() + first.size(), dummy);
            if (ec != std::errc{} || p != first.data() + first.size()) continue;
        }
        if (fields.size() < min_cols || fields.size() > max_cols)
            throw ParseError(source, line_no,
                             "expected " + (min_cols == max_cols ? std::to_string(min_cols)
                                                                 : std::to_string(min_cols) + "-" + std::to_string(max_cols)) +
                                 " columns, found " + std::to_string(fields.size()));
        std::vector<double> row;
        for (auto f : fields) row.push_back(parse_number(f, source, line_no));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<std::vector<double>> read_csv(const std::filesystem::path& path, std::size_t min_cols,
                                                 std::size_t max_cols) {
    return parse_csv(read_file(path), min_cols, max_cols, path.string());
}

}  // namespace nvfield::io
