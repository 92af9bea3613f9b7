// Run output: one table plus a summary, written as a versioned JSON document or as
// RFC-4180 CSV whose rows repeat the run parameters.
#pragma once

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace geolab::cli {

using json = nlohmann::ordered_json;

struct Report {
    std::string command;
    json parameters = json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    json summary = json::object();
    bool check_failed = false;

    void add_row(std::vector<json> r) {
        if (r.size() != columns.size()) throw std::logic_error("Report: row width does not match the header");
        rows.push_back(std::move(r));
    }
};

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + scalar_text(v[i]);
        return s;
    }
    if (v.is_null()) return "";
    return v.dump();
}

inline std::string to_json_text(const Report& r) {
    json doc;
    doc["schema"] = 1;
    doc["command"] = r.command;
    doc["parameters"] = r.parameters;
    doc["status"] = r.check_failed ? "check_failed" : "ok";
    doc["summary"] = r.summary;
    doc["columns"] = r.columns;
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back(row);
    doc["rows"] = rows;
    return doc.dump(2) + "\n";
}

inline std::string to_csv_text(const Report& r) {
    std::ostringstream s;
    std::vector<std::string> head;
    for (auto it = r.parameters.begin(); it != r.parameters.end(); ++it) head.push_back("param_" + it.key());
    for (const auto& c : r.columns) head.push_back(c);
    for (std::size_t i = 0; i < head.size(); ++i) s << (i ? "," : "") << csv_field(head[i]);
    s << "\r\n";
    for (const auto& row : r.rows) {
        bool first = true;
        for (auto it = r.parameters.begin(); it != r.parameters.end(); ++it) {
            s << (first ? "" : ",") << csv_field(scalar_text(it.value()));
            first = false;
        }
        for (const auto& v : row) {
            s << (first ? "" : ",") << csv_field(scalar_text(v));
            first = false;
        }
        s << "\r\n";
    }
    return s.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace geolab::cli
