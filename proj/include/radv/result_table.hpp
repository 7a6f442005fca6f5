#pragma once

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "radv/errors.hpp"

namespace radv {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Rectangular table with unique column names and an ordered metadata block.
///
/// CSV: '#'-prefixed "key: value" metadata lines, one header line, then rows.
/// Reals are written with 17 significant digits so they round-trip.
class ResultTable {
public:
    ResultTable() = default;

    explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (columns_[i] == columns_[j]) throw std::invalid_argument("duplicate column " + columns_[i]);
    }

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns_.size()) throw std::invalid_argument("row width does not match columns");
        rows_.push_back(std::move(row));
    }

    void set_meta(const std::string& key, std::string value) {
        for (auto& [k, v] : metadata_)
            if (k == key) {
                v = std::move(value);
                return;
            }
        metadata_.emplace_back(key, std::move(value));
    }

    const std::string* meta(const std::string& key) const {
        for (const auto& [k, v] : metadata_)
            if (k == key) return &v;
        return nullptr;
    }

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& metadata() const noexcept { return metadata_; }

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            if (columns_[i] == name) return i;
        throw std::out_of_range("no column " + name);
    }

    static std::string format_real(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    static std::string format_cell(const Cell& c) {
        return std::visit(
            [](const auto& v) -> std::string {
                using V = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<V, double>) return format_real(v);
                else if constexpr (std::is_same_v<V, std::int64_t>) return std::to_string(v);
                else if constexpr (std::is_same_v<V, bool>) return v ? "true" : "false";
                else return v;
            },
            c);
    }

    std::string to_csv() const {
        std::ostringstream os;
        for (const auto& [k, v] : metadata_) os << "# " << k << ": " << v << '\n';
        for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << quote(columns_[i]);
        os << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << quote(format_cell(row[i]));
            os << '\n';
        }
        return os.str();
    }

    nlohmann::ordered_json to_json_value() const {
        nlohmann::ordered_json meta = nlohmann::ordered_json::object();
        for (const auto& [k, v] : metadata_) meta[k] = v;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : rows_) {
            nlohmann::ordered_json r = nlohmann::ordered_json::array();
            for (const auto& c : row) std::visit([&](const auto& v) { r.push_back(v); }, c);
            rows.push_back(std::move(r));
        }
        return {{"metadata", meta}, {"columns", columns_}, {"rows", rows}};
    }

    std::string to_json() const { return to_json_value().dump(2) + "\n"; }

    std::string render(const std::string& format) const { return format == "json" ? to_json() : to_csv(); }

    static ResultTable from_json(const std::string& text) {
        const auto doc = nlohmann::ordered_json::parse(text);
        ResultTable t(doc.at("columns").get<std::vector<std::string>>());
        for (const auto& [k, v] : doc.at("metadata").items()) t.set_meta(k, v.get<std::string>());
        for (const auto& r : doc.at("rows")) {
            std::vector<Cell> row;
            for (const auto& c : r) {
                if (c.is_boolean()) row.emplace_back(c.get<bool>());
                else if (c.is_number_integer()) row.emplace_back(c.get<std::int64_t>());
                else if (c.is_number()) row.emplace_back(c.get<double>());
                else row.emplace_back(c.get<std::string>());
            }
            t.add_row(std::move(row));
        }
        return t;
    }

    /// Parses CSV written by to_csv. Cells come back as strings.
    static ResultTable from_csv(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        std::vector<std::pair<std::string, std::string>> meta;
        while (std::getline(in, line) && line.rfind("# ", 0) == 0) {
            const auto colon = line.find(": ", 2);
            if (colon == std::string::npos) throw std::invalid_argument("malformed metadata line");
            meta.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
        }
        ResultTable t(split(line));
        for (auto& [k, v] : meta) t.set_meta(k, v);
        while (std::getline(in, line)) {
            std::vector<Cell> row;
            for (auto& s : split(line)) row.emplace_back(std::move(s));
            t.add_row(std::move(row));
        }
        return t;
    }

private:
    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + '"';
    }

    static std::vector<std::string> split(const std::string& line) {
        std::vector<std::string> out(1);
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    out.back() += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    out.back() += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                out.emplace_back();
            } else {
                out.back() += c;
            }
        }
        return out;
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> metadata_;
};

} // namespace radv
