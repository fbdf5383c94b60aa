#include "kinex/table.hpp"

#include <fstream>
#include <stdexcept>

#include "kinex/csv.hpp"
#include "kinex/error.hpp"

namespace kinex {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw ArgumentError("Table::add_row: column count mismatch");
    rows.push_back(std::move(row));
}

namespace {

std::string cell_text(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return csv::format_double(v); }
        std::string operator()(const std::string& s) const { return csv::quote(s); }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
        nlohmann::ordered_json operator()(double v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, c);
}

}  // namespace

std::string Table::to_csv() const {
    std::string out(csv::kSchemaLine);
    out += '\n';
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (k) out += ',';
        out += csv::quote(columns[k]);
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += cell_text(row[k]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json Table::to_json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t k = 0; k < row.size(); ++k) obj[columns[k]] = cell_json(row[k]);
        arr.push_back(std::move(obj));
    }
    return arr;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::filesystem::path write_table(const Table& t, const std::filesystem::path& dir,
                                  const std::string& stem, TableFormat format) {
    if (format == TableFormat::csv) {
        auto path = dir / (stem + ".csv");
        write_text(path, t.to_csv());
        return path;
    }
    auto path = dir / (stem + ".json");
    write_text(path, t.to_json().dump(2) + "\n");
    return path;
}

}  // namespace kinex
