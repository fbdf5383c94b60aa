#pragma once

// Column-oriented output table written as CSV (with the schema comment line)
// or as a JSON array of row objects.

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace kinex {

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);

    std::string to_csv() const;
    nlohmann::ordered_json to_json() const;
};

enum class TableFormat { csv, json };

/// Writes `<stem>.csv` or `<stem>.json` under `dir` and returns the path.
std::filesystem::path write_table(const Table& t, const std::filesystem::path& dir,
                                  const std::string& stem, TableFormat format);

/// Writes text, creating parent directories; throws std::runtime_error on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace kinex
