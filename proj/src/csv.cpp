#include "kinex/csv.hpp"

#include <charconv>
#include <cmath>

namespace kinex::csv {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::optional<std::vector<std::string>> split_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        // Skip leading blanks so ` "a, b"` still parses as quoted.
        std::size_t start = pos;
        while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;

        if (start < line.size() && line[start] == '"') {
            std::string field;
            std::size_t k = start + 1;
            bool closed = false;
            while (k < line.size()) {
                if (line[k] == '"') {
                    if (k + 1 < line.size() && line[k + 1] == '"') {
                        field += '"';
                        k += 2;
                        continue;
                    }
                    closed = true;
                    ++k;
                    break;
                }
                field += line[k++];
            }
            if (!closed) return std::nullopt;
            const auto comma = line.find(',', k);
            fields.push_back(std::move(field));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        } else {
            const auto comma = line.find(',', pos);
            fields.emplace_back(trim(line.substr(pos, comma == std::string_view::npos
                                                          ? std::string_view::npos
                                                          : comma - pos)));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    }
    return fields;
}

std::string quote(std::string_view field) {
    const bool needs = field.find_first_of(",\"\n") != std::string_view::npos ||
                       (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

}  // namespace kinex::csv
