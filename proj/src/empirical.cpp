#include "kinex/empirical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "kinex/csv.hpp"
#include "kinex/error.hpp"

namespace kinex {

namespace {

constexpr std::array<std::string_view, 5> kColumns = {"country", "f", "g", "lambda", "gamma"};

bool is_missing(std::string_view cell) {
    return cell.empty() || cell == "-" || cell == "\xE2\x80\x94" || cell == "\xE2\x80\x93";
}

std::optional<double> read_cell(std::string_view cell, std::size_t line, std::string_view col) {
    if (is_missing(cell)) return std::nullopt;
    auto v = csv::parse_double(cell);
    if (!v)
        throw ParseError(line, "column '" + std::string(col) + "': not a number: '" +
                                   std::string(cell) + "'");
    return v;
}

void require_unit(const std::optional<double>& v, std::size_t line, std::string_view col) {
    if (v && !(*v >= 0.0 && *v <= 1.0))
        throw ParseError(line, "column '" + std::string(col) + "' must lie in [0, 1]");
}

}  // namespace

LoadResult load_countries(std::istream& in) {
    LoadResult out;
    std::array<std::optional<std::size_t>, kColumns.size()> where;
    std::size_t n_fields = 0;
    bool have_header = false;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;

        auto fields = csv::split_line(line);
        if (!fields) throw ParseError(lineno, "unterminated quoted field");

        if (!have_header) {
            for (std::size_t k = 0; k < fields->size(); ++k) {
                const auto& name = (*fields)[k];
                const auto it = std::find(kColumns.begin(), kColumns.end(), name);
                if (it == kColumns.end()) {
                    out.warnings.push_back("line " + std::to_string(lineno) +
                                           ": unknown column '" + name + "' ignored");
                    continue;
                }
                auto& slot = where[static_cast<std::size_t>(it - kColumns.begin())];
                if (slot) throw ParseError(lineno, "duplicate column '" + name + "'");
                slot = k;
            }
            for (std::size_t c = 0; c < kColumns.size(); ++c)
                if (!where[c])
                    throw ParseError(lineno,
                                     "header is missing column '" + std::string(kColumns[c]) + "'");
            n_fields = fields->size();
            have_header = true;
            continue;
        }

        if (fields->size() != n_fields)
            throw ParseError(lineno, "expected " + std::to_string(n_fields) + " fields, got " +
                                         std::to_string(fields->size()));
        const auto cell = [&](std::size_t c) -> const std::string& { return (*fields)[*where[c]]; };

        CountryRecord rec;
        rec.name = cell(0);
        if (rec.name.empty()) throw ParseError(lineno, "country name is empty");
        const auto f = read_cell(cell(1), lineno, "f");
        if (!f || *f < 0.0) throw ParseError(lineno, "column 'f' must be a non-negative number");
        rec.f = *f;
        rec.g = read_cell(cell(2), lineno, "g");
        rec.lambda = read_cell(cell(3), lineno, "lambda");
        rec.gamma = read_cell(cell(4), lineno, "gamma");
        require_unit(rec.lambda, lineno, "lambda");
        require_unit(rec.gamma, lineno, "gamma");
        if (rec.g && *rec.g >= 1.0) throw ParseError(lineno, "column 'g' must be below 1");
        if (rec.g && *rec.g <= 0.0) {
            rec.g.reset();
            rec.g_rejected = true;
            out.warnings.push_back("line " + std::to_string(lineno) + ": " + rec.name +
                                   " has g <= 0, treated as missing");
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

std::string_view to_string(Group g) {
    switch (g) {
        case Group::high: return "high";
        case Group::middle: return "middle";
        case Group::low: return "low";
        case Group::unassigned: break;
    }
    return "unassigned";
}

DeriveResult derive(std::span<const CountryRecord> records) {
    DeriveResult out;
    double f_max = -1.0;
    for (const auto& r : records)
        if (r.complete()) f_max = std::max(f_max, r.f);
    if (f_max < 0.0) throw EmptyInputError("no complete country record");

    for (const auto& r : records) {
        if (!r.complete()) {
            out.excluded.push_back(r.name);
            continue;
        }
        DerivedRecord d;
        d.record = r;
        d.x = (1.0 - *r.lambda) * *r.gamma;
        d.f_norm = f_max > 0.0 ? r.f / f_max : 0.0;
        d.y = d.f_norm / *r.g;
        out.records.push_back(std::move(d));
    }
    return out;
}

namespace {

double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

GroupThresholds default_thresholds(std::span<const DerivedRecord> records) {
    if (records.empty()) throw EmptyInputError("default_thresholds: no records");
    std::vector<double> fs;
    fs.reserve(records.size());
    for (const auto& d : records) fs.push_back(d.record.f);
    return {percentile(fs, 0.33), percentile(fs, 0.67)};
}

std::vector<DerivedRecord> classify_groups(std::span<const DerivedRecord> records,
                                           GroupThresholds thresholds) {
    if (!(thresholds.low < thresholds.high))
        throw ArgumentError("classify_groups: need low threshold < high threshold");
    std::vector<DerivedRecord> out(records.begin(), records.end());
    for (auto& d : out) {
        if (d.record.f >= thresholds.high)
            d.group = Group::high;
        else if (d.record.f < thresholds.low)
            d.group = Group::low;
        else
            d.group = Group::middle;
    }
    return out;
}

std::vector<GroupFit> fit_groups(std::span<const DerivedRecord> records) {
    std::vector<GroupFit> fits;
    for (Group g : {Group::high, Group::middle, Group::low}) {
        GroupFit gf;
        gf.group = g;
        std::vector<XYPoint> pts;
        for (const auto& d : records) {
            if (d.group != g) continue;
            gf.members.push_back(d.record.name);
            if (d.x > 0.0) pts.push_back({std::log(d.x), d.y});
        }
        if (pts.size() < 2) {
            gf.note = "fewer than 2 members with x > 0";
        } else {
            try {
                gf.fit = fit_linear(pts);
            } catch (const SingularFitError& e) {
                gf.note = e.what();
            }
        }
        fits.push_back(std::move(gf));
    }
    return fits;
}

}  // namespace kinex
