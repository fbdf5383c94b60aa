#pragma once

// Country-level indicators mapped onto the model variables: GDP per capita as
// flow f, Gini as g, gross savings as lambda and tax revenue as gamma.

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kinex/fitting.hpp"

namespace kinex {

struct CountryRecord {
    std::string name;
    double f = 0.0;
    std::optional<double> g;
    std::optional<double> lambda;
    std::optional<double> gamma;
    bool g_rejected = false;  // a published g <= 0 was read and discarded

    bool complete() const { return g && lambda && gamma; }
};

struct LoadResult {
    std::vector<CountryRecord> records;
    std::vector<std::string> warnings;
};

/// Reads a header row naming `country,f,g,lambda,gamma` (any order, extra
/// columns ignored with a warning) and one record per line. Empty cells and
/// dashes are missing values. Lines starting with '#' and blank lines are
/// skipped. Throws ParseError with the 1-based line number.
LoadResult load_countries(std::istream& in);

enum class Group { unassigned, high, middle, low };

std::string_view to_string(Group g);

struct DerivedRecord {
    CountryRecord record;
    double x = 0.0;       // (1-lambda)*gamma
    double f_norm = 0.0;  // f / max f over complete records
    double y = 0.0;       // f_norm / g
    Group group = Group::unassigned;
};

struct DeriveResult {
    std::vector<DerivedRecord> records;  // complete records, input order
    std::vector<std::string> excluded;   // names of incomplete records
};

/// Throws EmptyInputError when no record is complete.
DeriveResult derive(std::span<const CountryRecord> records);

struct GroupThresholds {
    double low = 0.0;   // f < low is the low group
    double high = 0.0;  // f >= high is the high group
};

/// 33rd and 67th percentiles of f (linear interpolation between order statistics).
GroupThresholds default_thresholds(std::span<const DerivedRecord> records);

/// Throws ArgumentError unless low < high.
std::vector<DerivedRecord> classify_groups(std::span<const DerivedRecord> records,
                                           GroupThresholds thresholds);

struct GroupFit {
    Group group = Group::unassigned;
    std::vector<std::string> members;
    std::optional<FitResult> fit;  // y against ln x; empty when unfittable
    std::string note;
};

/// One fit per group, in the order high, middle, low. Groups with fewer than
/// two usable members are returned without a fit and with a note.
std::vector<GroupFit> fit_groups(std::span<const DerivedRecord> records);

}  // namespace kinex
