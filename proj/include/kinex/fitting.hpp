#pragma once

// Ordinary least squares and the point sets for the two regression laws:
// f/g against ln((1-lambda)*gamma), and tau against f.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kinex/sweep.hpp"

namespace kinex {

struct XYPoint {
    double x = 0.0;
    double y = 0.0;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
};

/// y = slope*x + intercept by least squares, R^2 = 1 - SS_res/SS_tot.
/// A constant y has SS_tot = 0 and is reported with R^2 = 1.
/// Throws ArgumentError for fewer than 2 or non-finite points and
/// SingularFitError when every x is identical.
FitResult fit_linear(std::span<const XYPoint> points);

struct ExcludedCell {
    double lambda = 0.0;
    double gamma = 0.0;
    std::string reason;
};

struct LawPoints {
    std::vector<XYPoint> points;
    std::vector<ExcludedCell> excluded;
};

/// x = ln((1-lambda)*gamma), y = mean_f/mean_g. Cells with gamma = 0,
/// lambda = 1 or mean_g <= 0 are listed in `excluded` instead.
LawPoints law5_points(std::span<const SweepCell> cells);

/// Same cells on the ln(sqrt((1-lambda)*gamma)) axis: the x values are halved,
/// so a fit here doubles the slope and keeps intercept and R^2.
LawPoints law7_points(std::span<const SweepCell> cells);

/// x = mean_f, y = mean_tau.
std::vector<XYPoint> law6_points(std::span<const SweepCell> cells);

}  // namespace kinex
