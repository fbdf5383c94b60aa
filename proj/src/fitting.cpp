#include "kinex/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "kinex/error.hpp"

namespace kinex {

FitResult fit_linear(std::span<const XYPoint> points) {
    const std::size_t n = points.size();
    if (n < 2) throw ArgumentError("fit_linear: need at least 2 points");
    for (const auto& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw ArgumentError("fit_linear: points must be finite");

    const bool degenerate = std::all_of(points.begin(), points.end(),
                                        [&](const XYPoint& p) { return p.x == points[0].x; });
    if (degenerate) throw SingularFitError("fit_linear: all x values are identical");

    const double nd = static_cast<double>(n);
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= nd;
    my /= nd;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : points) {
        const double dx = p.x - mx;
        const double dy = p.y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw SingularFitError("fit_linear: x has no spread");

    FitResult fit;
    fit.n_points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    if (syy == 0.0) {
        fit.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (const auto& p : points) {
            const double e = p.y - (fit.slope * p.x + fit.intercept);
            ss_res += e * e;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

namespace {

LawPoints log_axis_points(std::span<const SweepCell> cells, double axis_scale) {
    LawPoints out;
    for (const auto& c : cells) {
        const double u = (1.0 - c.lambda) * c.gamma;
        if (!(u > 0.0)) {
            out.excluded.push_back({c.lambda, c.gamma, "(1-lambda)*gamma is zero"});
        } else if (!(c.mean_g > 0.0)) {
            out.excluded.push_back({c.lambda, c.gamma, "mean_g is zero"});
        } else {
            out.points.push_back({axis_scale * std::log(u), c.mean_f / c.mean_g});
        }
    }
    return out;
}

}  // namespace

LawPoints law5_points(std::span<const SweepCell> cells) { return log_axis_points(cells, 1.0); }

LawPoints law7_points(std::span<const SweepCell> cells) { return log_axis_points(cells, 0.5); }

std::vector<XYPoint> law6_points(std::span<const SweepCell> cells) {
    std::vector<XYPoint> pts;
    pts.reserve(cells.size());
    for (const auto& c : cells) pts.push_back({c.mean_f, c.mean_tau});
    return pts;
}

}  // namespace kinex
