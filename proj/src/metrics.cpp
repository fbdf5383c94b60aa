#include "kinex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "kinex/error.hpp"

namespace kinex {

double gini(std::span<const double> assets) {
    const std::size_t n = assets.size();
    if (n < 2) throw ArgumentError("gini: need at least 2 values");
    std::vector<double> r(assets.begin(), assets.end());
    for (double v : r)
        if (!std::isfinite(v) || v < 0.0)
            throw ArgumentError("gini: values must be finite and non-negative");
    std::sort(r.begin(), r.end());

    double weighted = 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        weighted += static_cast<double>(k + 1) * r[k];
        sum += r[k];
    }
    if (!(sum > 0.0)) throw UndefinedGiniError("gini: total is zero");

    const double nd = static_cast<double>(n);
    const double g = 2.0 * weighted / (nd * sum) - (nd + 1.0) / nd;
    // Rounding can leave -1e-17 for an equal vector.
    return std::clamp(g, 0.0, (nd - 1.0) / nd);
}

double total_exchange(double cumulative_pool, std::uint64_t t_max) {
    if (t_max == 0) throw ArgumentError("total_exchange: t_max must be positive");
    if (!(cumulative_pool >= 0.0)) throw ArgumentError("total_exchange: pool must be >= 0");
    return cumulative_pool / (2.0 * static_cast<double>(t_max));
}

namespace {

std::int64_t tied_pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Stable merge sort of `v`, returning the number of strictly inverted pairs.
std::int64_t sort_counting_inversions(std::vector<double>& v, std::vector<double>& scratch) {
    const std::size_t n = v.size();
    std::int64_t swaps = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo < n; lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, n);
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t a = lo, b = mid, out = lo;
            while (a < mid && b < hi) {
                if (v[b] < v[a]) {
                    swaps += static_cast<std::int64_t>(mid - a);
                    scratch[out++] = v[b++];
                } else {
                    scratch[out++] = v[a++];
                }
            }
            while (a < mid) scratch[out++] = v[a++];
            while (b < hi) scratch[out++] = v[b++];
        }
        std::swap(v, scratch);
    }
    return swaps;
}

}  // namespace

KendallCount kendall_count(std::span<const double> first, std::span<const double> second) {
    if (first.size() != second.size())
        throw ArgumentError("kendall_tau: snapshots differ in length");
    const std::size_t n = first.size();
    if (n < 2) throw ArgumentError("kendall_tau: need at least 2 agents");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return first[l] < first[r] || (first[l] == first[r] && second[l] < second[r]);
    });

    // Ties in the first snapshot, and joint ties.
    std::int64_t first_ties = 0;
    std::int64_t joint_ties = 0;
    for (std::size_t k = 0; k < n;) {
        std::size_t end = k + 1;
        while (end < n && first[order[end]] == first[order[k]]) ++end;
        first_ties += tied_pairs(static_cast<std::int64_t>(end - k));
        for (std::size_t s = k; s < end;) {
            std::size_t e = s + 1;
            while (e < end && second[order[e]] == second[order[s]]) ++e;
            joint_ties += tied_pairs(static_cast<std::int64_t>(e - s));
            s = e;
        }
        k = end;
    }

    // Within a first-snapshot tie the second values are already ascending, so
    // the inversions counted here are exactly the discordant pairs.
    std::vector<double> ys(n);
    for (std::size_t k = 0; k < n; ++k) ys[k] = second[order[k]];
    std::vector<double> scratch(n);
    const std::int64_t discordant = sort_counting_inversions(ys, scratch);

    std::int64_t second_ties = 0;
    for (std::size_t k = 0; k < n;) {
        std::size_t end = k + 1;
        while (end < n && ys[end] == ys[k]) ++end;
        second_ties += tied_pairs(static_cast<std::int64_t>(end - k));
        k = end;
    }

    KendallCount c;
    c.total_pairs = tied_pairs(static_cast<std::int64_t>(n));
    c.comparable_pairs = c.total_pairs - first_ties - second_ties + joint_ties;
    c.concordant_minus_discordant = c.comparable_pairs - 2 * discordant;
    return c;
}

double kendall_tau(std::span<const double> first, std::span<const double> second) {
    return kendall_count(first, second).tau();
}

std::uint64_t Histogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) + below_range +
           above_range;
}

Histogram histogram(std::span<const double> assets, std::size_t bins,
                    std::optional<std::pair<double, double>> range) {
    if (bins == 0) throw ArgumentError("histogram: bins must be positive");
    double lo = 0.0;
    double hi = 0.0;
    if (range) {
        std::tie(lo, hi) = *range;
    } else {
        for (double v : assets) hi = std::max(hi, v);
        if (hi <= lo) hi = lo + 1.0;
    }
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw ArgumentError("histogram: range must be finite with lo < hi");

    Histogram h;
    h.bin_edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t k = 0; k <= bins; ++k) h.bin_edges[k] = lo + width * static_cast<double>(k);
    h.bin_edges.back() = hi;
    h.counts.assign(bins, 0);

    for (double v : assets) {
        if (v < lo) {
            ++h.below_range;
        } else if (v > hi) {
            ++h.above_range;
        } else {
            auto k = static_cast<std::size_t>((v - lo) / width);
            k = std::min(k, bins - 1);
            ++h.counts[k];
        }
    }
    return h;
}

GammaFit gamma_fit(std::span<const double> assets) {
    const std::size_t n = assets.size();
    if (n < 2) throw ArgumentError("gamma_fit: need at least 2 values");
    for (double v : assets)
        if (!(v > 0.0) || !std::isfinite(v))
            throw ArgumentError("gamma_fit: values must be positive and finite");

    const double nd = static_cast<double>(n);
    const double mean = std::accumulate(assets.begin(), assets.end(), 0.0) / nd;
    double ss = 0.0;
    for (double v : assets) ss += (v - mean) * (v - mean);
    const double var = ss / nd;
    if (!(var > 0.0)) throw DegenerateDistributionError("gamma_fit: sample variance is zero");

    return GammaFit{mean * mean / var, var / mean};
}

}  // namespace kinex
