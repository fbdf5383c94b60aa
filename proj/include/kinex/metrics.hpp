#pragma once

// Evaluation indexes for a wealth distribution: Gini, flow, rank correlation
// between snapshots, and distribution-shape summaries.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace kinex {

/// Gini index of non-negative assets from the ascending-sorted vector r:
///   g = 2*sum(i*r_i) / (N*sum(r_i)) - (N+1)/N,  i = 1..N.
/// Lies in [0, (N-1)/N]. Throws ArgumentError for N < 2 or negative/non-finite
/// entries and UndefinedGiniError when the total is zero.
double gini(std::span<const double> assets);

/// Time-averaged exchanged amount, cumulative_pool / (2*t_max).
double total_exchange(double cumulative_pool, std::uint64_t t_max);

struct KendallCount {
    std::int64_t concordant_minus_discordant = 0;  // K - L
    std::int64_t total_pairs = 0;                  // N*(N-1)/2
    std::int64_t comparable_pairs = 0;             // pairs untied in both snapshots

    double tau() const {
        return total_pairs == 0 ? 0.0
                                : static_cast<double>(concordant_minus_discordant) /
                                      static_cast<double>(total_pairs);
    }
};

/// K - L between two snapshots of the same agents in O(N log N). Pairs tied
/// in either snapshot count toward neither K nor L.
KendallCount kendall_count(std::span<const double> first, std::span<const double> second);

/// (K - L) / (N*(N-1)/2). Two snapshots with no comparable pair (e.g. both
/// all-equal) give 0; check `kendall_count(...).comparable_pairs` to detect it.
double kendall_tau(std::span<const double> first, std::span<const double> second);

struct Histogram {
    std::vector<double> bin_edges;           // bins + 1 ascending edges
    std::vector<std::uint64_t> counts;       // one per bin
    std::uint64_t below_range = 0;           // values < first edge
    std::uint64_t above_range = 0;           // values > last edge

    std::uint64_t total() const;
};

inline constexpr std::size_t kDefaultHistogramBins = 50;

/// Linear bins over `range`, or [0, max(assets)] when omitted. Bins are
/// half-open except the last, which includes its top edge.
Histogram histogram(std::span<const double> assets, std::size_t bins = kDefaultHistogramBins,
                    std::optional<std::pair<double, double>> range = std::nullopt);

struct GammaFit {
    double shape_k = 0.0;
    double scale_theta = 0.0;
};

/// Method-of-moments gamma fit: k = mean^2/var, theta = var/mean, with the
/// 1/N variance. Entries must be strictly positive.
GammaFit gamma_fit(std::span<const double> assets);

}  // namespace kinex
