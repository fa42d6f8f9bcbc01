#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "copulacpd/core.hpp"

namespace copulacpd {

struct UnitPoint {
    double x;
    double y;
};

enum class KernelKind {
    Gaussian,
    /// K == 1 everywhere. Only meaningful as a test hook: it turns the statistic into a
    /// pure counting identity.
    Constant,
};

/// Gaussian kernel exp(-gamma * |u - v|^2).
double gaussian(UnitPoint u, UnitPoint v, double gamma);

/// Kernel value as a function of the squared Euclidean distance between its arguments.
double kernel_from_squared_distance(KernelKind kind, double gamma, double squared_distance);

inline constexpr std::size_t kDefaultMedianCap = 1000;

/// Median heuristic gamma = 1 / (2 sigma^2), sigma the median pairwise distance over an
/// even-stride subsample of at most `cap` points. Returns 1 when sigma is 0.
double median_heuristic(std::span<const UnitPoint> points, std::size_t cap = kDefaultMedianCap);

/// Pooled marginal ranks (#{x_j <= x_i} / n, #{y_j <= y_i} / n) over all rows, sorted
/// lexicographically so the result depends only on the multiset of rows.
std::vector<UnitPoint> pooled_rank_points(const Dataset& data);

/// Median-heuristic bandwidth on the pooled rank points; invariant to row permutations.
double pooled_rank_bandwidth(const Dataset& data, std::size_t cap = kDefaultMedianCap);

}  // namespace copulacpd
