#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "copulacpd/core.hpp"
#include "copulacpd/kernel.hpp"

namespace copulacpd {

inline constexpr std::size_t kDefaultNeighbors = 30;

struct EstimatorConfig {
    std::size_t k = kDefaultNeighbors;
    /// Fixed bandwidth; when empty the median heuristic on pooled marginal ranks is used.
    std::optional<double> gamma;
    KernelKind kernel = KernelKind::Gaussian;
    std::size_t median_cap = kDefaultMedianCap;
    unsigned threads = 1;

    void validate() const;
};

struct StatResult {
    double q_hat = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;
    double gamma = 0.0;
    std::size_t k = 0;
};

/// Empirical conditional-copula draw of one neighbourhood member.
struct PseudoObs {
    double u_x;
    double u_y;
};

/// u_x = #{l in hood : x[l] <= x[j]} / |hood|, u_y likewise; `hood` indexes into x and y.
PseudoObs pseudo_obs(std::span<const double> x, std::span<const double> y, std::span<const std::size_t> hood,
                     std::size_t j);

/// For every row of the split dataset (all n of them, used as query points), the k nearest
/// pre-segment rows and the k nearest post-segment rows. Indices are segment-local, sorted by
/// (distance, index).
struct NeighborhoodTables {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::uint32_t> pre_of_query;
    std::vector<std::uint32_t> post_of_query;

    std::span<const std::uint32_t> pre(std::size_t query) const { return {pre_of_query.data() + query * k, k}; }
    std::span<const std::uint32_t> post(std::size_t query) const { return {post_of_query.data() + query * k, k}; }
};

NeighborhoodTables build_neighborhoods(const SplitView& view, std::size_t k, unsigned threads = 1);

/// The bandwidth `estimate_q` will use for this dataset under `cfg`.
double resolve_gamma(const Dataset& data, const EstimatorConfig& cfg);

/// Kernel two-sample statistic between the conditional copulas of (X, Y) | Z before and
/// after the split, integrated over the pooled confounder distribution:
/// q_hat = t1 + t2 - t3, with t1 / t2 the within-segment U-statistic terms and t3 the cross term.
///
/// Within each query neighbourhood the pseudo-observations take values c / k for integer
/// counts c, so every kernel evaluation depends only on the integer squared distance between
/// count pairs. Pair contributions are tallied as integer histograms and reduced once in a
/// fixed order; the result is bitwise independent of thread count and of query order.
StatResult estimate_q(const SplitView& view, const EstimatorConfig& cfg);

}  // namespace copulacpd
