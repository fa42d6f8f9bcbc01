#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "copulacpd/core.hpp"
#include "copulacpd/estimator.hpp"

namespace copulacpd {

inline constexpr std::size_t kDefaultPermutations = 499;

struct PermutationPlan {
    std::size_t b = kDefaultPermutations;
    std::uint64_t seed = 0;
    /// Extra key mixed into every permutation stream so that independent tests sharing a
    /// seed (for example the candidates of one scan) draw disjoint streams.
    std::uint64_t stream = 0;
    unsigned threads = 1;
};

struct TestOutcome {
    double q_obs = 0.0;
    std::vector<double> q_perm;
    double p_value = 1.0;
    double gamma = 0.0;
    StatResult observed;
};

/// Rows of `data` rearranged by the permutation with index `b` (1-based) of the plan. The
/// permutation depends only on (seed, stream, b).
std::vector<std::size_t> plan_permutation(const PermutationPlan& plan, std::size_t b, std::size_t n);

Dataset permute_rows(const Dataset& data, const std::vector<std::size_t>& order);

/// (1 + #{b : q_perm[b] >= q_obs}) / (B + 1).
double permutation_p_value(double q_obs, const std::vector<double>& q_perm);

/// Permutation test of "no change at eta": every permutation rearranges whole (x, y, z) rows,
/// re-splits at the same eta and recomputes the statistic with the bandwidth of the observed
/// data held fixed.
TestOutcome permutation_test(const SplitView& view, const EstimatorConfig& cfg, const PermutationPlan& plan);

}  // namespace copulacpd
