#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "copulacpd/core.hpp"
#include "copulacpd/estimator.hpp"
#include "copulacpd/inference.hpp"

namespace copulacpd {

enum class Correction { None, BenjaminiYekutieli };

Correction parse_correction(const std::string& name);
std::string to_string(Correction c);

struct ScanConfig {
    std::size_t window = 0;
    std::size_t step = 1;
    double p_bar = 0.05;
    std::size_t b = kDefaultPermutations;
    Correction correction = Correction::None;
    EstimatorConfig estimator;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate(std::size_t n) const;
};

/// Statistic of the 2W-row window centred on `index`: rows [index - W, index) against
/// rows [index, index + W). `index` is the 0-based row where the post window starts, which
/// equals the 1-based position of the last pre-window row.
struct TracePoint {
    std::size_t index;
    double q_hat;
};

struct ScanResult {
    std::vector<TracePoint> trace;
    std::vector<std::size_t> candidates;  // discovery order
    std::vector<double> p_values;         // aligned with candidates
    std::vector<std::size_t> accepted;    // subset of candidates, discovery order
};

std::vector<TracePoint> statistic_trace(const Dataset& data, const ScanConfig& cfg);

/// Greedy peak picking: repeatedly take the largest remaining statistic (ties to the smaller
/// index) and drop every trace point closer than `window` to it.
std::vector<std::size_t> select_candidates(std::span<const TracePoint> trace, std::size_t window);

/// Benjamini-Yekutieli step-up at `level`; returns a per-hypothesis rejection mask.
std::vector<bool> benjamini_yekutieli(std::span<const double> p_values, double level);

struct CandidateTests {
    std::vector<double> p_values;
    std::vector<std::size_t> accepted;
};

/// Accepts candidates from p-values according to the configured correction.
std::vector<std::size_t> accept_candidates(std::span<const std::size_t> candidates, std::span<const double> p_values,
                                           double p_bar, Correction correction);

CandidateTests test_candidates(const Dataset& data, std::span<const std::size_t> candidates, const ScanConfig& cfg);

ScanResult scan(const Dataset& data, const ScanConfig& cfg);

}  // namespace copulacpd
