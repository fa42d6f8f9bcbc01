#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace copulacpd {

struct BenchConfig {
    std::vector<std::string> scenarios;
    std::size_t replicates = 50;
    std::size_t n = 800;
    /// Split point; n / 2 when empty.
    std::optional<std::size_t> tau;
    std::size_t b = 499;
    std::uint64_t seed = 0;
    std::size_t k = 30;
    double alpha = 0.05;
    /// Parameter overrides applied to every scenario that accepts the key.
    std::map<std::string, double> params;
    unsigned threads = 1;

    std::size_t split() const { return tau ? *tau : n / 2; }
    void validate() const;
};

struct BenchRow {
    std::string scenario;
    bool is_null = false;
    /// Scenario that supplied the negative class for the AUC.
    std::string null_class;
    double auc = 0.0;
    double auc_se = 0.0;
    double median_p = 1.0;
    std::size_t rejections = 0;
    std::size_t replicates = 0;
    std::vector<double> q_scenario;
    std::vector<double> q_null;
    std::vector<double> p_values;
};

/// (#{a_i > b_j} + #{a_i == b_j} / 2) / (|a| |b|).
double mann_whitney_auc(std::span<const double> a, std::span<const double> b);

/// Hanley-McNeil standard error of an AUC estimated from na positives and nb negatives.
double auc_standard_error(double auc, std::size_t na, std::size_t nb);

double median(std::vector<double> values);

/// Seed of replicate r of `scenario` in role "scenario" or "null".
std::uint64_t replicate_seed(std::uint64_t base, const std::string& scenario, const std::string& role, std::size_t r);

using ProgressFn = std::function<void(const std::string&)>;

/// For every scenario: R statistics at the true split with permutation p-values, R
/// statistics from the negative class (the scenario's no-change twin for positive
/// scenarios, the base null for null scenarios), and the AUC between the two.
std::vector<BenchRow> run_bench(const BenchConfig& cfg, const ProgressFn& progress = {});

}  // namespace copulacpd
