#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "copulacpd/core.hpp"
#include "copulacpd/rng.hpp"

namespace copulacpd {

struct ScenarioInfo {
    std::string id;
    bool is_null;
    std::string summary;
    /// Default parameter values; every accepted override key appears here.
    std::map<std::string, double> defaults;
    /// Keys whose defaults are implementation choices rather than values fixed by the scenario
    /// definition (symbolic parameters, unspecified dimensions).
    std::vector<std::string> assumed_params;
};

/// All registered scenarios in registry order.
const std::vector<ScenarioInfo>& list_scenarios();

/// Registry entry for `id`; throws UnknownScenario.
const ScenarioInfo& find_scenario(const std::string& id);

struct ScenarioSpec {
    std::string id;
    std::size_t n = 800;
    /// Rows 1..tau (1-based) form the pre-change segment, so tau is also the split eta.
    std::size_t tau = 400;
    std::uint64_t seed = 0;
    std::map<std::string, double> params;
    /// Generate the no-change twin: the pre-change mechanism is applied to every row.
    bool twin = false;
};

struct ScenarioOutput {
    Dataset data;
    bool is_null = false;
    std::size_t driver_column = 0;
    std::size_t true_tau = 0;
    /// Non-driver columns of multi-driver scenarios (n x (m - 1), original column order).
    /// They are not part of the conditioning set.
    Matrix other_x;
    std::map<std::string, double> params;
    std::vector<std::string> assumed_params;
};

ScenarioOutput generate(const ScenarioSpec& spec);

/// sigma0 * (L - mu(s)) / sqrt(v(s)) with L ~ Lognormal(0, s^2), mu(s) = exp(s^2 / 2) and
/// v(s) = (exp(s^2) - 1) exp(s^2): zero mean, variance sigma0^2.
double standardized_lognormal(double shape, double sigma0, CounterRng& rng);

/// Logistic ramp 1 / (1 + exp(-(t - tau) / kappa)), kappa = max(width / 6, 1).
double logistic_ramp(double t, double tau, double width);

}  // namespace copulacpd
