#include "copulacpd/harness.hpp"

#include <algorithm>
#include <cmath>

#include "copulacpd/estimator.hpp"
#include "copulacpd/inference.hpp"
#include "copulacpd/parallel.hpp"
#include "copulacpd/rng.hpp"
#include "copulacpd/synth.hpp"

namespace copulacpd {

namespace {
constexpr const char* kBaseNull = "NCL01_BASE_NULL";
}

void BenchConfig::validate() const {
    if (scenarios.empty()) throw Error(ErrorCode::BadConfig, "no scenarios given");
    for (const auto& id : scenarios) find_scenario(id);
    if (replicates < 2) throw Error(ErrorCode::BadConfig, "replicates must be >= 2");
    if (b < 1) throw Error(ErrorCode::BadConfig, "number of permutations must be >= 1");
    if (k < 2) throw Error(ErrorCode::BadConfig, "k must be >= 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::BadConfig, "alpha must lie in (0, 1)");
    const std::size_t t = split();
    if (t < k || n < t + k) {
        throw Error(ErrorCode::BadConfig, "both segments need at least k=" + std::to_string(k) + " rows");
    }
}

double mann_whitney_auc(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::EmptyInput, "AUC needs two nonempty samples");
    std::vector<double> sorted(b.begin(), b.end());
    std::sort(sorted.begin(), sorted.end());
    double wins = 0.0;
    for (double v : a) {
        const auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
        const auto hi = std::upper_bound(lo, sorted.end(), v);
        wins += static_cast<double>(lo - sorted.begin()) + 0.5 * static_cast<double>(hi - lo);
    }
    return wins / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double auc_standard_error(double auc, std::size_t na, std::size_t nb) {
    if (na == 0 || nb == 0) throw Error(ErrorCode::EmptyInput, "AUC needs two nonempty samples");
    const double q1 = auc / (2.0 - auc);
    const double q2 = 2.0 * auc * auc / (1.0 + auc);
    const auto a = static_cast<double>(na);
    const auto b = static_cast<double>(nb);
    const double var = (auc * (1.0 - auc) + (a - 1.0) * (q1 - auc * auc) + (b - 1.0) * (q2 - auc * auc)) / (a * b);
    return std::sqrt(std::max(var, 0.0));
}

double median(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "median of an empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t h = values.size() / 2;
    return values.size() % 2 == 1 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

std::uint64_t replicate_seed(std::uint64_t base, const std::string& scenario, const std::string& role, std::size_t r) {
    return CounterRng(base, stream_tag(scenario) ^ stream_tag(role), r).next_u64();
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg, const ProgressFn& progress) {
    cfg.validate();
    const std::size_t tau = cfg.split();
    EstimatorConfig est;
    est.k = cfg.k;

    auto make_spec = [&](const std::string& id, std::uint64_t seed, bool twin) {
        ScenarioSpec spec;
        spec.id = id;
        spec.n = cfg.n;
        spec.tau = tau;
        spec.seed = seed;
        spec.twin = twin;
        const auto& defaults = find_scenario(id).defaults;
        for (const auto& [key, value] : cfg.params) {
            if (defaults.count(key) != 0) spec.params[key] = value;
        }
        return spec;
    };

    std::vector<BenchRow> rows;
    for (const auto& id : cfg.scenarios) {
        const ScenarioInfo& info = find_scenario(id);
        BenchRow row;
        row.scenario = id;
        row.is_null = info.is_null;
        row.null_class = info.is_null ? kBaseNull : id;
        row.replicates = cfg.replicates;
        row.q_scenario.assign(cfg.replicates, 0.0);
        row.q_null.assign(cfg.replicates, 0.0);
        row.p_values.assign(cfg.replicates, 1.0);

        parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
            const std::uint64_t seed = replicate_seed(cfg.seed, id, "scenario", r);
            const ScenarioOutput world = generate(make_spec(id, seed, false));
            PermutationPlan plan;
            plan.b = cfg.b;
            plan.seed = seed;
            const TestOutcome test = permutation_test(SplitView(world.data, tau), est, plan);
            row.q_scenario[r] = test.q_obs;
            row.p_values[r] = test.p_value;

            const std::uint64_t null_seed = replicate_seed(cfg.seed, row.null_class, "null", r);
            const ScenarioOutput null_world =
                generate(make_spec(row.null_class, null_seed, !info.is_null));
            row.q_null[r] = estimate_q(SplitView(null_world.data, tau), est).q_hat;
        });

        row.auc = mann_whitney_auc(row.q_scenario, row.q_null);
        row.auc_se = auc_standard_error(row.auc, cfg.replicates, cfg.replicates);
        row.median_p = median(row.p_values);
        row.rejections = static_cast<std::size_t>(
            std::count_if(row.p_values.begin(), row.p_values.end(), [&](double p) { return p <= cfg.alpha; }));
        if (progress) {
            progress(id + ": auc=" + std::to_string(row.auc) + " median_p=" + std::to_string(row.median_p) +
                     " rejections=" + std::to_string(row.rejections) + "/" + std::to_string(cfg.replicates));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace copulacpd
