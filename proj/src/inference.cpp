#include "copulacpd/inference.hpp"

#include <string>

#include "copulacpd/parallel.hpp"
#include "copulacpd/rng.hpp"

namespace copulacpd {

std::vector<std::size_t> plan_permutation(const PermutationPlan& plan, std::size_t b, std::size_t n) {
    CounterRng rng(plan.seed, stream_tag("permutation") ^ plan.stream, b);
    return random_permutation(n, rng);
}

Dataset permute_rows(const Dataset& data, const std::vector<std::size_t>& order) {
    const std::size_t n = data.n();
    const std::size_t d = data.d();
    Dataset out;
    out.x.resize(n);
    out.y.resize(n);
    std::vector<double> zv(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = order[i];
        out.x[i] = data.x[src];
        out.y[i] = data.y[src];
        for (std::size_t c = 0; c < d; ++c) zv[i * d + c] = data.z(src, c);
    }
    out.z = Matrix(n, d, std::move(zv));
    return out;
}

double permutation_p_value(double q_obs, const std::vector<double>& q_perm) {
    std::size_t at_least = 0;
    for (double q : q_perm) at_least += q >= q_obs ? 1 : 0;
    return static_cast<double>(1 + at_least) / static_cast<double>(q_perm.size() + 1);
}

TestOutcome permutation_test(const SplitView& view, const EstimatorConfig& cfg, const PermutationPlan& plan) {
    if (plan.b < 1) throw Error(ErrorCode::BadConfig, "number of permutations must be >= 1");
    cfg.validate();

    EstimatorConfig fixed = cfg;
    fixed.gamma = resolve_gamma(view.data(), cfg);
    fixed.threads = 1;

    TestOutcome out;
    out.observed = estimate_q(view, fixed);
    out.q_obs = out.observed.q_hat;
    out.gamma = *fixed.gamma;
    out.q_perm.assign(plan.b, 0.0);

    const Dataset& data = view.data();
    parallel_for(plan.b, plan.threads, [&](std::size_t i) {
        const auto order = plan_permutation(plan, i + 1, data.n());
        const Dataset shuffled = permute_rows(data, order);
        out.q_perm[i] = estimate_q(SplitView(shuffled, view.eta()), fixed).q_hat;
    });
    out.p_value = permutation_p_value(out.q_obs, out.q_perm);
    return out;
}

}  // namespace copulacpd
