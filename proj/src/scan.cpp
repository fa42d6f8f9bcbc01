#include "copulacpd/scan.hpp"

#include <algorithm>
#include <numeric>

#include "copulacpd/parallel.hpp"

namespace copulacpd {

Correction parse_correction(const std::string& name) {
    if (name == "none") return Correction::None;
    if (name == "by" || name == "benjamini_yekutieli") return Correction::BenjaminiYekutieli;
    throw Error(ErrorCode::BadConfig, "unknown correction '" + name + "' (expected none or benjamini_yekutieli)");
}

std::string to_string(Correction c) {
    return c == Correction::None ? "none" : "benjamini_yekutieli";
}

void ScanConfig::validate(std::size_t n) const {
    estimator.validate();
    if (window < estimator.k) {
        throw Error(ErrorCode::BadConfig,
                    "window " + std::to_string(window) + " is smaller than k=" + std::to_string(estimator.k));
    }
    if (2 * window > n) {
        throw Error(ErrorCode::WindowTooLarge,
                    "window " + std::to_string(window) + " needs 2W <= n=" + std::to_string(n));
    }
    if (step < 1) throw Error(ErrorCode::BadConfig, "step must be >= 1");
    if (!(p_bar > 0.0 && p_bar < 1.0)) throw Error(ErrorCode::BadConfig, "p_bar must lie in (0, 1)");
    if (b < 1) throw Error(ErrorCode::BadConfig, "number of permutations must be >= 1");
}

std::vector<TracePoint> statistic_trace(const Dataset& data, const ScanConfig& cfg) {
    validate(data);
    cfg.validate(data.n());
    const std::size_t w = cfg.window;
    std::vector<std::size_t> indices;
    for (std::size_t i = w; i + w <= data.n(); i += cfg.step) indices.push_back(i);

    EstimatorConfig est = cfg.estimator;
    est.threads = 1;
    std::vector<TracePoint> trace(indices.size());
    parallel_for(indices.size(), cfg.threads, [&](std::size_t t) {
        const std::size_t i = indices[t];
        const Dataset window = data.slice(i - w, i + w);
        trace[t] = TracePoint{i, estimate_q(SplitView(window, w), est).q_hat};
    });
    return trace;
}

std::vector<std::size_t> select_candidates(std::span<const TracePoint> trace, std::size_t window) {
    std::vector<bool> alive(trace.size(), true);
    std::size_t remaining = trace.size();
    std::vector<std::size_t> chosen;
    while (remaining > 0) {
        std::size_t best = trace.size();
        for (std::size_t t = 0; t < trace.size(); ++t) {
            if (!alive[t]) continue;
            if (best == trace.size() || trace[t].q_hat > trace[best].q_hat ||
                (trace[t].q_hat == trace[best].q_hat && trace[t].index < trace[best].index)) {
                best = t;
            }
        }
        const std::size_t centre = trace[best].index;
        chosen.push_back(centre);
        for (std::size_t t = 0; t < trace.size(); ++t) {
            if (!alive[t]) continue;
            const std::size_t gap = trace[t].index > centre ? trace[t].index - centre : centre - trace[t].index;
            if (gap < window) {
                alive[t] = false;
                --remaining;
            }
        }
    }
    return chosen;
}

std::vector<bool> benjamini_yekutieli(std::span<const double> p_values, double level) {
    const std::size_t m = p_values.size();
    std::vector<bool> reject(m, false);
    if (m == 0) return reject;
    double harmonic = 0.0;
    for (std::size_t i = 1; i <= m; ++i) harmonic += 1.0 / static_cast<double>(i);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    std::size_t cutoff = 0;  // number of rejections
    for (std::size_t r = 1; r <= m; ++r) {
        const double threshold = static_cast<double>(r) * level / (static_cast<double>(m) * harmonic);
        if (p_values[order[r - 1]] <= threshold) cutoff = r;
    }
    for (std::size_t r = 0; r < cutoff; ++r) reject[order[r]] = true;
    return reject;
}

std::vector<std::size_t> accept_candidates(std::span<const std::size_t> candidates, std::span<const double> p_values,
                                           double p_bar, Correction correction) {
    std::vector<std::size_t> accepted;
    if (correction == Correction::None) {
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (p_values[c] <= p_bar) accepted.push_back(candidates[c]);
        }
        return accepted;
    }
    const auto mask = benjamini_yekutieli(p_values, p_bar);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (mask[c]) accepted.push_back(candidates[c]);
    }
    return accepted;
}

CandidateTests test_candidates(const Dataset& data, std::span<const std::size_t> candidates, const ScanConfig& cfg) {
    validate(data);
    cfg.validate(data.n());
    const std::size_t w = cfg.window;
    for (std::size_t c : candidates) {
        if (c < w || c + w > data.n()) {
            throw Error(ErrorCode::BadConfig, "candidate " + std::to_string(c) + " has no full window");
        }
    }
    CandidateTests out;
    out.p_values.assign(candidates.size(), 1.0);
    EstimatorConfig est = cfg.estimator;
    est.threads = 1;
    // Parallelism goes to the permutations inside each test; candidates run in order.
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const std::size_t i = candidates[c];
        const Dataset window = data.slice(i - w, i + w);
        PermutationPlan plan;
        plan.b = cfg.b;
        plan.seed = cfg.seed;
        plan.stream = i;
        plan.threads = cfg.threads;
        out.p_values[c] = permutation_test(SplitView(window, w), est, plan).p_value;
    }
    out.accepted = accept_candidates(candidates, out.p_values, cfg.p_bar, cfg.correction);
    return out;
}

ScanResult scan(const Dataset& data, const ScanConfig& cfg) {
    ScanResult result;
    result.trace = statistic_trace(data, cfg);
    result.candidates = select_candidates(result.trace, cfg.window);
    auto tests = test_candidates(data, result.candidates, cfg);
    result.p_values = std::move(tests.p_values);
    result.accepted = std::move(tests.accepted);
    return result;
}

}  // namespace copulacpd
