#include "copulacpd/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "copulacpd/neighbors.hpp"
#include "copulacpd/parallel.hpp"

namespace copulacpd {

void EstimatorConfig::validate() const {
    if (k < 2) throw Error(ErrorCode::BadConfig, "k must be >= 2, got " + std::to_string(k));
    if (gamma && !(std::isfinite(*gamma) && *gamma > 0.0)) {
        throw Error(ErrorCode::BadConfig, "gamma must be finite and positive");
    }
    if (median_cap < 2) throw Error(ErrorCode::BadConfig, "median_cap must be >= 2");
}

PseudoObs pseudo_obs(std::span<const double> x, std::span<const double> y, std::span<const std::size_t> hood,
                     std::size_t j) {
    std::size_t cx = 0;
    std::size_t cy = 0;
    for (std::size_t l : hood) {
        cx += x[l] <= x[j] ? 1 : 0;
        cy += y[l] <= y[j] ? 1 : 0;
    }
    const auto k = static_cast<double>(hood.size());
    return PseudoObs{static_cast<double>(cx) / k, static_cast<double>(cy) / k};
}

namespace {

void check_segments(const SplitView& view, std::size_t k) {
    if (view.pre_size() < k) {
        throw Error(ErrorCode::SegmentTooSmall, "k=" + std::to_string(k) + " exceeds pre-segment size " +
                                                    std::to_string(view.pre_size()));
    }
    if (view.post_size() < k) {
        throw Error(ErrorCode::SegmentTooSmall, "k=" + std::to_string(k) + " exceeds post-segment size " +
                                                    std::to_string(view.post_size()));
    }
}

Matrix segment_z(const Dataset& data, std::size_t begin, std::size_t end) {
    const std::size_t d = data.d();
    std::vector<double> values(data.z.values().begin() + static_cast<std::ptrdiff_t>(begin * d),
                               data.z.values().begin() + static_cast<std::ptrdiff_t>(end * d));
    return Matrix(end - begin, d, std::move(values));
}

// Integer counts #{l in hood : v[l] <= v[a]} for every member a of the hood.
void hood_counts(const double* values, std::span<const std::uint32_t> hood, std::vector<double>& scratch,
                 int* counts) {
    const std::size_t k = hood.size();
    scratch.resize(k);
    for (std::size_t a = 0; a < k; ++a) scratch[a] = values[hood[a]];
    std::sort(scratch.begin(), scratch.end());
    for (std::size_t a = 0; a < k; ++a) {
        counts[a] = static_cast<int>(std::upper_bound(scratch.begin(), scratch.end(), values[hood[a]]) - scratch.begin());
    }
}

// Histograms of integer squared count distances, one per (term, query segment).
struct PairTally {
    std::size_t bins = 0;
    std::vector<std::uint64_t> within_pre[2];   // t1, indexed by query segment
    std::vector<std::uint64_t> within_post[2];  // t2
    std::vector<std::uint64_t> cross[2];        // t3

    explicit PairTally(std::size_t b) : bins(b) {
        for (int s = 0; s < 2; ++s) {
            within_pre[s].assign(b, 0);
            within_post[s].assign(b, 0);
            cross[s].assign(b, 0);
        }
    }

    void merge(const PairTally& other) {
        for (int s = 0; s < 2; ++s) {
            for (std::size_t m = 0; m < bins; ++m) {
                within_pre[s][m] += other.within_pre[s][m];
                within_post[s][m] += other.within_post[s][m];
                cross[s][m] += other.cross[s][m];
            }
        }
    }
};

double weighted_sum(const std::vector<std::uint64_t>& hist, const std::vector<double>& table) {
    long double acc = 0.0L;
    for (std::size_t m = 0; m < hist.size(); ++m) {
        if (hist[m] != 0) acc += static_cast<long double>(hist[m]) * table[m];
    }
    return static_cast<double>(acc);
}

}  // namespace

NeighborhoodTables build_neighborhoods(const SplitView& view, std::size_t k, unsigned threads) {
    check_segments(view, k);
    const Dataset& data = view.data();
    const std::size_t n = data.n();
    const NeighborIndex pre_index(segment_z(data, 0, view.eta()));
    const NeighborIndex post_index(segment_z(data, view.eta(), n));

    NeighborhoodTables tables;
    tables.n = n;
    tables.k = k;
    tables.pre_of_query.resize(n * k);
    tables.post_of_query.resize(n * k);

    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    parallel_for(chunks, threads, [&](std::size_t c) {
        std::vector<Neighbor> found;
        const std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t q = c * kChunk; q < end; ++q) {
            const auto z = data.z.row(q);
            pre_index.query_into(z, k, found);
            for (std::size_t a = 0; a < k; ++a) tables.pre_of_query[q * k + a] = static_cast<std::uint32_t>(found[a].index);
            post_index.query_into(z, k, found);
            for (std::size_t a = 0; a < k; ++a) tables.post_of_query[q * k + a] = static_cast<std::uint32_t>(found[a].index);
        }
    });
    return tables;
}

double resolve_gamma(const Dataset& data, const EstimatorConfig& cfg) {
    if (cfg.gamma) return *cfg.gamma;
    return pooled_rank_bandwidth(data, cfg.median_cap);
}

StatResult estimate_q(const SplitView& view, const EstimatorConfig& cfg) {
    cfg.validate();
    const std::size_t k = cfg.k;
    check_segments(view, k);
    const Dataset& data = view.data();
    const std::size_t n = data.n();
    const std::size_t eta = view.eta();
    const double gamma = resolve_gamma(data, cfg);

    const NeighborhoodTables tables = build_neighborhoods(view, k, cfg.threads);

    // Squared distance between two pseudo-observations is m / k^2 for an integer m <= 2k^2.
    const std::size_t bins = 2 * k * k + 1;
    std::vector<double> table(bins);
    const double inv_k2 = 1.0 / static_cast<double>(k * k);
    for (std::size_t m = 0; m < bins; ++m) {
        table[m] = kernel_from_squared_distance(cfg.kernel, gamma, static_cast<double>(m) * inv_k2);
    }

    const double* pre_x = data.x.data();
    const double* pre_y = data.y.data();
    const double* post_x = data.x.data() + eta;
    const double* post_y = data.y.data() + eta;

    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(cfg.threads), n));
    std::vector<PairTally> tallies(workers, PairTally(bins));
    parallel_for(workers, workers, [&](std::size_t w) {
        PairTally& tally = tallies[w];
        std::vector<double> scratch;
        std::vector<int> ax(k), ay(k), bx(k), by(k);
        const std::size_t begin = w * n / workers;
        const std::size_t end = (w + 1) * n / workers;
        for (std::size_t q = begin; q < end; ++q) {
            const int seg = q < eta ? 0 : 1;
            const auto hood_pre = tables.pre(q);
            const auto hood_post = tables.post(q);
            hood_counts(pre_x, hood_pre, scratch, ax.data());
            hood_counts(pre_y, hood_pre, scratch, ay.data());
            hood_counts(post_x, hood_post, scratch, bx.data());
            hood_counts(post_y, hood_post, scratch, by.data());

            auto* t1 = tally.within_pre[seg].data();
            auto* t2 = tally.within_post[seg].data();
            auto* t3 = tally.cross[seg].data();
            for (std::size_t a = 0; a < k; ++a) {
                for (std::size_t b = a + 1; b < k; ++b) {
                    const int dx1 = ax[a] - ax[b];
                    const int dy1 = ay[a] - ay[b];
                    ++t1[dx1 * dx1 + dy1 * dy1];
                    const int dx2 = bx[a] - bx[b];
                    const int dy2 = by[a] - by[b];
                    ++t2[dx2 * dx2 + dy2 * dy2];
                }
                for (std::size_t b = 0; b < k; ++b) {
                    const int dx = ax[a] - bx[b];
                    const int dy = ay[a] - by[b];
                    ++t3[dx * dx + dy * dy];
                }
            }
        }
    });
    for (std::size_t w = 1; w < tallies.size(); ++w) tallies[0].merge(tallies[w]);
    const PairTally& total = tallies[0];

    const auto pre_n = static_cast<double>(eta);
    const auto post_n = static_cast<double>(n - eta);
    const auto kd = static_cast<double>(k);
    const double pair_norm = kd * (kd - 1.0);
    const double cross_norm = kd * kd;

    StatResult r;
    r.t1 = (weighted_sum(total.within_pre[0], table) / pre_n + weighted_sum(total.within_pre[1], table) / post_n) /
           pair_norm;
    r.t2 = (weighted_sum(total.within_post[0], table) / pre_n + weighted_sum(total.within_post[1], table) / post_n) /
           pair_norm;
    r.t3 = (weighted_sum(total.cross[0], table) / pre_n + weighted_sum(total.cross[1], table) / post_n) / cross_norm;
    r.q_hat = r.t1 + r.t2 - r.t3;
    r.gamma = gamma;
    r.k = k;
    return r;
}

}  // namespace copulacpd
