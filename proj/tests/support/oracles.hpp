#pragma once

// Reference implementations used only by tests. They favour direct transcription over speed
// and share no code with the library beyond its data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "copulacpd/core.hpp"
#include "copulacpd/rng.hpp"

namespace oracle {

using copulacpd::Dataset;
using copulacpd::Matrix;

// All points sorted by (squared distance, index); first k returned.
inline std::vector<std::size_t> knn(const Matrix& points, std::span<const double> z, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < points.cols(); ++c) s += (points(i, c) - z[c]) * (points(i, c) - z[c]);
        all.emplace_back(s, i);
    }
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(all[i].second);
    return out;
}

struct Terms {
    double t1, t2, t3, q;
};

// Literal quadruple loop over query points, neighbourhood pairs and indicator counts.
// `constant_kernel` replaces K by 1.
inline Terms q_hat(const Dataset& data, std::size_t eta, std::size_t k, double gamma, bool constant_kernel = false) {
    const std::size_t n = data.n();
    const std::size_t d = data.d();
    Matrix zpre(eta, d), zpost(n - eta, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) {
            if (i < eta) zpre(i, c) = data.z(i, c);
            else zpost(i - eta, c) = data.z(i, c);
        }
    }
    auto kern = [&](double ux, double uy, double vx, double vy) {
        if (constant_kernel) return 1.0;
        return std::exp(-gamma * ((ux - vx) * (ux - vx) + (uy - vy) * (uy - vy)));
    };
    // u for member j of hood (segment offset `off`), counted over the hood
    auto u = [&](const std::vector<std::size_t>& hood, std::size_t off, std::size_t j, bool want_y) {
        const auto& v = want_y ? data.y : data.x;
        std::size_t count = 0;
        for (std::size_t l : hood) {
            if (v[off + l] <= v[off + j]) ++count;
        }
        return static_cast<double>(count) / static_cast<double>(hood.size());
    };

    double s1[2] = {0, 0}, s2[2] = {0, 0}, s3[2] = {0, 0};
    for (std::size_t i1 = 0; i1 < n; ++i1) {
        const int seg = i1 < eta ? 0 : 1;
        const auto zq = data.z.row(i1);
        const auto hp = knn(zpre, zq, k);
        const auto hq = knn(zpost, zq, k);
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                s1[seg] += kern(u(hp, 0, hp[a], false), u(hp, 0, hp[a], true), u(hp, 0, hp[b], false),
                                u(hp, 0, hp[b], true));
                s2[seg] += kern(u(hq, eta, hq[a], false), u(hq, eta, hq[a], true), u(hq, eta, hq[b], false),
                                u(hq, eta, hq[b], true));
            }
        }
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                s3[seg] += kern(u(hp, 0, hp[a], false), u(hp, 0, hp[a], true), u(hq, eta, hq[b], false),
                                u(hq, eta, hq[b], true));
            }
        }
    }
    const double kd = static_cast<double>(k);
    const double pre = static_cast<double>(eta), post = static_cast<double>(n - eta);
    Terms t{};
    t.t1 = (s1[0] / pre + s1[1] / post) / (kd * (kd - 1.0));
    t.t2 = (s2[0] / pre + s2[1] / post) / (kd * (kd - 1.0));
    t.t3 = (s3[0] / pre + s3[1] / post) / (kd * kd);
    t.q = t.t1 + t.t2 - t.t3;
    return t;
}

// Median of all pairwise distances, turned into gamma = 1 / (2 sigma^2).
inline double median_gamma(const std::vector<std::pair<double, double>>& pts) {
    std::vector<double> dist;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            dist.push_back(std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second));
        }
    }
    std::sort(dist.begin(), dist.end());
    const std::size_t m = dist.size();
    const double sigma = m % 2 == 1 ? dist[m / 2] : 0.5 * (dist[m / 2 - 1] + dist[m / 2]);
    return sigma == 0.0 ? 1.0 : 1.0 / (2.0 * sigma * sigma);
}

// EWMA recursion written out one step at a time.
inline std::vector<double> ewma(const std::vector<double>& x, std::size_t span, double eps, bool ewma_mean = true) {
    const double alpha = 2.0 / (static_cast<double>(span) + 1.0);
    const std::size_t w = std::min(span, x.size());
    double m = 0.0;
    for (std::size_t i = 0; i < w; ++i) m += x[i];
    m /= static_cast<double>(w);
    double v = 0.0;
    for (std::size_t i = 0; i < w; ++i) v += (x[i] - m) * (x[i] - m);
    v /= static_cast<double>(w - 1);

    std::vector<double> out;
    double mu = x[0];
    double var = v;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!ewma_mean) mu = 0.0;
        else if (i > 0) mu = (1.0 - alpha) * mu + alpha * x[i];
        var = (1.0 - alpha) * var + alpha * (x[i] - mu) * (x[i] - mu);
        out.push_back(x[i] / (std::sqrt(var) + eps));
    }
    return out;
}

// Random dataset with optional coarse grids that force ties in x, y and z.
inline Dataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t d, bool ties = false) {
    copulacpd::CounterRng rng(seed, copulacpd::stream_tag("test-data"));
    Dataset data;
    data.x.resize(n);
    data.y.resize(n);
    data.z = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) {
            data.z(i, c) = ties ? static_cast<double>(rng.below(5)) : rng.normal();
        }
        data.x[i] = ties ? static_cast<double>(rng.below(4)) : data.z(i, 0) + 0.3 * rng.normal();
        data.y[i] = ties ? static_cast<double>(rng.below(4)) : 0.5 * data.z(i, 0) + 0.3 * rng.normal();
    }
    return data;
}

}  // namespace oracle
