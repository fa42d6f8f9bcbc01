#include "copulacpd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace copulacpd {

double gaussian(UnitPoint u, UnitPoint v, double gamma) {
    const double dx = u.x - v.x;
    const double dy = u.y - v.y;
    return std::exp(-gamma * (dx * dx + dy * dy));
}

double kernel_from_squared_distance(KernelKind kind, double gamma, double squared_distance) {
    switch (kind) {
        case KernelKind::Gaussian: return std::exp(-gamma * squared_distance);
        case KernelKind::Constant: return 1.0;
    }
    return 0.0;
}

double median_heuristic(std::span<const UnitPoint> points, std::size_t cap) {
    if (points.size() < 2) {
        throw Error(ErrorCode::TooFewPoints, "median heuristic needs at least 2 points, got " +
                                                 std::to_string(points.size()));
    }
    if (cap < 2) throw Error(ErrorCode::BadConfig, "median heuristic cap must be >= 2");

    const std::size_t m = points.size();
    std::vector<UnitPoint> sample;
    if (m <= cap) {
        sample.assign(points.begin(), points.end());
    } else {
        sample.reserve(cap);
        for (std::size_t i = 0; i < cap; ++i) sample.push_back(points[i * m / cap]);
    }

    std::vector<double> distances;
    distances.reserve(sample.size() * (sample.size() - 1) / 2);
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            distances.push_back(std::hypot(sample[i].x - sample[j].x, sample[i].y - sample[j].y));
        }
    }
    const std::size_t half = distances.size() / 2;
    std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(half), distances.end());
    double sigma = distances[half];
    if (distances.size() % 2 == 0) {
        const double lower = *std::max_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(half));
        sigma = 0.5 * (lower + sigma);
    }
    if (sigma == 0.0) return 1.0;
    return 1.0 / (2.0 * sigma * sigma);
}

namespace {

// Fraction of values <= each value (ties share the maximal rank), same convention as the
// pseudo-observation indicator.
std::vector<double> upper_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto count = std::upper_bound(sorted.begin(), sorted.end(), values[i]) - sorted.begin();
        out[i] = static_cast<double>(count) / static_cast<double>(n);
    }
    return out;
}

}  // namespace

std::vector<UnitPoint> pooled_rank_points(const Dataset& data) {
    const auto rx = upper_ranks(data.x);
    const auto ry = upper_ranks(data.y);
    std::vector<UnitPoint> points(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) points[i] = UnitPoint{rx[i], ry[i]};
    std::sort(points.begin(), points.end(), [](UnitPoint a, UnitPoint b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    return points;
}

double pooled_rank_bandwidth(const Dataset& data, std::size_t cap) {
    const auto points = pooled_rank_points(data);
    return median_heuristic(points, cap);
}

}  // namespace copulacpd
