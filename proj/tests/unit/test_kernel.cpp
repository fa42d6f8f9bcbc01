#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "copulacpd/kernel.hpp"
#include "copulacpd/rng.hpp"
#include "oracles.hpp"

using namespace copulacpd;

TEST(Gaussian, Identity) { EXPECT_DOUBLE_EQ(gaussian({0.3, 0.7}, {0.3, 0.7}, 5.0), 1.0); }

TEST(Gaussian, AnalyticValues) {
    EXPECT_NEAR(gaussian({0, 0}, {1, 0}, 1.0), 0.36787944117144233, 1e-15);
    EXPECT_NEAR(gaussian({0, 0}, {1, 1}, 0.5), 0.36787944117144233, 1e-15);
}

TEST(Gaussian, SymmetricAndDecreasing) {
    EXPECT_EQ(gaussian({0.1, 0.2}, {0.5, 0.9}, 2.0), gaussian({0.5, 0.9}, {0.1, 0.2}, 2.0));
    double prev = 1.0;
    for (int i = 1; i <= 10; ++i) {
        const double v = gaussian({0, 0}, {0.1 * i, 0}, 3.0);
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(MedianHeuristic, SinglePair) { EXPECT_DOUBLE_EQ(median_heuristic(std::vector<UnitPoint>{{0, 0}, {1, 0}}), 0.5); }

TEST(MedianHeuristic, IdenticalPointsFallBack) {
    EXPECT_DOUBLE_EQ(median_heuristic(std::vector<UnitPoint>(6, UnitPoint{0.4, 0.4})), 1.0);
}

TEST(MedianHeuristic, MatchesExhaustiveOracle) {
    CounterRng r(9);
    for (std::size_t m : {7u, 8u, 31u}) {
        std::vector<UnitPoint> pts;
        std::vector<std::pair<double, double>> raw;
        for (std::size_t i = 0; i < m; ++i) {
            const double a = r.uniform(), b = r.uniform();
            pts.push_back({a, b});
            raw.emplace_back(a, b);
        }
        EXPECT_DOUBLE_EQ(median_heuristic(pts), oracle::median_gamma(raw)) << m;
    }
}

TEST(MedianHeuristic, PermutationInvariantWithinCap) {
    CounterRng r(10);
    std::vector<UnitPoint> pts;
    for (int i = 0; i < 40; ++i) pts.push_back({r.uniform(), r.uniform()});
    const double g = median_heuristic(pts);
    std::reverse(pts.begin(), pts.end());
    EXPECT_EQ(median_heuristic(pts), g);
}

TEST(MedianHeuristic, Errors) {
    EXPECT_THROW(median_heuristic(std::vector<UnitPoint>{{0, 0}}), Error);
    EXPECT_THROW(median_heuristic(std::vector<UnitPoint>{{0, 0}, {1, 1}}, 1), Error);
}

TEST(PooledRanks, RowOrderDoesNotMatter) {
    Dataset d = oracle::random_dataset(3, 60, 1);
    const double g = pooled_rank_bandwidth(d);
    std::reverse(d.x.begin(), d.x.end());
    std::reverse(d.y.begin(), d.y.end());
    EXPECT_EQ(pooled_rank_bandwidth(d), g);
}

TEST(PooledRanks, RanksUseLessOrEqual) {
    Dataset d;
    d.x = {1, 2, 2, 3};
    d.y = {4, 3, 2, 1};
    d.z = Matrix(4, 1);
    const auto pts = pooled_rank_points(d);
    // rows (0.25, 1), (0.75, 0.75), (0.75, 0.5), (1, 0.25) sorted lexicographically
    ASSERT_EQ(pts.size(), 4u);
    EXPECT_DOUBLE_EQ(pts[0].x, 0.25);
    EXPECT_DOUBLE_EQ(pts[1].x, 0.75);
    EXPECT_DOUBLE_EQ(pts[1].y, 0.5);
    EXPECT_DOUBLE_EQ(pts[2].y, 0.75);
    EXPECT_DOUBLE_EQ(pts[3].y, 0.25);
}
