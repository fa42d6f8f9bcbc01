#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "copulacpd/rng.hpp"

using namespace copulacpd;

TEST(CounterRng, SameKeySameStream) {
    CounterRng a(42, stream_tag("z"), 3);
    CounterRng b(42, stream_tag("z"), 3);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(CounterRng, DifferentTagsDiffer) {
    CounterRng a(42, stream_tag("z"));
    CounterRng b(42, stream_tag("eps_y"));
    int same = 0;
    for (int i = 0; i < 100; ++i) same += a.next_u64() == b.next_u64();
    EXPECT_EQ(same, 0);
}

TEST(CounterRng, UniformInOpenInterval) {
    CounterRng r(1);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(CounterRng, BelowIsInRangeAndCoversIt) {
    CounterRng r(2);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto v = r.below(7);
        ASSERT_LT(v, 7u);
        ++hits[v];
    }
    for (int h : hits) EXPECT_GT(h, 800);
}

TEST(CounterRng, NormalMoments) {
    CounterRng r(3);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double v = r.normal();
        s += v;
        s2 += v * v;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(CounterRng, LaplaceVariance) {
    CounterRng r(4);
    const int n = 200000;
    double s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double v = r.laplace(0.5);
        s2 += v * v;
    }
    EXPECT_NEAR(s2 / n, 2 * 0.25, 0.02);
}

TEST(CounterRng, PoissonMean) {
    CounterRng r(5);
    const int n = 100000;
    double s = 0;
    for (int i = 0; i < n; ++i) s += static_cast<double>(r.poisson(5.0));
    EXPECT_NEAR(s / n, 5.0, 0.05);
}

TEST(CounterRng, StudentTVarianceNearThree) {
    CounterRng r(6);
    const int n = 400000;
    double below = 0;
    for (int i = 0; i < n; ++i) below += r.student_t(3) <= 1.0 ? 1 : 0;
    // P(T_3 <= 1) = 0.8044988905
    EXPECT_NEAR(below / n, 0.8044988905, 0.003);
}

TEST(RandomPermutation, IsAPermutation) {
    CounterRng r(7);
    auto p = random_permutation(50, r);
    std::sort(p.begin(), p.end());
    std::vector<std::size_t> id(50);
    std::iota(id.begin(), id.end(), 0);
    EXPECT_EQ(p, id);
}

TEST(RandomPermutation, FirstPositionUniform) {
    std::vector<int> hits(5, 0);
    for (std::uint64_t s = 0; s < 5000; ++s) {
        CounterRng r(s);
        ++hits[random_permutation(5, r)[0]];
    }
    for (int h : hits) EXPECT_NEAR(h, 1000, 120);
}
