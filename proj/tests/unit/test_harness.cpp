#include <gtest/gtest.h>

#include <cmath>

#include "copulacpd/error.hpp"
#include "copulacpd/harness.hpp"

using namespace copulacpd;

TEST(Auc, Separation) { EXPECT_EQ(mann_whitney_auc(std::vector<double>{2, 3}, std::vector<double>{1}), 1.0); }

TEST(Auc, TiesCountHalf) { EXPECT_EQ(mann_whitney_auc(std::vector<double>{1}, std::vector<double>{1}), 0.5); }

TEST(Auc, OneWinOneLoss) { EXPECT_EQ(mann_whitney_auc(std::vector<double>{1, 3}, std::vector<double>{2}), 0.5); }

TEST(Auc, IdenticalMultisets) {
    const std::vector<double> v{0.1, 0.4, 0.4, 0.9};
    EXPECT_EQ(mann_whitney_auc(v, v), 0.5);
}

TEST(Auc, MatchesPairCount) {
    const std::vector<double> a{0.3, 1.2, -0.5, 2.0, 1.2}, b{1.2, 0.0, 0.7};
    double wins = 0;
    for (double x : a) {
        for (double y : b) wins += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
    }
    EXPECT_DOUBLE_EQ(mann_whitney_auc(a, b), wins / 15.0);
}

TEST(Auc, InvariantUnderMonotoneTransform) {
    const std::vector<double> a{0.3, 1.2, -0.5, 2.0}, b{1.0, 0.0, 0.7};
    std::vector<double> ta, tb;
    for (double v : a) ta.push_back(std::exp(v));
    for (double v : b) tb.push_back(std::exp(v));
    EXPECT_EQ(mann_whitney_auc(a, b), mann_whitney_auc(ta, tb));
}

TEST(Auc, EmptyInput) {
    try {
        mann_whitney_auc(std::vector<double>{}, std::vector<double>{1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
    }
}

TEST(AucSe, ShrinksWithReplicates) {
    EXPECT_GT(auc_standard_error(0.8, 20, 20), auc_standard_error(0.8, 80, 80));
    EXPECT_EQ(auc_standard_error(1.0, 50, 50), 0.0);
}

TEST(Median, OddAndEven) {
    EXPECT_EQ(median({3, 1, 2}), 2.0);
    EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
}

TEST(RunBench, SmallRunIsDeterministic) {
    BenchConfig c;
    c.scenarios = {"PEF01_SIGN_FLIP", "NCL01_BASE_NULL"};
    c.replicates = 3;
    c.n = 160;
    c.k = 10;
    c.b = 9;
    const auto a = run_bench(c);
    c.threads = 2;
    const auto b = run_bench(c);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0].q_scenario, b[0].q_scenario);
    EXPECT_EQ(a[0].q_null, b[0].q_null);
    EXPECT_EQ(a[1].p_values, b[1].p_values);
    EXPECT_EQ(a[0].null_class, "PEF01_SIGN_FLIP");
    EXPECT_EQ(a[1].null_class, "NCL01_BASE_NULL");
    for (const auto& r : a) {
        EXPECT_GE(r.auc, 0.0);
        EXPECT_LE(r.auc, 1.0);
        EXPECT_LE(r.rejections, r.replicates);
    }
}

TEST(RunBench, ConfigErrors) {
    BenchConfig c;
    EXPECT_THROW(run_bench(c), Error);
    c.scenarios = {"NOPE"};
    EXPECT_THROW(run_bench(c), Error);
    c.scenarios = {"NCL01_BASE_NULL"};
    c.replicates = 1;
    EXPECT_THROW(run_bench(c), Error);
}
