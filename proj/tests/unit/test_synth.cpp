#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "copulacpd/synth.hpp"

using namespace copulacpd;

namespace {

ScenarioOutput gen(const std::string& id, std::size_t n = 400, std::size_t tau = 200, std::uint64_t seed = 1,
                   bool twin = false, std::map<std::string, double> params = {}) {
    ScenarioSpec s;
    s.id = id;
    s.n = n;
    s.tau = tau;
    s.seed = seed;
    s.twin = twin;
    s.params = std::move(params);
    return generate(s);
}

double sd(const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

const std::vector<std::string> kIds = {
    "PMB01_EDGE_ON_LINEAR", "PMB02_EDGE_ON_NONLIN", "PMB03_EDGE_ON_NEWDRV", "PMB04_EDGE_OFF",
    "PMB05_EDGE_ON_COLLINEAR_X", "PEF01_SIGN_FLIP", "PEF02_STRENGTH_SHIFT", "PEF03_STRENGTH_SHIFT_MULTIZ",
    "PEF04_STRENGTH_SHIFT_DISTRACTORS", "PEF05_STRENGTH_SHIFT_MULTIZ_NOSCALE", "PEF06_SIGN_FLIP_GAUSS",
    "PEF07_SPARSE_CHANGE_CORR_X", "PEF08_POISSON_SLOPE", "PNL01_SHAPE_CHANGE", "PNL02_INTERACTION_EDGE_ON_XZ",
    "PNL03_TAIL_GATED_EDGE_ON", "PNL04_QUADRATIC_FLIP", "PNL05_HIGH_FREQ_SINE", "PNM01_COND_SKEW",
    "PNM02_COND_TAILS", "PNM03_COND_MIXTURE", "PVR01_COND_HETSKED", "PVR02_VOL_CLUSTER",
    "PVR03_GLOBAL_NOISE_SCALE", "PSM01_SMOOTH_TRANSITION", "NCL01_BASE_NULL", "NCL02_MULTIX_ALIGN",
    "NIV01_GLOBAL_RESCALE", "NIV02_Y_MONO_TRANSFORM", "NIV03_X_MONO_GIVEN_Z", "NMD01_Z_LOC_SCALE",
    "NMD02_X_MEAN_SHIFT", "NMD03_Y_TREND", "NMD04_Y_SEASON", "NNS01_NOISE_LAW_SHIFT", "NNS02_TAILS_SHIFT",
    "NCF01_XGZ_DRIFT", "NCF02_Z_COV_SHIFT", "NCF03_XGZ_DRIFT_COPULA", "NCF04_FZ_DRIFT_ONLY", "NCF05_DISCRETE_Z",
    "NDR01_FEATURE_PERMUTE", "NPO01_LATENT_Z_STABLE"};

}  // namespace

TEST(Registry, HoldsEveryScenarioOnce) {
    const auto& all = list_scenarios();
    EXPECT_EQ(all.size(), kIds.size());
    std::set<std::string> ids;
    for (const auto& s : all) ids.insert(s.id);
    for (const auto& id : kIds) EXPECT_TRUE(ids.count(id)) << id;
    EXPECT_EQ(ids.size(), all.size());
}

TEST(Registry, NullFlagFollowsPrefix) {
    for (const auto& s : list_scenarios()) EXPECT_EQ(s.is_null, s.id[0] == 'N') << s.id;
}

TEST(Registry, UnknownScenario) {
    try {
        find_scenario("PXX99_NOPE");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownScenario);
    }
    EXPECT_EQ(find_scenario("PNL04_QUADRATIC_FLIP").id, "PNL04_QUADRATIC_FLIP");
}

TEST(Generate, EveryScenarioIsFiniteAndDeterministic) {
    for (const auto& id : kIds) {
        const auto a = gen(id, 200, 100, 9);
        const auto b = gen(id, 200, 100, 9);
        EXPECT_EQ(a.data, b.data) << id;
        EXPECT_EQ(a.data.n(), 200u);
        EXPECT_NO_THROW(validate(a.data)) << id;
        EXPECT_EQ(a.true_tau, 100u);
        EXPECT_EQ(a.is_null, id[0] == 'N');
        EXPECT_NE(gen(id, 200, 100, 10).data, a.data) << id;
    }
}

TEST(Generate, TwinSharesPreSegment) {
    for (const auto& id : kIds) {
        if (id[0] != 'P' || id == "PSM01_SMOOTH_TRANSITION") continue;
        const auto a = gen(id, 200, 100, 3);
        const auto t = gen(id, 200, 100, 3, true);
        EXPECT_EQ(a.data.slice(0, 100), t.data.slice(0, 100)) << id;
        EXPECT_NE(a.data.slice(100, 200), t.data.slice(100, 200)) << id;
    }
}

TEST(Generate, Pmb01Equations) {
    const auto o = gen("PMB01_EDGE_ON_LINEAR", 4000, 2000);
    std::vector<double> pre, post;
    for (std::size_t i = 0; i < 4000; ++i) {
        const double base = o.data.y[i] - o.data.z(i, 0);
        (i < 2000 ? pre : post).push_back(i < 2000 ? base : base - o.data.x[i]);
    }
    EXPECT_NEAR(sd(pre), 0.10, 0.005);
    EXPECT_NEAR(sd(post), 0.10, 0.005);
}

TEST(Generate, Pef01SignFlip) {
    const auto o = gen("PEF01_SIGN_FLIP", 4000, 2000);
    std::vector<double> pre, post;
    for (std::size_t i = 0; i < 4000; ++i) {
        const double sign = i < 2000 ? 1.0 : -1.0;
        (i < 2000 ? pre : post).push_back(o.data.y[i] - 0.5 * o.data.z(i, 0) - sign * 0.6 * o.data.x[i]);
    }
    EXPECT_NEAR(sd(pre), 0.10, 0.005);
    EXPECT_NEAR(sd(post), 0.10, 0.005);
}

TEST(Generate, Niv01RescalesPostTriple) {
    const auto o = gen("NIV01_GLOBAL_RESCALE", 100, 50);
    const auto t = gen("NIV01_GLOBAL_RESCALE", 100, 50, 1, true);
    for (std::size_t i = 0; i < 100; ++i) {
        const double f = i < 50 ? 1.0 : 10.0;
        EXPECT_EQ(o.data.x[i], f * t.data.x[i]);
        EXPECT_EQ(o.data.y[i], f * t.data.y[i]);
        EXPECT_EQ(o.data.z(i, 0), f * t.data.z(i, 0));
    }
}

TEST(Generate, Niv02AppliesAsinh) {
    const auto o = gen("NIV02_Y_MONO_TRANSFORM", 100, 50);
    const auto t = gen("NIV02_Y_MONO_TRANSFORM", 100, 50, 1, true);
    for (std::size_t i = 50; i < 100; ++i) EXPECT_EQ(o.data.y[i], std::asinh(t.data.y[i]));
}

TEST(Generate, LognormalNoiseMoments) {
    for (double ax : {0.0, 0.1}) {
        const double shape = 0.1 + 2.0 * ax;
        CounterRng r(77, stream_tag("moments"));
        const int n = 400000;
        double s = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
            const double e = standardized_lognormal(shape, 0.1, r);
            s += e;
            s2 += e * e;
        }
        const double mean = s / n;
        const double var = s2 / n - mean * mean;
        EXPECT_LE(std::fabs(mean), 0.01 * 0.1) << ax;
        EXPECT_NEAR(var, 0.01, 0.01 * 0.01) << ax;
    }
}

TEST(Generate, Pvr03VarianceRatio) {
    const auto o = gen("PVR03_GLOBAL_NOISE_SCALE", 20000, 10000);
    std::vector<double> pre, post;
    for (std::size_t i = 0; i < 20000; ++i) {
        const double r = o.data.y[i] - 0.5 * o.data.z(i, 0) - 0.6 * o.data.x[i];
        (i < 10000 ? pre : post).push_back(r);
    }
    EXPECT_NEAR(sd(post) / sd(pre), 5.0, 0.5);
}

TEST(Generate, Psm01Ramp) {
    EXPECT_EQ(logistic_ramp(400, 400, 100), 0.5);
    double prev = 0.0;
    for (int t = 1; t <= 800; ++t) {
        const double w = logistic_ramp(t, 400, 100);
        EXPECT_GE(w, prev);
        prev = w;
    }
    EXPECT_EQ(logistic_ramp(10, 11, 1), 1.0 / (1.0 + std::exp(1.0)));
}

TEST(Generate, Pnm03PostSegmentStandardized) {
    const auto o = gen("PNM03_COND_MIXTURE", 800, 400);
    std::vector<double> post(o.data.y.begin() + 400, o.data.y.end());
    const double m = std::accumulate(post.begin(), post.end(), 0.0) / 400.0;
    EXPECT_NEAR(m, 0.0, 1e-12);
    EXPECT_NEAR(sd(post), 0.10, 1e-12);
}

TEST(Generate, Pef08PoissonConditioningColumn) {
    const auto o = gen("PEF08_POISSON_SLOPE", 2000, 1000);
    double pre = 0, post = 0;
    for (std::size_t i = 0; i < 2000; ++i) {
        const double z = o.data.z(i, 0);
        EXPECT_EQ(z, std::floor(z));
        (i < 1000 ? pre : post) += z;
    }
    EXPECT_NEAR(pre / 1000, 0.5, 0.1);
    EXPECT_NEAR(post / 1000, 5.0, 0.3);
}

TEST(Generate, MultiDriverMetadata) {
    const auto ndr = gen("NDR01_FEATURE_PERMUTE", 100, 50);
    EXPECT_EQ(ndr.driver_column, 0u);
    EXPECT_EQ(ndr.other_x.cols(), 2u);
    const auto twin = gen("NDR01_FEATURE_PERMUTE", 100, 50, 1, true);
    for (std::size_t i = 50; i < 100; ++i) {
        EXPECT_EQ(ndr.other_x(i, 0), twin.other_x(i, 1));
        EXPECT_EQ(ndr.other_x(i, 1), twin.other_x(i, 0));
    }
    EXPECT_EQ(gen("PMB03_EDGE_ON_NEWDRV").driver_column, 1u);
    const auto m5 = gen("PMB05_EDGE_ON_COLLINEAR_X", 100, 50, 1, false, {{"m", 5}});
    EXPECT_EQ(m5.other_x.cols(), 4u);
}

TEST(Generate, DimensionParams) {
    EXPECT_EQ(gen("PEF03_STRENGTH_SHIFT_MULTIZ").data.d(), 3u);
    EXPECT_EQ(gen("PEF04_STRENGTH_SHIFT_DISTRACTORS", 100, 50, 1, false, {{"d_s", 2}, {"d_n", 3}}).data.d(), 5u);
    EXPECT_EQ(gen("NPO01_LATENT_Z_STABLE").data.d(), 1u);
    EXPECT_EQ(gen("NCF02_Z_COV_SHIFT", 100, 50, 1, false, {{"d_z", 4}}).data.d(), 4u);
}

TEST(Generate, NonPaperParamsAreFlagged) {
    const auto o = gen("NCF02_Z_COV_SHIFT");
    EXPECT_NE(std::find(o.assumed_params.begin(), o.assumed_params.end(), "rho_pre"), o.assumed_params.end());
    EXPECT_EQ(o.params.at("rho_post"), 0.8);
}

TEST(Generate, BadParams) {
    auto code = [](auto fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Parse;
    };
    EXPECT_EQ(code([] { gen("PMB01_EDGE_ON_LINEAR", 100, 50, 1, false, {{"nope", 1}}); }), ErrorCode::BadParams);
    EXPECT_EQ(code([] { gen("PMB01_EDGE_ON_LINEAR", 100, 0); }), ErrorCode::BadParams);
    EXPECT_EQ(code([] { gen("PMB01_EDGE_ON_LINEAR", 100, 100); }), ErrorCode::BadParams);
    EXPECT_EQ(code([] { gen("PMB03_EDGE_ON_NEWDRV", 100, 50, 1, false, {{"m", 1}}); }), ErrorCode::BadParams);
    EXPECT_EQ(code([] { gen("NOPE", 100, 50); }), ErrorCode::UnknownScenario);
}
