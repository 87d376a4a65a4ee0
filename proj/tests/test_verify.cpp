#include <gtest/gtest.h>

#include <string>

#include "robmean/verify.hpp"

using namespace robmean;
using namespace robmean::verify;

namespace {

TestConfig small_uniformity() {
    auto cfg = default_config("reuse-uniformity");
    cfg.replications = 10;
    return cfg;
}

TestConfig small_density() {
    auto cfg = default_config("density-profile");
    cfg.density.kappa = 2.0;
    cfg.density.a = 1.0;
    cfg.density.levels = 300;
    cfg.density.replications = 200;
    cfg.density.seed = 5;
    return cfg;
}

}  // namespace

TEST(Verify, ShippedSuitesPass) {
    for (auto suite : {"poisson-dominance", "poisson-convergence", "complexity-tails"}) {
        const auto rep = run_suite(default_config(suite));
        EXPECT_TRUE(rep.passed()) << to_text(rep);
    }
    const auto uni = run_suite(small_uniformity());
    EXPECT_TRUE(uni.passed()) << to_text(uni);
    const auto dens = run_suite(small_density());
    EXPECT_TRUE(dens.passed()) << to_text(dens);
}

TEST(Verify, UniformityOtherNormsAndDims) {
    for (auto norm : {NormKind::sup, NormKind::one}) {
        for (std::size_t d : {1u, 3u}) {
            auto cfg = small_uniformity();
            cfg.norm = norm;
            cfg.dim = d;
            const auto rep = run_suite(cfg);
            EXPECT_TRUE(rep.passed()) << to_text(rep);
        }
    }
}

TEST(Verify, SingleLevelReducesToSampler) {
    auto cfg = small_uniformity();
    cfg.levels = 1;
    const auto rep = run_suite(cfg);
    EXPECT_TRUE(rep.passed()) << to_text(rep);
}

TEST(Verify, TooFewSamples) {
    auto cfg = small_uniformity();
    cfg.n = 9;
    cfg.replications = 10;
    EXPECT_THROW(run_suite(cfg), ValidationError);
}

TEST(Verify, UnfilteredReuseIsCaught) {
    auto cfg = small_uniformity();
    cfg.fault = Fault::unfiltered_reuse;
    const auto rep = run_suite(cfg);
    EXPECT_FALSE(rep.passed());
    EXPECT_LT(rep.checks[0].statistic, 1e-6);
}

TEST(Verify, WrongRadialExponentIsCaught) {
    auto cfg = small_uniformity();
    cfg.fault = Fault::wrong_radial_exponent;
    EXPECT_FALSE(run_suite(cfg).passed());
    auto dens = small_density();
    dens.fault = Fault::wrong_radial_exponent;
    EXPECT_FALSE(run_suite(dens).passed());
}

TEST(Verify, OffByOneIsCaught) {
    for (auto suite : {"poisson-dominance", "poisson-convergence", "complexity-tails"}) {
        auto cfg = default_config(suite);
        cfg.fault = Fault::fresh_off_by_one;
        EXPECT_FALSE(run_suite(cfg).passed()) << suite;
    }
}

TEST(Verify, LambdaZeroIsDegenerate) {
    // One level: no reuse step, lambda = 0.
    for (auto suite : {"poisson-dominance", "complexity-tails"}) {
        auto cfg = default_config(suite);
        cfg.levels = 1;
        const auto rep = run_suite(cfg);
        EXPECT_TRUE(rep.passed()) << to_text(rep);
    }
}

TEST(Verify, TinyLambda) {
    auto cfg = default_config("complexity-tails");
    cfg.n = 5;  // lambda = 0.5
    const auto rep = run_suite(cfg);
    EXPECT_TRUE(rep.passed()) << to_text(rep);
}

TEST(Verify, TwoLevelDominance) {
    auto cfg = default_config("poisson-dominance");
    cfg.levels = 2;
    cfg.k_max = 0;
    const auto rep = run_suite(cfg);
    EXPECT_TRUE(rep.passed()) << to_text(rep);
}

TEST(Verify, ConvergenceEdgeCases) {
    auto cfg = default_config("poisson-convergence");
    cfg.m_sweep = {2, 2};
    cfg.tv_threshold = 0.1;
    const auto rep = run_suite(cfg);
    EXPECT_TRUE(rep.passed()) << to_text(rep);
}

TEST(Verify, DeterministicStatistics) {
    const auto a = run_suite(small_uniformity());
    auto cfg = small_uniformity();
    cfg.threads = 1;
    const auto b = run_suite(cfg);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Verify, ReportIsAuditable) {
    const auto rep = run_suite(default_config("complexity-tails"));
    for (const auto& c : rep.checks) EXPECT_EQ(c.passed, holds(c.statistic, c.relation, c.threshold));
    const auto j = to_json(rep);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["passed"], true);
    EXPECT_NE(to_text(rep).find("PASS"), std::string::npos);
}
