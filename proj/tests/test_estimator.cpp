#include <gtest/gtest.h>

#include <cmath>

#include "robmean/estimator.hpp"
#include "robmean/problems.hpp"
#include "robmean/stats.hpp"

using namespace robmean;

TEST(BuildGrid, Examples) {
    EXPECT_EQ(build_grid(1.0, 1, GridScheme::geometric_volume).radii, std::vector<double>{1.0});

    const auto lin = build_grid(1.0, 3, GridScheme::linear_radius, 0.25);
    ASSERT_EQ(lin.levels(), 3u);
    EXPECT_DOUBLE_EQ(lin.radii[1], 0.625);
    EXPECT_DOUBLE_EQ(lin.radii[2], 0.25);

    const auto geo = build_grid(1.0, 3, GridScheme::geometric_volume, 0.5);
    EXPECT_NEAR(geo.radii[1], 0.7071067811865476, 1e-15);
    // d = 2: v-ratio per step is 0.5.
    EXPECT_NEAR(std::exp(log_volume_ratio(2, geo.radii[1], geo.radii[0])), 0.5, 1e-14);
    EXPECT_NEAR(std::exp(log_volume_ratio(2, geo.radii[2], geo.radii[1])), 0.5, 1e-14);
}

TEST(BuildGrid, Errors) {
    EXPECT_THROW(build_grid(1.0, 0, GridScheme::linear_radius, 0.5), ValidationError);
    EXPECT_THROW(build_grid(0.0, 3, GridScheme::linear_radius, 0.5), ValidationError);
    EXPECT_THROW(build_grid(-1.0, 3, GridScheme::linear_radius, 0.5), ValidationError);
    EXPECT_THROW(build_grid(1.0, 3, GridScheme::linear_radius, 1.0), ValidationError);
    EXPECT_THROW(build_grid(1.0, 3, GridScheme::geometric_volume, 2.0), ValidationError);
    EXPECT_THROW(grid_from_radii({1.0, 0.5, 0.7}), ValidationError);
    EXPECT_THROW(grid_from_radii({}), ValidationError);
}

TEST(EstimateLevels, ZeroProblem) {
    auto p = builtin_problem("zero", 3, NormKind::euclidean, 1.0);
    Stream rng(5);
    for (const auto& l : estimate_levels(p, build_grid(1.0, 10, GridScheme::geometric_volume, 0.1), 100, rng)) {
        EXPECT_EQ(l.mean, 0.0);
        EXPECT_EQ(l.std_error, 0.0);
    }
}

TEST(EstimateLevels, OddSymmetricCentered) {
    auto p = builtin_problem("odd-symmetric", 2, NormKind::sup, 1.0);
    Stream rng(6);
    for (const auto& l : estimate_levels(p, build_grid(1.0, 20, GridScheme::linear_radius, 0.1), 5000, rng))
        EXPECT_LE(std::abs(l.mean), 4.5 * l.std_error);
}

TEST(EstimateLevels, QuadraticShiftMatchesAnalytic) {
    for (auto norm : {NormKind::euclidean, NormKind::sup, NormKind::one}) {
        auto p = builtin_problem("quadratic-shift", 2, norm, 1.0);
        Stream rng(7);
        const auto levels = estimate_levels(p, build_grid(1.0, 15, GridScheme::geometric_volume, 0.2), 20000, rng);
        for (const auto& l : levels)
            EXPECT_NEAR(l.mean, *builtin_mean("quadratic-shift", 2, norm, l.radius), 4.5 * l.std_error)
                << to_string(norm) << " rho " << l.radius;
    }
}

TEST(EstimateLevels, CountsMatchTrace) {
    auto p = builtin_problem("quadratic-shift", 1, NormKind::euclidean, 1.0);
    Stream rng(8);
    const auto levels = estimate_levels(p, build_grid(1.0, 30, GridScheme::geometric_volume, 0.5), 200, rng);
    EXPECT_EQ(levels[0].fresh, 200u);
    EXPECT_EQ(levels[0].reused, 0u);
    for (const auto& l : levels) EXPECT_EQ(l.fresh + l.reused, 200u);
}

TEST(EstimateLevels, NeedsTwoSamples) {
    auto p = builtin_problem("zero", 1, NormKind::euclidean, 1.0);
    Stream rng(1);
    EXPECT_THROW(estimate_levels(p, build_grid(1.0, 2, GridScheme::linear_radius, 0.5), 1, rng), ValidationError);
}

TEST(EstimateNaive, EvaluationCount) {
    auto p = builtin_problem("quadratic-shift", 2, NormKind::euclidean, 1.0);
    std::size_t calls = 0;
    p.q = [inner = p.q, &calls](const double& v, std::span<const double> d) {
        ++calls;
        return inner(v, d);
    };
    Stream rng(2);
    estimate_naive(p, build_grid(1.0, 17, GridScheme::linear_radius, 0.3), 123, rng);
    EXPECT_EQ(calls, 17u * 123u);
}

TEST(EstimateNaive, SingleLevelSameAsReusePath) {
    auto p = builtin_problem("quadratic-shift", 2, NormKind::euclidean, 1.0);
    const auto grid = build_grid(1.0, 1, GridScheme::geometric_volume);
    Stream a(11), b(11);
    const auto r = estimate_levels(p, grid, 500, a);
    const auto n = estimate_naive(p, grid, 500, b);
    EXPECT_EQ(r[0].mean, n[0].mean);
    EXPECT_EQ(r[0].std_error, n[0].std_error);
}

TEST(EstimateNaive, DeltaSquaredOneDim) {
    auto p = builtin_problem("zero", 1, NormKind::euclidean, 1.0);
    p.q = [](const double&, std::span<const double> d) { return d[0] * d[0]; };
    Stream rng(12);
    for (const auto& l : estimate_naive(p, build_grid(1.0, 10, GridScheme::geometric_volume, 0.05), 10000, rng))
        EXPECT_NEAR(l.mean, l.radius * l.radius / 3.0, 4 * l.std_error);
}

TEST(Bounds, Examples) {
    auto single = bounds({{1.0, 0.4, 0.01, 0, 10}});
    EXPECT_EQ(single.lower, 0.4);
    EXPECT_EQ(single.upper, 0.4);

    auto three = bounds({{1.0, 1.2, 0.1, 0, 10}, {0.8, -0.3, 0.2, 5, 5}, {0.5, 0.7, 0.3, 7, 3}});
    EXPECT_EQ(three.lower, -0.3);
    EXPECT_EQ(three.upper, 1.2);
    EXPECT_EQ(three.argmin_radius, 0.8);
    EXPECT_EQ(three.argmax_radius, 1.0);
    EXPECT_EQ(three.lower_std_error, 0.2);
    EXPECT_EQ(three.total_fresh, 18u);

    EXPECT_THROW(bounds({}), ValidationError);
}

TEST(Bounds, DenseGridDeltaSquared) {
    auto p = builtin_problem("zero", 1, NormKind::euclidean, 1.0);
    p.q = [](const double&, std::span<const double> d) { return d[0] * d[0]; };
    Stream rng(13);
    const auto grid = build_grid(1.0, 200, GridScheme::geometric_volume, 0.01);
    const auto rep = bounds(estimate_levels(p, grid, 10000, rng));
    EXPECT_NEAR(rep.upper, 1.0 / 3.0, 4 * rep.upper_std_error);
    EXPECT_LT(rep.lower, 1e-3);
    EXPECT_GE(rep.lower, 0.0);
}

TEST(EstimateLevels, ReuseAndNaiveAgreeInLaw) {
    // Per-level estimates from independent replications of each path.
    auto p = builtin_problem("quadratic-shift", 2, NormKind::euclidean, 1.0);
    const auto grid = build_grid(1.0, 5, GridScheme::geometric_volume, 0.5);
    std::vector<std::vector<double>> reuse(5), naive(5);
    for (std::uint64_t i = 0; i < 300; ++i) {
        Stream a = substream(99, 2 * i), b = substream(99, 2 * i + 1);
        const auto r = estimate_levels(p, grid, 50, a);
        const auto n = estimate_naive(p, grid, 50, b);
        for (std::size_t l = 0; l < 5; ++l) {
            reuse[l].push_back(r[l].mean);
            naive[l].push_back(n[l].mean);
        }
    }
    for (std::size_t l = 0; l < 5; ++l) EXPECT_GT(stats::ks_two_sample(reuse[l], naive[l]).p_value, 0.01 / 5);
}
