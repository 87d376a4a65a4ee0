// Acceptance run: one PASS/FAIL line per criterion. Tolerances and seeds are
// fixed here; the process exits nonzero if any criterion fails.
//
//   acceptance [output-dir]     (the reference density CSV is written there)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "robmean/complexity.hpp"
#include "robmean/density.hpp"
#include "robmean/estimator.hpp"
#include "robmean/parallel.hpp"
#include "robmean/problems.hpp"
#include "robmean/report_io.hpp"
#include "robmean/reuse.hpp"
#include "robmean/stats.hpp"
#include "robmean/verify.hpp"

using namespace robmean;

namespace {

// Pinned tolerances.
constexpr std::size_t kUniformitySeeds = 50;       // seeds 1..50
constexpr std::size_t kUniformityMinPass = 45;
constexpr double kUniformityAlpha = 0.01;
constexpr double kUniformityMaxSeconds = 30.0;     // one suite run
constexpr std::size_t kJointLawChains = 100000;
constexpr double kJointLawTv = 0.02;
constexpr double kZeroMassTol = 1e-10;
constexpr long long kDominanceKMax = 60;
constexpr double kTvAtM100 = 1e-3;                 // oracle value 6.32e-4
constexpr std::size_t kMeanChains = 2000;
constexpr double kMeanSigmas = 3.0;
constexpr double kCdfEqualAtZeroTol = 1e-12;
constexpr double kEstimatorSigmas = 4.0;
constexpr double kEconomyFraction = 0.05;
constexpr std::size_t kEconomyReplications = 500;
constexpr double kEconomyAlpha = 0.01;             // family-wise, Bonferroni over levels

// Shared geometry for criteria 5 and 9: N = 100, m = 50, d = 2,
// radii 1 -> e^-0.1, so V_max / V_min = e^0.2 and lambda = 20.
constexpr std::size_t kChainN = 100;
constexpr std::size_t kChainM = 50;
constexpr std::size_t kChainDim = 2;
GridSpec chain_grid() { return build_grid(1.0, kChainM, GridScheme::geometric_volume, std::exp(-0.1)); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1. Final-level samples are uniform in the smallest ball.
Outcome uniformity() {
    auto cfg = verify::default_config("reuse-uniformity");
    cfg.dim = 2;
    cfg.norm = NormKind::euclidean;
    cfg.max_radius = 1.0;
    cfg.min_radius = 0.5;
    cfg.levels = 20;
    cfg.n = 1000;
    cfg.replications = 50;
    cfg.alpha = kUniformityAlpha;
    std::size_t passed = 0;
    double worst_seconds = 0.0;
    double min_ks_p = 1.0;
    for (std::uint64_t seed = 1; seed <= kUniformitySeeds; ++seed) {
        cfg.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        const auto rep = verify::test_reuse_uniformity(cfg);
        worst_seconds = std::max(worst_seconds,
                                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        min_ks_p = std::min(min_ks_p, rep.checks[0].statistic);
        passed += rep.passed();
    }
    return {passed >= kUniformityMinPass && worst_seconds < kUniformityMaxSeconds,
            fmt("%zu/%zu seeds pass (need >= %zu), min KS p = %.3g, slowest suite run %.2f s (limit %.0f s)", passed,
                kUniformitySeeds, kUniformityMinPass, min_ks_p, worst_seconds, kUniformityMaxSeconds)};
}

double binom_pmf(int k, int n, double p) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

// 2. Joint law of (n_2, n_3) is the product of binomials.
Outcome joint_law() {
    const int n = 3;
    const double ratios[] = {0.5, 0.8};
    const auto grid = grid_from_radii({1.0, 0.5, 0.4});  // d = 1: volume ratio = radius ratio
    std::vector<std::array<std::uint8_t, 2>> draws(kJointLawChains);
    parallel_for(kJointLawChains, [&](std::size_t c) {
        Stream rng = substream(2, c);
        auto factory = [&](std::size_t, double radius) {
            Point d = sample_uniform_ball(BallSpec{1, radius, NormKind::euclidean}, rng);
            const double norm = std::abs(d[0]);
            return ExperimentRecord<std::monostate>({}, std::move(d), norm, 0.0);
        };
        const auto t = run_chain_with<std::monostate>(grid, n, factory);
        draws[c] = {static_cast<std::uint8_t>(t.per_level[1].fresh), static_cast<std::uint8_t>(t.per_level[2].fresh)};
    });
    double freq[4][4] = {};
    for (const auto& d : draws) freq[d[0]][d[1]] += 1.0 / kJointLawChains;
    double tv = 0.0;
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) {
            const double p = binom_pmf(n - a, n, ratios[0]) * binom_pmf(n - b, n, ratios[1]);
            tv += std::abs(freq[a][b] - p);
        }
    tv *= 0.5;
    return {tv < kJointLawTv, fmt("TV(empirical, product of binomials) = %.5f over %zu chains (limit %.2f)", tv,
                                  kJointLawChains, kJointLawTv)};
}

// 3. Exact dominance at N = 100, m = 11, lambda = 10.
Outcome dominance() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = build_grid(1.0, 11, GridScheme::geometric_volume, std::exp(-0.1));
    const auto dist = fresh_dist_for_grid(100, grid, 1);
    const double lambda = poisson_ref_for_grid(100, grid, 1).lambda;
    const double zero_err = std::abs(dist.cdf(0) - std::exp(-10.0));
    long long violations = 0;
    for (long long k = 1; k <= kDominanceKMax; ++k)
        if (!cdf_greater(dist.tails(k), poisson_tails(lambda, k))) ++violations;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {zero_err <= kZeroMassTol && violations == 0 && secs < 1.0,
            fmt("lambda = %.12g, |F(0) - e^-10| = %.2e, k in 1..%lld with F_exact <= F_P: %lld, %.3f s", lambda,
                zero_err, kDominanceKMax, violations, secs)};
}

// 4. TV to Poisson shrinks with m at fixed lambda = 10.
Outcome convergence() {
    auto cfg = verify::default_config("poisson-convergence");
    cfg.m_sweep = {2, 5, 20, 100};
    cfg.tv_threshold = kTvAtM100;
    const auto rep = verify::test_poisson_convergence(cfg);
    std::string tvs;
    for (const auto& [k, v] : rep.metrics)
        if (k.rfind("tv_m", 0) == 0) tvs += fmt("%s=%.3e ", k.c_str() + 3, v);
    return {rep.passed(), "TV " + tvs + fmt("(m=100 limit %.0e)", kTvAtM100)};
}

// 5. Mean fresh count after level 1.
Outcome complexity_mean() {
    const auto grid = chain_grid();
    double exact = 0.0, var = 0.0;
    for (std::size_t l = 1; l < grid.levels(); ++l) {
        const double r = std::exp(log_volume_ratio(kChainDim, grid.radii[l], grid.radii[l - 1]));
        exact += kChainN * (1.0 - r);
        var += kChainN * r * (1.0 - r);
    }
    const double lambda = poisson_ref_for_grid(kChainN, grid, kChainDim).lambda;
    std::vector<double> sums(kMeanChains);
    parallel_for(kMeanChains, [&](std::size_t c) {
        Stream rng = substream(5, c);
        auto factory = [&](std::size_t, double radius) {
            Point d = sample_uniform_ball(BallSpec{kChainDim, radius, NormKind::euclidean}, rng);
            const double norm = norm_of(d, NormKind::euclidean);
            return ExperimentRecord<std::monostate>({}, std::move(d), norm, 0.0);
        };
        sums[c] = static_cast<double>(fresh_after_first(run_chain_with<std::monostate>(grid, kChainN, factory)));
    });
    double mean = 0.0;
    for (double s : sums) mean += s / kMeanChains;
    const double sigma = std::sqrt(var / kMeanChains);
    const double z = (mean - exact) / sigma;
    return {std::abs(z) <= kMeanSigmas && exact < lambda,
            fmt("empirical %.4f vs exact %.6f (z = %+.2f, limit %.0f sigma); exact mean < lambda = %.6f", mean, exact,
                z, kMeanSigmas, lambda)};
}

// 6. Chernoff tails of the exact law at lambda = 10.
Outcome tails() {
    const auto dist = equal_ratio_dist(100, 11, 0.1);
    const double lambda = 10.0;
    int checked = 0, violations = 0;
    double worst = 0.0;
    for (int k = 11; k <= 30; ++k) {
        const double exact = dist.sf(k - 1);
        const double bound = chernoff_tail(lambda, k);
        worst = std::max(worst, exact / bound);
        ++checked;
        violations += exact > bound;
    }
    const long long ke = static_cast<long long>(std::ceil(std::numbers::e * lambda));
    const double at_e = dist.sf(ke - 1);
    const double bound_e = std::exp(-lambda);
    return {violations == 0 && at_e <= bound_e,
            fmt("%d integer k in (10, 30] checked, max exact/bound = %.3f; Pr{S >= e lambda} = Pr{S >= %lld} = %.3e "
                "<= e^-10 = %.3e",
                checked, worst, ke, at_e, bound_e)};
}

// 7. Binomial vs Poisson CDF ordering.
Outcome cdf_ordering() {
    int strict = 0, violations = 0;
    double worst_k0 = 0.0;
    for (double theta : {1.01, 1.1, 1.5, 2.0, 5.0, 10.0})
        for (std::size_t n = 1; n <= 20; ++n) {
            worst_k0 = std::max(worst_k0, std::abs(binomial_cdf_L(theta, n, 0).cdf - poisson_cdf_LP(theta, n, 0).cdf));
            for (std::size_t k = 1; k < n; ++k) {
                ++strict;
                violations += !cdf_greater(binomial_cdf_L(theta, n, k), poisson_cdf_LP(theta, n, k));
            }
        }
    return {violations == 0 && worst_k0 <= kCdfEqualAtZeroTol,
            fmt("%d strict comparisons, %d violations; max |L - L_P| at k = 0: %.2e", strict, violations, worst_k0)};
}

// 8. Per-level estimates for q = v + delta^2 on [-1, 1].
Outcome estimator() {
    auto p = builtin_problem("quadratic-shift", 1, NormKind::euclidean, 1.0);
    const auto grid = build_grid(1.0, 50, GridScheme::geometric_volume, 0.01);
    Stream rng = substream(8, 0);
    const auto levels = estimate_levels(p, grid, 10000, rng);
    double worst_z = 0.0;
    for (const auto& l : levels) worst_z = std::max(worst_z, std::abs(l.mean - l.radius * l.radius / 3.0) / l.std_error);
    const auto rep = bounds(levels);
    const double upper_z = std::abs(rep.upper - 1.0 / 3.0) / rep.upper_std_error;
    return {worst_z <= kEstimatorSigmas && upper_z <= kEstimatorSigmas,
            fmt("max |M_hat - rho^2/3| / se = %.2f over 50 levels; upper = %.5f (|z| = %.2f vs 1/3)", worst_z,
                rep.upper, upper_z)};
}

// 9. Evaluation count and agreement with the no-reuse baseline.
Outcome economy() {
    const auto grid = chain_grid();
    const std::size_t naive_calls = kChainN * kChainM;
    std::vector<std::vector<double>> reuse_means(kEconomyReplications), naive_means(kEconomyReplications);
    std::vector<std::size_t> calls(kEconomyReplications), expected(kEconomyReplications);
    std::vector<std::size_t> naive_counted(kEconomyReplications);
    parallel_for(kEconomyReplications, [&](std::size_t i) {
        auto p = builtin_problem("quadratic-shift", kChainDim, NormKind::euclidean, 1.0);
        std::size_t count = 0;
        p.q = [inner = p.q, &count](const double& v, std::span<const double> d) {
            ++count;
            return inner(v, d);
        };
        Stream a = substream(9, 2 * i), b = substream(9, 2 * i + 1);
        const auto r = estimate_levels(p, grid, kChainN, a);
        calls[i] = count;
        std::size_t fresh = kChainN;
        for (std::size_t l = 1; l < r.size(); ++l) fresh += r[l].fresh;
        expected[i] = fresh;
        count = 0;
        const auto n = estimate_naive(p, grid, kChainN, b);
        naive_counted[i] = count;
        for (std::size_t l = 0; l < kChainM; ++l) {
            reuse_means[i].push_back(r[l].mean);
            naive_means[i].push_back(n[l].mean);
        }
    });
    std::size_t mismatches = 0, max_calls = 0;
    for (std::size_t i = 0; i < kEconomyReplications; ++i) {
        mismatches += calls[i] != expected[i] || naive_counted[i] != naive_calls;
        max_calls = std::max(max_calls, calls[i]);
    }
    const double alpha_level = kEconomyAlpha / kChainM;
    double min_p = 1.0;
    std::size_t rejected = 0;
    for (std::size_t l = 0; l < kChainM; ++l) {
        std::vector<double> x, y;
        for (std::size_t i = 0; i < kEconomyReplications; ++i) {
            x.push_back(reuse_means[i][l]);
            y.push_back(naive_means[i][l]);
        }
        const double p = stats::ks_two_sample(x, y).p_value;
        min_p = std::min(min_p, p);
        rejected += p <= alpha_level;
    }
    const double frac = static_cast<double>(max_calls) / static_cast<double>(naive_calls);
    return {mismatches == 0 && frac < kEconomyFraction && rejected == 0,
            fmt("counter == N + sum n in %zu/%zu runs; max q calls %zu = %.2f%% of N m = %zu (limit %.0f%%); "
                "two-sample KS min p = %.3g over %zu levels, per-level alpha %.0e: %zu rejected",
                kEconomyReplications - mismatches, kEconomyReplications, max_calls, 100.0 * frac, naive_calls,
                100.0 * kEconomyFraction, min_p, kChainM, alpha_level, rejected)};
}

// 10. Density profile at N = 100, lambda = 10.
Outcome density_reference(const std::filesystem::path& out_dir) {
    auto cfg = verify::default_config("density-profile");
    // N = 100, a = 100, d = 2, kappa = e^0.05 (d ln kappa = 0.1, lambda = 10).
    cfg.density.dim = 2;
    cfg.density.n = 100;
    cfg.density.a = 100.0;
    cfg.density.kappa = std::exp(0.05);
    cfg.density.levels = 1000;
    cfg.density.bins = 20;
    cfg.density.replications = 2000;
    cfg.density.seed = 10;
    const auto rep = verify::test_density_profile(cfg);

    // Emit the CSV and re-check the peak from the parsed file.
    const DensityProfile prof = density_empirical(cfg.density);
    std::ostringstream os;
    io::write_density_csv(os, prof);
    io::write_file(out_dir / "density_reference.csv", os.str());
    std::istringstream is(os.str());
    const auto rows = io::read_density_csv(is);
    const auto peak = std::max_element(rows.begin(), rows.end(),
                                       [](const auto& x, const auto& y) { return x.empirical < y.empirical; });
    const double knee = cfg.density.a / cfg.density.kappa;
    const bool csv_peak_ok = std::abs(peak->rho_center - knee) <= prof.bin_width();

    std::string failing;
    for (const auto& c : rep.checks)
        if (!c.passed) failing += " [" + c.name + "]";
    double max_rel = 0.0;
    for (const auto& [k, v] : rep.metrics)
        if (k == "max_relative_error") max_rel = v;
    return {rep.passed() && csv_peak_ok,
            fmt("peak bin center %.1f vs a/kappa = %.3f (bin width %.0f); max relative error %.1f%% (limit 15%%); "
                "%zu/%zu suite checks pass",
                peak->rho_center, knee, prof.bin_width(), 100.0 * max_rel,
                static_cast<std::size_t>(std::count_if(rep.checks.begin(), rep.checks.end(),
                                                       [](const auto& c) { return c.passed; })),
                rep.checks.size()) +
                failing};
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path out_dir = argc > 1 ? argv[1] : ".";
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"reuse output uniform in the final ball", uniformity},
        {"joint law of fresh counts", joint_law},
        {"exact Poisson dominance", dominance},
        {"convergence to Poisson", convergence},
        {"mean fresh count", complexity_mean},
        {"Chernoff tails", tails},
        {"binomial vs Poisson CDF sweep", cdf_ordering},
        {"estimator accuracy", estimator},
        {"reuse economy", economy},
        {"density profile", [&] { return density_reference(out_dir); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2zu %-40s %s  (%.1f s) %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", secs,
                    o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
