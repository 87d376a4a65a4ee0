#pragma once

// Statistical verification suites for the reuse engine and the complexity
// laws. Each suite returns a TestReport whose verdict can be recomputed from
// the recorded statistics and thresholds. Every suite is deterministic in
// (config, seed).
//
// Fault injection (TestConfig::fault) runs a suite against a deliberately
// broken implementation; each suite must fail for at least one fault:
//
//   reuse-uniformity     unfiltered-reuse, wrong-radial-exponent
//   poisson-dominance    fresh-off-by-one
//   poisson-convergence  fresh-off-by-one
//   complexity-tails     fresh-off-by-one
//   density-profile      wrong-radial-exponent

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "robmean/complexity.hpp"
#include "robmean/density.hpp"
#include "robmean/error.hpp"
#include "robmean/geometry.hpp"
#include "robmean/parallel.hpp"
#include "robmean/problem.hpp"
#include "robmean/random.hpp"
#include "robmean/reuse.hpp"
#include "robmean/stats.hpp"

namespace robmean::verify {

enum class Fault { none, unfiltered_reuse, wrong_radial_exponent, fresh_off_by_one };

inline std::string_view to_string(Fault f) {
    switch (f) {
        case Fault::none: return "none";
        case Fault::unfiltered_reuse: return "unfiltered-reuse";
        case Fault::wrong_radial_exponent: return "wrong-radial-exponent";
        case Fault::fresh_off_by_one: return "fresh-off-by-one";
    }
    return "?";
}

inline Fault parse_fault(std::string_view name) {
    if (name == "none") return Fault::none;
    if (name == "unfiltered-reuse") return Fault::unfiltered_reuse;
    if (name == "wrong-radial-exponent") return Fault::wrong_radial_exponent;
    if (name == "fresh-off-by-one") return Fault::fresh_off_by_one;
    throw ValidationError("unknown fault '" + std::string(name) + "'");
}

inline constexpr std::string_view kSuites[] = {"reuse-uniformity", "poisson-dominance", "poisson-convergence",
                                               "complexity-tails", "density-profile"};

struct TestConfig {
    std::string suite = "reuse-uniformity";
    // Chain geometry: geometric-in-volume grid from max_radius to min_radius.
    std::size_t dim = 2;
    NormKind norm = NormKind::euclidean;
    double max_radius = 1.0;
    double min_radius = 0.5;
    std::size_t levels = 20;
    std::size_t n = 1000;
    std::size_t replications = 50;
    std::uint64_t seed = 20081101;
    double alpha = 0.01;
    // reuse-uniformity
    std::size_t sectors = 16;
    // poisson-dominance: k range (0 = Poisson 0.9999 quantile) and chains for the empirical check
    std::size_t k_max = 0;
    std::size_t empirical_chains = 2000;
    // poisson-convergence
    std::vector<std::size_t> m_sweep{2, 5, 20, 100};
    double tv_threshold = 1e-3;
    // density-profile
    DensityConfig density{};
    double relative_tolerance = 0.15;
    double min_expected_count = 50.0;
    double margin_z = 4.0;

    Fault fault = Fault::none;
    unsigned threads = 0;
};

inline void validate(const TestConfig& cfg) {
    robmean::detail::require(cfg.alpha > 0.0 && cfg.alpha < 1.0, "alpha must lie in (0, 1)");
    robmean::detail::require(cfg.replications >= 1, "replications must be >= 1");
    robmean::detail::require(cfg.n >= 1, "N must be >= 1");
    robmean::detail::require(cfg.levels >= 1, "levels must be >= 1");
    robmean::detail::require(cfg.max_radius > 0.0, "max_radius must be > 0");
    robmean::detail::require(cfg.levels == 1 || (cfg.min_radius > 0.0 && cfg.min_radius < cfg.max_radius),
                    "min_radius must lie in (0, max_radius)");
}

/// Shipped configuration for a suite (fixed seeds).
inline TestConfig default_config(std::string_view suite) {
    TestConfig cfg;
    cfg.suite = std::string(suite);
    if (suite == "reuse-uniformity") return cfg;
    if (suite == "poisson-dominance" || suite == "complexity-tails" || suite == "poisson-convergence") {
        // N = 100, 11 levels, V_max / V_min = e^0.1, lambda = 10.
        cfg.dim = 1;
        cfg.max_radius = 1.0;
        cfg.min_radius = std::exp(-0.1);
        cfg.levels = 11;
        cfg.n = 100;
        cfg.replications = 1;
        if (suite == "poisson-dominance") cfg.k_max = 60;
        return cfg;
    }
    if (suite == "density-profile") {
        cfg.replications = cfg.density.replications;
        return cfg;
    }
    throw ValidationError("unknown suite '" + std::string(suite) + "'");
}

enum class Relation { less, less_equal, greater, greater_equal, equal };

inline std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::less: return "<";
        case Relation::less_equal: return "<=";
        case Relation::greater: return ">";
        case Relation::greater_equal: return ">=";
        case Relation::equal: return "==";
    }
    return "?";
}

inline bool holds(double stat, Relation r, double threshold) {
    switch (r) {
        case Relation::less: return stat < threshold;
        case Relation::less_equal: return stat <= threshold;
        case Relation::greater: return stat > threshold;
        case Relation::greater_equal: return stat >= threshold;
        case Relation::equal: return stat == threshold;
    }
    return false;
}

struct Check {
    std::string name;
    std::string provenance;  // which result is being checked
    double statistic = 0.0;
    Relation relation = Relation::less_equal;
    double threshold = 0.0;
    bool passed = false;
    std::string detail;
};

struct TestReport {
    std::string suite;
    Fault fault = Fault::none;
    std::uint64_t seed = 0;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, double>> metrics;

    bool passed() const {
        return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    }

    void check(std::string name, std::string provenance, double stat, Relation rel, double threshold,
               std::string detail = {}) {
        checks.push_back({std::move(name), std::move(provenance), stat, rel, threshold,
                          holds(stat, rel, threshold), std::move(detail)});
    }
    void metric(std::string name, double value) { metrics.emplace_back(std::move(name), value); }
};

namespace detail {

using Rec = ExperimentRecord<std::monostate>;

inline GridSpec suite_grid(const TestConfig& cfg) {
    return build_grid(cfg.max_radius, cfg.levels, GridScheme::geometric_volume, cfg.min_radius);
}

/// Uniform sampler, optionally with the radial law t = U^(1/(d+1)) instead
/// of U^(1/d).
struct FaultySampler {
    Fault fault = Fault::none;

    void operator()(const BallSpec& ball, Stream& rng, std::span<double> out) const {
        sample_uniform_ball(ball, rng, out);
        if (fault != Fault::wrong_radial_exponent) return;
        const double t = norm_of(out, ball.norm) / ball.radius;
        if (t == 0.0) return;
        const double d = static_cast<double>(ball.dim);
        const double scale = std::pow(t, d / (d + 1.0)) / t;
        for (double& x : out) x *= scale;
    }
};

struct FaultyStep {
    Fault fault = Fault::none;

    template <class V, class FreshSource>
    ReuseOutcome<V> operator()(std::vector<ExperimentRecord<V>> parent, double parent_radius, double target_radius,
                               std::size_t n, FreshSource&& fresh) const {
        if (fault == Fault::unfiltered_reuse) {
            ReuseOutcome<V> out;
            out.records = std::move(parent);
            out.reused_count = out.records.size();
            for (std::size_t i = 0; i < out.reused_count; ++i) out.reused_from.push_back(i);
            return out;
        }
        auto out = reuse_step<V>(std::move(parent), parent_radius, target_radius, n, std::forward<FreshSource>(fresh));
        if (fault == Fault::fresh_off_by_one) ++out.fresh_count;
        return out;
    }
};

template <class Visitor>
ChainTrace suite_chain(const TestConfig& cfg, const GridSpec& grid, Stream& rng, Visitor&& visit) {
    FaultySampler sampler{cfg.fault};
    auto factory = [&](std::size_t, double radius) {
        Point delta(cfg.dim);
        sampler(BallSpec{cfg.dim, radius, cfg.norm}, rng, delta);
        const double norm = norm_of(delta, cfg.norm);
        return Rec(std::monostate{}, std::move(delta), norm, 0.0);
    };
    return run_chain_with<std::monostate>(grid, cfg.n, factory, std::forward<Visitor>(visit), FaultyStep{cfg.fault});
}

/// Exact law for the suite geometry; the off-by-one fault adds one phantom
/// fresh draw per level.
inline FreshCountDist suite_exact_dist(const TestConfig& cfg, std::size_t levels) {
    const double log_total = static_cast<double>(cfg.dim) * std::log(cfg.max_radius / cfg.min_radius);
    std::vector<std::size_t> sizes(levels, cfg.n);
    if (cfg.fault == Fault::fresh_off_by_one)
        for (std::size_t l = 1; l < levels; ++l) sizes[l] = sizes[l - 1] + 1;
    std::vector<double> logs(levels - 1, levels > 1 ? -log_total / static_cast<double>(levels - 1) : 0.0);
    return exact_fresh_dist_log(sizes, logs);
}

inline double suite_lambda(const TestConfig& cfg) {
    return static_cast<double>(cfg.n) * static_cast<double>(cfg.dim) * std::log(cfg.max_radius / cfg.min_radius);
}

inline std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

}  // namespace detail

inline TestReport test_reuse_uniformity(const TestConfig& cfg) {
    validate(cfg);
    TestReport rep{cfg.suite, cfg.fault, cfg.seed, {}, {}};
    const GridSpec grid = detail::suite_grid(cfg);
    const double rho_m = grid.radii.back();
    const std::size_t pooled = cfg.n * cfg.replications;
    if (pooled < 100)
        throw ValidationError("reuse-uniformity needs >= 100 pooled final-level samples (N * replications = " +
                              std::to_string(pooled) + ")");

    std::vector<std::vector<Point>> finals(cfg.replications);
    parallel_for(cfg.replications, [&](std::size_t r) {
        Stream rng = substream(cfg.seed, r);
        detail::suite_chain(cfg, grid, rng, [&](const LevelView<std::monostate>& view) {
            if (view.level + 1 != grid.levels()) return;
            for (const auto& rec : view.records) finals[r].push_back(rec.delta());
        });
    }, cfg.threads);

    const double d = static_cast<double>(cfg.dim);
    std::vector<double> radial;
    radial.reserve(pooled);
    std::size_t outside = 0;
    for (const auto& rep_points : finals)
        for (const auto& p : rep_points) {
            const double t = norm_of(p, cfg.norm) / rho_m;
            if (t > 1.0) ++outside;
            radial.push_back(std::pow(t, d));
        }
    const auto ks = stats::ks_uniform(std::move(radial));
    rep.metric("pooled_samples", static_cast<double>(pooled));
    rep.metric("ks_statistic", ks.statistic);
    rep.metric("samples_outside_final_ball", static_cast<double>(outside));
    rep.check("radial KS of (||Z||/rho_m)^d vs U(0,1)", "reuse output is uniform in the smallest ball",
              ks.p_value, Relation::greater, cfg.alpha, "D = " + detail::fmt(ks.statistic));

    if (cfg.dim >= 2) {
        const std::size_t cells = cfg.norm == NormKind::one ? 4 : std::max<std::size_t>(cfg.sectors, 2);
        std::vector<std::size_t> counts(cells, 0);
        for (const auto& rep_points : finals)
            for (const auto& p : rep_points) {
                std::size_t c = 0;
                if (cfg.norm == NormKind::euclidean) {
                    // Angle in the (x1, x2) plane is uniform for an isotropic law.
                    const double angle = std::atan2(p[1], p[0]) + std::numbers::pi;
                    c = static_cast<std::size_t>(angle / (2.0 * std::numbers::pi) * static_cast<double>(cells));
                } else if (cfg.norm == NormKind::sup) {
                    // First coordinate is uniform on [-rho_m, rho_m].
                    c = static_cast<std::size_t>((p[0] / rho_m + 1.0) * 0.5 * static_cast<double>(cells));
                } else {
                    c = (p[0] < 0.0 ? 1 : 0) + (p[1] < 0.0 ? 2 : 0);
                }
                ++counts[std::min(c, cells - 1)];
            }
        const auto chi = stats::chi_square_equiprobable(counts);
        rep.metric("chi_square_statistic", chi.statistic);
        rep.check("equal-measure cell chi-square", "reuse output is uniform in the smallest ball", chi.p_value,
                  Relation::greater, cfg.alpha,
                  "X2 = " + detail::fmt(chi.statistic) + ", dof = " + std::to_string(chi.dof));
    }
    return rep;
}

inline TestReport test_poisson_dominance(const TestConfig& cfg) {
    validate(cfg);
    TestReport rep{cfg.suite, cfg.fault, cfg.seed, {}, {}};
    const FreshCountDist dist = detail::suite_exact_dist(cfg, cfg.levels);
    const double lambda = cfg.levels > 1 ? detail::suite_lambda(cfg) : 0.0;
    rep.metric("lambda", lambda);
    rep.metric("exact_mean", dist.mean());

    std::size_t k_max = cfg.k_max;
    if (k_max == 0) {
        k_max = 1;
        while (poisson_tails(lambda, static_cast<long long>(k_max)).cdf < 0.9999) ++k_max;
    }
    rep.metric("k_max", static_cast<double>(k_max));

    rep.check("|F_exact(0) - exp(-lambda)|", "Pr{sum n = 0} = Pr{P = 0}", std::abs(dist.cdf(0) - std::exp(-lambda)),
              Relation::less_equal, 1e-10);

    std::size_t violations = 0;
    double worst_ratio = 0.0;  // max over k of sf_exact / sf_poisson (< 1 means dominance)
    for (std::size_t k = 1; k <= k_max; ++k) {
        const TailPair exact = dist.tails(static_cast<long long>(k));
        const TailPair pois = poisson_tails(lambda, static_cast<long long>(k));
        if (lambda == 0.0) {
            if (exact.cdf != pois.cdf) ++violations;
            continue;
        }
        if (!cdf_greater(exact, pois)) ++violations;
        if (pois.sf > 0.0) worst_ratio = std::max(worst_ratio, exact.sf / pois.sf);
    }
    rep.metric("max_sf_ratio_exact_over_poisson", worst_ratio);
    rep.check(lambda == 0.0 ? "k with F_exact(k) != F_P(k)" : "k in 1..k_max with F_exact(k) <= F_P(k)",
              "exact CDF dominates the Poisson CDF", static_cast<double>(violations), Relation::equal, 0.0);

    if (cfg.empirical_chains > 0) {
        const GridSpec grid = detail::suite_grid(cfg);
        std::vector<std::size_t> sums(cfg.empirical_chains);
        parallel_for(cfg.empirical_chains, [&](std::size_t i) {
            Stream rng = substream(cfg.seed, i);
            sums[i] = fresh_after_first(detail::suite_chain(cfg, grid, rng, NoopVisitor{}));
        }, cfg.threads);
        std::sort(sums.begin(), sums.end());
        const double eps = stats::dkw_epsilon(sums.size(), cfg.alpha);
        std::size_t emp_violations = 0;
        double worst_gap = -1.0;
        for (std::size_t k = 0; k <= k_max; ++k) {
            const auto below = std::upper_bound(sums.begin(), sums.end(), k) - sums.begin();
            const double ecdf = static_cast<double>(below) / static_cast<double>(sums.size());
            const double pcdf = poisson_tails(lambda, static_cast<long long>(k)).cdf;
            worst_gap = std::max(worst_gap, pcdf - ecdf);
            if (ecdf < pcdf - eps) ++emp_violations;
        }
        rep.metric("dkw_epsilon", eps);
        rep.metric("max_poisson_minus_empirical_cdf", worst_gap);
        rep.check("k with empirical CDF < F_P(k) - eps_DKW", "simulated chains dominate Poisson within a DKW band",
                  static_cast<double>(emp_violations), Relation::equal, 0.0);
    }
    return rep;
}

inline TestReport test_poisson_convergence(const TestConfig& cfg) {
    validate(cfg);
    robmean::detail::require(!cfg.m_sweep.empty(), "m sweep must be nonempty");
    TestReport rep{cfg.suite, cfg.fault, cfg.seed, {}, {}};
    const double lambda = detail::suite_lambda(cfg);
    rep.metric("lambda", lambda);
    std::vector<double> tv;
    for (std::size_t m : cfg.m_sweep) {
        robmean::detail::require(m >= 2, "m sweep entries must be >= 2");
        tv.push_back(total_variation_to_poisson(detail::suite_exact_dist(cfg, m), lambda));
        rep.metric("tv_m" + std::to_string(m), tv.back());
    }
    std::size_t increases = 0;
    for (std::size_t i = 1; i < tv.size(); ++i)
        if (tv[i] > tv[i - 1] + 1e-12) ++increases;
    rep.check("sweep steps where TV increases (slack 1e-12)", "exact law converges to Poisson",
              static_cast<double>(increases), Relation::equal, 0.0);
    if (cfg.m_sweep.back() != cfg.m_sweep.front())
        rep.check("TV(m_last) - TV(m_first)", "exact law converges to Poisson", tv.back() - tv.front(),
                  Relation::less, 0.0);
    rep.check("TV(m_last)", "exact law converges to Poisson", tv.back(), Relation::less, cfg.tv_threshold);
    return rep;
}

inline TestReport test_complexity_tails(const TestConfig& cfg) {
    validate(cfg);
    TestReport rep{cfg.suite, cfg.fault, cfg.seed, {}, {}};
    const FreshCountDist dist = detail::suite_exact_dist(cfg, cfg.levels);
    const double lambda = cfg.levels > 1 ? detail::suite_lambda(cfg) : 0.0;
    rep.metric("lambda", lambda);
    if (lambda == 0.0) {
        // The fresh count is 0 almost surely; every tail bound is vacuous.
        rep.check("Pr{sum n > 0}", "degenerate lambda = 0", dist.sf(0), Relation::equal, 0.0);
        return rep;
    }

    std::size_t violations = 0;
    std::size_t checked = 0;
    double worst = 0.0;
    for (auto k = static_cast<long long>(std::floor(lambda)) + 1; static_cast<double>(k) <= 3.0 * lambda; ++k) {
        if (static_cast<double>(k) <= lambda) continue;
        const double exact = dist.sf(k - 1);
        const double bound = chernoff_tail(lambda, static_cast<double>(k));
        ++checked;
        worst = std::max(worst, exact / bound);
        if (exact > bound) ++violations;
    }
    rep.metric("chernoff_k_checked", static_cast<double>(checked));
    rep.metric("max_exact_over_chernoff", worst);
    rep.check("integer k in (lambda, 3 lambda] with Pr{S >= k} > chernoff", "Chernoff tail bound",
              static_cast<double>(violations), Relation::equal, 0.0,
              std::to_string(checked) + " values of k checked");

    const double e_lambda = std::numbers::e * lambda;
    const double at_e = dist.sf(static_cast<long long>(std::ceil(e_lambda)) - 1);
    rep.metric("exact_tail_at_e_lambda", at_e);
    rep.check("Pr{S >= e lambda}", "tail bound e^-lambda", at_e, Relation::less_equal, std::exp(-lambda));

    std::size_t rel_violations = 0;
    for (int i = 1; i <= 9; ++i) {
        const double eps = 0.1 * i;
        const double x = (1.0 + eps) * lambda;
        const double exact = dist.sf(static_cast<long long>(std::ceil(x)) - 1);
        if (exact > relative_tail(lambda, eps)) ++rel_violations;
    }
    rep.check("eps in {0.1..0.9} with Pr{S >= (1+eps) lambda} > exp(-eps^2 lambda / 4)", "relative tail bound",
              static_cast<double>(rel_violations), Relation::equal, 0.0);
    return rep;
}

inline TestReport test_density_profile(const TestConfig& cfg) {
    TestReport rep{cfg.suite, cfg.fault, cfg.density.seed, {}, {}};
    DensityConfig dc = cfg.density;
    dc.threads = cfg.threads;
    const DensityProfile prof = density_empirical(dc, detail::FaultySampler{cfg.fault});
    const double width = prof.bin_width();
    const double knee = dc.a / dc.kappa;
    const double z = cfg.margin_z;

    std::size_t qualifying = 0;
    std::size_t rel_violations = 0;
    double worst_rel = 0.0;
    std::size_t env_violations = 0;
    for (const auto& b : prof.bins) {
        if (b.flag == DensityRegime::exact) {
            if (b.expected_count < cfg.min_expected_count) continue;
            ++qualifying;
            const double rel = std::abs(b.empirical - b.theoretical_bin) / b.theoretical_bin;
            worst_rel = std::max(worst_rel, rel);
            if (rel > cfg.relative_tolerance) ++rel_violations;
        } else if (b.empirical > b.theoretical_bin + z * b.empirical_se) {
            ++env_violations;
        }
    }
    rep.metric("bins_compared", static_cast<double>(qualifying));
    rep.metric("max_relative_error", worst_rel);
    rep.check("bins on (0, a/kappa] compared", "density formula below a/kappa", static_cast<double>(qualifying),
              Relation::greater_equal, 1.0);
    rep.check("bins on (0, a/kappa] with relative error > tolerance", "density formula below a/kappa",
              static_cast<double>(rel_violations), Relation::equal, 0.0,
              "tolerance " + detail::fmt(cfg.relative_tolerance));
    rep.check("bins on (a/kappa, a] above envelope + z se", "density envelope N d / rho",
              static_cast<double>(env_violations), Relation::equal, 0.0);

    std::size_t peak = 0;
    for (std::size_t i = 1; i < prof.bins.size(); ++i)
        if (prof.bins[i].empirical > prof.bins[peak].empirical) peak = i;
    rep.metric("peak_bin_center", prof.bins[peak].center);
    rep.metric("a_over_kappa", knee);
    rep.check("|peak bin center - a/kappa|", "profile peaks at a/kappa", std::abs(prof.bins[peak].center - knee),
              Relation::less_equal, width);

    std::size_t dips = 0;
    auto margin = [&](std::size_t i, std::size_t j) {
        return z * std::hypot(prof.bins[i].empirical_se, prof.bins[j].empirical_se);
    };
    for (std::size_t i = 0; i + 1 <= peak && peak > 0; ++i)
        if (prof.bins[i].empirical > prof.bins[i + 1].empirical + margin(i, i + 1)) ++dips;
    for (std::size_t i = peak + 1; i < prof.bins.size(); ++i)
        if (prof.bins[i].empirical > prof.bins[i - 1].empirical + margin(i, i - 1)) ++dips;
    rep.check("monotonicity breaks beyond z se around the peak", "profile is unimodal", static_cast<double>(dips),
              Relation::equal, 0.0);

    const double budget = static_cast<double>(dc.n) * (1.0 + static_cast<double>(dc.dim) * std::log(dc.kappa));
    rep.metric("mean_total_fresh", prof.mean_total_fresh);
    rep.check("mean total fresh - z se", "E[total fresh] <= N (1 + d ln kappa)",
              prof.mean_total_fresh - z * prof.total_fresh_se, Relation::less_equal, budget);
    return rep;
}

inline TestReport run_suite(const TestConfig& cfg) {
    if (cfg.suite == "reuse-uniformity") return test_reuse_uniformity(cfg);
    if (cfg.suite == "poisson-dominance") return test_poisson_dominance(cfg);
    if (cfg.suite == "poisson-convergence") return test_poisson_convergence(cfg);
    if (cfg.suite == "complexity-tails") return test_complexity_tails(cfg);
    if (cfg.suite == "density-profile") return test_density_profile(cfg);
    throw ValidationError("unknown suite '" + cfg.suite + "'");
}

inline nlohmann::ordered_json to_json(const TestReport& rep) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["suite"] = rep.suite;
    j["fault"] = std::string(to_string(rep.fault));
    j["seed"] = rep.seed;
    j["passed"] = rep.passed();
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name},
                          {"provenance", c.provenance},
                          {"statistic", c.statistic},
                          {"relation", std::string(to_string(c.relation))},
                          {"threshold", c.threshold},
                          {"passed", c.passed},
                          {"detail", c.detail}});
    }
    auto& metrics = j["metrics"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rep.metrics) metrics[k] = v;
    return j;
}

inline std::string to_text(const TestReport& rep) {
    std::size_t width = 0;
    for (const auto& c : rep.checks) width = std::max(width, c.name.size());
    std::ostringstream os;
    os << "suite " << rep.suite << " (seed " << rep.seed << ", fault " << to_string(rep.fault) << "): "
       << (rep.passed() ? "PASS" : "FAIL") << '\n';
    for (const auto& c : rep.checks) {
        os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << std::left << std::setw(static_cast<int>(width))
           << c.name << "  " << std::setprecision(6) << c.statistic << ' ' << to_string(c.relation) << ' '
           << c.threshold;
        if (!c.detail.empty()) os << "  (" << c.detail << ')';
        os << '\n';
    }
    for (const auto& [k, v] : rep.metrics) os << "    " << k << " = " << std::setprecision(10) << v << '\n';
    return os.str();
}

}  // namespace robmean::verify
