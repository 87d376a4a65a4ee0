#pragma once

// Radial density of fresh samples when the reuse chain sweeps the radii
// [a/kappa, a] with a dense grid.
//
// Every fresh sample that falls inside the smallest ball survives to the
// last level, so below a/kappa the count inside radius rho is
// Binomial(N, (kappa rho / a)^d) and the density is exactly
// (N d / rho)(kappa rho / a)^d. Above a/kappa only the envelope N d / rho is
// known. The profile peaks at a/kappa.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "robmean/error.hpp"
#include "robmean/geometry.hpp"
#include "robmean/parallel.hpp"
#include "robmean/problem.hpp"
#include "robmean/random.hpp"
#include "robmean/reuse.hpp"

namespace robmean {

enum class DensityRegime { exact, upper_bound };

inline std::string_view to_string(DensityRegime r) {
    return r == DensityRegime::exact ? "exact" : "upper-bound";
}

namespace detail {

inline void require_density_params(std::size_t n, std::size_t dim, double kappa, double a) {
    require(n >= 1, "N must be >= 1");
    require(dim >= 1, "dimension must be >= 1");
    require(std::isfinite(kappa) && kappa > 1.0, "kappa must be > 1");
    require(std::isfinite(a) && a > 0.0, "a must be > 0");
}

}  // namespace detail

inline DensityRegime density_regime(double rho, double kappa, double a) {
    return rho <= a / kappa ? DensityRegime::exact : DensityRegime::upper_bound;
}

/// D(rho) on (0, a/kappa]; the envelope N d / rho above it.
inline double density_theoretical(double rho, std::size_t n, std::size_t dim, double kappa, double a) {
    detail::require_density_params(n, dim, kappa, a);
    detail::require(rho > 0.0 && rho <= a, "rho must lie in (0, a]");
    const double nd = static_cast<double>(n) * static_cast<double>(dim);
    if (rho > a / kappa) return nd / rho;
    return nd / rho * std::pow(kappa * rho / a, static_cast<double>(dim));
}

/// Integral of the piecewise theoretical profile over [lo, hi], divided by
/// the width. Exact part below a/kappa, envelope above.
inline double density_bin_average(double lo, double hi, std::size_t n, std::size_t dim, double kappa, double a) {
    detail::require_density_params(n, dim, kappa, a);
    detail::require(lo >= 0.0 && hi > lo && hi <= a * (1.0 + 1e-12), "bin must lie inside [0, a]");
    const double nn = static_cast<double>(n);
    const double d = static_cast<double>(dim);
    const double knee = a / kappa;
    double mass = 0.0;
    if (lo < knee) {
        const double top = std::min(hi, knee);
        mass += nn * (std::pow(kappa * top / a, d) - std::pow(kappa * lo / a, d));
    }
    if (hi > knee) mass += nn * d * std::log(hi / std::max(lo, knee));
    return mass / (hi - lo);
}

struct DensityBin {
    double lo = 0.0;
    double hi = 0.0;
    double center = 0.0;
    double empirical = 0.0;      // fresh samples per unit radius, per replication
    double empirical_se = 0.0;   // standard error of `empirical` across replications
    double theoretical = 0.0;    // profile value at the bin center
    double theoretical_bin = 0.0;  // profile averaged over the bin
    double expected_count = 0.0;   // theoretical_bin * width * replications
    DensityRegime flag = DensityRegime::exact;
};

struct DensityConfig {
    std::size_t dim = 2;
    NormKind norm = NormKind::euclidean;
    std::size_t n = 100;
    double kappa = 1.0512710963760241;  // exp(0.05): d ln kappa = 0.1 at d = 2
    double a = 100.0;
    std::size_t levels = 1000;
    std::size_t bins = 20;
    std::size_t replications = 2000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct DensityProfile {
    DensityConfig config;
    std::vector<DensityBin> bins;
    double mean_total_fresh = 0.0;
    double total_fresh_se = 0.0;

    double bin_width() const { return bins.empty() ? 0.0 : bins.front().hi - bins.front().lo; }
};

inline void validate(const DensityConfig& cfg) {
    detail::require_density_params(cfg.n, cfg.dim, cfg.kappa, cfg.a);
    detail::require(cfg.levels >= 2, "density grid needs at least 2 levels");
    detail::require(cfg.bins >= 1, "density needs at least 1 bin");
    detail::require(cfg.replications >= 1, "replications must be >= 1");
}

/// Draws uniform points in a ball; the default fresh-delta sampler.
struct UniformBallSampler {
    void operator()(const BallSpec& ball, Stream& rng, std::span<double> out) const {
        sample_uniform_ball(ball, rng, out);
    }
};

/// Histogram of the norms of all fresh records of a chain over a geometric
/// grid from a down to a/kappa, averaged over replications. Replication i
/// uses substream(cfg.seed, i).
template <class DeltaSampler = UniformBallSampler>
DensityProfile density_empirical(const DensityConfig& cfg, DeltaSampler sampler = {}) {
    validate(cfg);
    const GridSpec grid = build_grid(cfg.a, cfg.levels, GridScheme::geometric_volume, cfg.a / cfg.kappa);
    const double width = cfg.a / static_cast<double>(cfg.bins);

    using Rec = ExperimentRecord<std::monostate>;
    std::vector<std::vector<std::uint32_t>> counts(cfg.replications);
    std::vector<std::size_t> totals(cfg.replications);

    parallel_for(cfg.replications, [&](std::size_t rep) {
        Stream rng = substream(cfg.seed, rep);
        auto& hist = counts[rep];
        hist.assign(cfg.bins, 0);
        auto factory = [&](std::size_t, double radius) {
            Point delta(cfg.dim);
            sampler(BallSpec{cfg.dim, radius, cfg.norm}, rng, delta);
            const double norm = norm_of(delta, cfg.norm);
            return Rec(std::monostate{}, std::move(delta), norm, 0.0);
        };
        auto visit = [&](const LevelView<std::monostate>& view) {
            for (const auto& rec : view.fresh()) {
                auto b = static_cast<std::size_t>(rec.delta_norm() / width);
                ++hist[std::min(b, cfg.bins - 1)];
            }
        };
        totals[rep] = run_chain_with<std::monostate>(grid, cfg.n, factory, visit).total_fresh;
    }, cfg.threads);

    DensityProfile prof;
    prof.config = cfg;
    const double reps = static_cast<double>(cfg.replications);
    for (std::size_t b = 0; b < cfg.bins; ++b) {
        DensityBin bin;
        bin.lo = width * static_cast<double>(b);
        bin.hi = b + 1 == cfg.bins ? cfg.a : width * static_cast<double>(b + 1);
        bin.center = 0.5 * (bin.lo + bin.hi);
        double sum = 0.0;
        double sum_sq = 0.0;
        for (const auto& h : counts) {
            sum += h[b];
            sum_sq += static_cast<double>(h[b]) * h[b];
        }
        const double mean = sum / reps;
        const double var = cfg.replications > 1 ? std::max(0.0, (sum_sq - reps * mean * mean) / (reps - 1.0)) : mean;
        bin.empirical = mean / width;
        bin.empirical_se = std::sqrt(var / reps) / width;
        bin.theoretical = density_theoretical(bin.center, cfg.n, cfg.dim, cfg.kappa, cfg.a);
        bin.theoretical_bin = density_bin_average(bin.lo, bin.hi, cfg.n, cfg.dim, cfg.kappa, cfg.a);
        bin.expected_count = bin.theoretical_bin * width * reps;
        bin.flag = bin.hi <= cfg.a / cfg.kappa ? DensityRegime::exact : DensityRegime::upper_bound;
        prof.bins.push_back(bin);
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (auto t : totals) {
        sum += static_cast<double>(t);
        sum_sq += static_cast<double>(t) * static_cast<double>(t);
    }
    prof.mean_total_fresh = sum / reps;
    const double var = cfg.replications > 1
                           ? std::max(0.0, (sum_sq - reps * prof.mean_total_fresh * prof.mean_total_fresh) / (reps - 1.0))
                           : 0.0;
    prof.total_fresh_se = std::sqrt(var / reps);
    return prof;
}

}  // namespace robmean
