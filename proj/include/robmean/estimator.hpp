#pragma once

// Per-radius empirical means M(rho) and the grid bounds on E[Q].
//
// M(rho) is the mean of q(V, Delta) with Delta uniform on the ball of
// radius rho. For an admissible uncertainty (norm-bounded by r, density a
// nonincreasing function of the norm), E[Q] lies between the infimum and
// the supremum of M over (0, r). Here those extrema are approximated by the
// minimum and maximum over a finite grid; each level also reports its
// standard error. No correction is applied for looking at many levels at
// once.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "robmean/error.hpp"
#include "robmean/problem.hpp"
#include "robmean/reuse.hpp"

namespace robmean {

struct LevelEstimate {
    double radius = 0.0;
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(N)
    std::size_t reused = 0;
    std::size_t fresh = 0;
};

struct BoundsReport {
    double lower = 0.0;
    double upper = 0.0;
    double argmin_radius = 0.0;
    double argmax_radius = 0.0;
    double lower_std_error = 0.0;
    double upper_std_error = 0.0;
    std::vector<LevelEstimate> levels;
    std::size_t total_fresh = 0;

    /// The bounds are grid extrema, not the true inf/sup over (0, r).
    static constexpr const char* kCaveat =
        "lower/upper are min/max of per-level Monte Carlo means over a finite radius grid; "
        "they approximate the inf/sup of M(rho) only as well as the grid resolution and "
        "per-level standard errors allow";
};

namespace detail {

/// Welford accumulator.
class RunningMoments {
public:
    void add(double x) {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }
    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
    double std_error() const {
        return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

template <class Records>
LevelEstimate summarize(double radius, const Records& records, std::size_t reused) {
    RunningMoments acc;
    for (const auto& rec : records) acc.add(rec.q_value());
    return LevelEstimate{radius, acc.mean(), acc.std_error(), reused, records.size() - reused};
}

}  // namespace detail

/// Per-level estimates along the reuse chain. q is called total_fresh times.
template <class V>
std::vector<LevelEstimate> estimate_levels(const ProblemDef<V>& problem, const GridSpec& grid,
                                           std::size_t n, Stream& rng) {
    detail::require(n >= 2, "sample size N must be >= 2 for a standard error");
    std::vector<LevelEstimate> out;
    out.reserve(grid.levels());
    run_chain(problem, grid, n, rng, [&](const LevelView<V>& view) {
        out.push_back(detail::summarize(view.radius, view.records, view.reused));
    });
    return out;
}

/// Baseline without reuse: N fresh records at every level, N*m q calls.
template <class V>
std::vector<LevelEstimate> estimate_naive(const ProblemDef<V>& problem, const GridSpec& grid,
                                          std::size_t n, Stream& rng) {
    validate(problem);
    detail::require_grid_in_problem(grid, problem.max_radius);
    detail::require(n >= 2, "sample size N must be >= 2 for a standard error");
    auto factory = detail::checked_factory(problem, rng);
    std::vector<LevelEstimate> out;
    out.reserve(grid.levels());
    for (std::size_t l = 0; l < grid.levels(); ++l) {
        detail::RunningMoments acc;
        for (std::size_t i = 0; i < n; ++i) acc.add(factory(l, grid.radii[l]).q_value());
        out.push_back({grid.radii[l], acc.mean(), acc.std_error(), 0, n});
    }
    return out;
}

inline BoundsReport bounds(std::vector<LevelEstimate> levels) {
    detail::require(!levels.empty(), "bounds need at least one level estimate");
    BoundsReport rep;
    const auto [lo, hi] = std::minmax_element(levels.begin(), levels.end(),
                                              [](const auto& a, const auto& b) { return a.mean < b.mean; });
    rep.lower = lo->mean;
    rep.upper = hi->mean;
    rep.argmin_radius = lo->radius;
    rep.argmax_radius = hi->radius;
    rep.lower_std_error = lo->std_error;
    rep.upper_std_error = hi->std_error;
    for (const auto& l : levels) rep.total_fresh += l.fresh;
    rep.levels = std::move(levels);
    return rep;
}

}  // namespace robmean
